#pragma once

// Brute-force evaluations of the defining sums, kept independent from the
// library's kernels: they work on plain count vectors, normalise every term
// before combining, and accumulate in long double.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace shiftgate::oracle {

using Counts = std::vector<std::uint64_t>;

inline long double total_of(const Counts& c) {
  long double t = 0;
  for (const auto v : c) t += static_cast<long double>(v);
  return t;
}

/// t^-1 * sum min(P, Q)
inline double intersection(const Counts& p, const Counts& q) {
  const long double t = total_of(p);
  long double sum = 0;
  for (std::size_t x = 0; x < p.size(); ++x) sum += p[x] < q[x] ? p[x] : q[x];
  return static_cast<double>(sum / t);
}

/// sum P/t * log10(((P + e)/t) / ((Q + e)/t))
inline double relative_entropy(const Counts& p, const Counts& q, double eps) {
  const long double t = total_of(p);
  long double sum = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const long double pn = static_cast<long double>(p[x]) / t;
    const long double num = (static_cast<long double>(p[x]) + eps) / t;
    const long double den = (static_cast<long double>(q[x]) + eps) / t;
    sum += pn * std::log10(num / den);
  }
  return static_cast<double>(sum);
}

/// sum sqrt(P/t * Q/t)
inline double bhattacharyya_coefficient(const Counts& p, const Counts& q) {
  const long double t = total_of(p);
  long double sum = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    sum += std::sqrt((static_cast<long double>(p[x]) / t) * (static_cast<long double>(q[x]) / t));
  }
  return static_cast<double>(sum);
}

/// Empty for disjoint supports.
inline std::optional<double> bhattacharyya_distance(const Counts& p, const Counts& q) {
  const double bc = bhattacharyya_coefficient(p, q);
  if (bc == 0.0) return std::nullopt;
  return static_cast<double>(-std::log(static_cast<long double>(bc)));
}

/// Every way of distributing `total` counts over `bins` bins.
inline void compositions(std::size_t bins, std::uint64_t total, Counts& current,
                         std::vector<Counts>& out) {
  if (current.size() + 1 == bins) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (std::uint64_t v = 0; v <= total; ++v) {
    current.push_back(v);
    compositions(bins, total - v, current, out);
    current.pop_back();
  }
}

inline std::vector<Counts> compositions(std::size_t bins, std::uint64_t total) {
  std::vector<Counts> out;
  Counts current;
  compositions(bins, total, current, out);
  return out;
}

}  // namespace shiftgate::oracle
