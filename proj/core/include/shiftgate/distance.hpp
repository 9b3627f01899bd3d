#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "shiftgate/histogram.hpp"
#include "shiftgate/image.hpp"

namespace shiftgate {

/// One histogram count; added to both sides of the relative-entropy ratio.
inline constexpr double kDefaultEpsilon = 1.0;

/// sum_x min(P(x), Q(x)) / t_p. 1 for identical histograms, 0 for disjoint.
/// Throws kMismatchedTotals when totals differ, kEmptyHistogram when zero.
double histogram_intersection(const IntensityHistogram& p, const IntensityHistogram& q);

/// sum_x P(x)/t_p * log10((P(x) + eps) / (Q(x) + eps)). Direction is P -> Q
/// with P the reference. Throws kNonPositiveEpsilon for eps <= 0 (or NaN).
double relative_entropy(const IntensityHistogram& p, const IntensityHistogram& q,
                        double epsilon = kDefaultEpsilon);

/// sum_x sqrt(P(x) Q(x)) / t_p, in [0, 1].
double bhattacharyya_coefficient(const IntensityHistogram& p, const IntensityHistogram& q);

/// -ln(coefficient). Throws kInfiniteDistance when the supports are disjoint.
double bhattacharyya_distance(const IntensityHistogram& p, const IntensityHistogram& q);

struct DistanceReport {
  double hi = 0.0;
  double kl = 0.0;
  /// Empty when the Bhattacharyya distance is infinite (disjoint supports).
  std::optional<double> db;
  ColorSpace space = ColorSpace::kRgb;
  double epsilon = kDefaultEpsilon;

  bool db_infinite() const noexcept { return !db.has_value(); }

  friend bool operator==(const DistanceReport&, const DistanceReport&) = default;
};

DistanceReport distance_report(const IntensityHistogram& reference,
                               const IntensityHistogram& query, ColorSpace space,
                               double epsilon = kDefaultEpsilon);

/// Histograms both images in `space` (RGB inputs are converted when `space`
/// is YUV) and evaluates all three metrics.
DistanceReport distance_report(const Image& reference, const Image& query, ColorSpace space,
                               double epsilon = kDefaultEpsilon);

/// CSV header `space,hi,kl,db,epsilon`; infinite db is written as `inf`.
std::string_view distance_csv_header() noexcept;
std::string to_csv_row(const DistanceReport& report);
DistanceReport distance_report_from_csv_row(std::string_view row);

/// JSON object with the same keys; infinite db is written as null.
std::string to_json(const DistanceReport& report);
DistanceReport distance_report_from_json(std::string_view json);

}  // namespace shiftgate
