#include "shiftgate/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "shiftgate/errors.hpp"
#include "text_io.hpp"

namespace shiftgate {
namespace {

void require_comparable(const IntensityHistogram& p, const IntensityHistogram& q) {
  if (p.total() != q.total()) {
    throw Error(ErrorCode::kMismatchedTotals,
                "histogram totals differ (" + std::to_string(p.total()) + " vs " +
                    std::to_string(q.total()) + ")");
  }
  if (p.empty()) throw Error(ErrorCode::kEmptyHistogram, "histogram total is zero");
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kNonPositiveEpsilon, "epsilon must be a positive finite number");
  }
}

}  // namespace

double histogram_intersection(const IntensityHistogram& p, const IntensityHistogram& q) {
  require_comparable(p, q);
  std::uint64_t overlap = 0;
  for (std::size_t x = 0; x < kBinCount; ++x) {
    overlap += std::min(p.bins()[x], q.bins()[x]);
  }
  return static_cast<double>(overlap) / static_cast<double>(p.total());
}

double relative_entropy(const IntensityHistogram& p, const IntensityHistogram& q,
                        double epsilon) {
  require_comparable(p, q);
  require_epsilon(epsilon);
  double sum = 0.0;
  for (std::size_t x = 0; x < kBinCount; ++x) {
    const auto px = p.bins()[x];
    if (px == 0) continue;  // zero-mass terms contribute exactly zero
    const double pd = static_cast<double>(px);
    sum += pd * std::log10((pd + epsilon) / (static_cast<double>(q.bins()[x]) + epsilon));
  }
  return sum / static_cast<double>(p.total());
}

double bhattacharyya_coefficient(const IntensityHistogram& p, const IntensityHistogram& q) {
  require_comparable(p, q);
  double sum = 0.0;
  for (std::size_t x = 0; x < kBinCount; ++x) {
    sum += std::sqrt(static_cast<double>(p.bins()[x]) * static_cast<double>(q.bins()[x]));
  }
  return sum / static_cast<double>(p.total());
}

double bhattacharyya_distance(const IntensityHistogram& p, const IntensityHistogram& q) {
  const double bc = bhattacharyya_coefficient(p, q);
  if (bc <= 0.0) {
    throw Error(ErrorCode::kInfiniteDistance, "histogram supports are disjoint");
  }
  // Rounding can push the coefficient a hair above 1.
  return std::max(0.0, -std::log(bc));
}

DistanceReport distance_report(const IntensityHistogram& reference,
                               const IntensityHistogram& query, ColorSpace space,
                               double epsilon) {
  DistanceReport report;
  report.space = space;
  report.epsilon = epsilon;
  report.hi = histogram_intersection(reference, query);
  report.kl = relative_entropy(reference, query, epsilon);
  try {
    report.db = bhattacharyya_distance(reference, query);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfiniteDistance) throw;
    report.db.reset();
  }
  return report;
}

DistanceReport distance_report(const Image& reference, const Image& query, ColorSpace space,
                               double epsilon) {
  if (reference.width() != query.width() || reference.height() != query.height()) {
    throw Error(ErrorCode::kMismatchedTotals, "reference and query dimensions differ");
  }
  const auto in_space = [space](const Image& image) {
    if (space == ColorSpace::kYuv && image.space() == ColorSpace::kRgb) {
      return build_histogram(rgb_to_yuv(image));
    }
    if (space == ColorSpace::kRgb && image.space() == ColorSpace::kYuv) {
      return build_histogram(yuv_to_rgb(image));
    }
    return build_histogram(image);
  };
  return distance_report(in_space(reference), in_space(query), space, epsilon);
}

std::string_view distance_csv_header() noexcept { return "space,hi,kl,db,epsilon"; }

std::string to_csv_row(const DistanceReport& report) {
  std::string row(to_string(report.space));
  row += ',' + detail::format_double(report.hi);
  row += ',' + detail::format_double(report.kl);
  row += ',' + detail::format_optional(report.db);
  row += ',' + detail::format_double(report.epsilon);
  return row;
}

DistanceReport distance_report_from_csv_row(std::string_view row) {
  const auto fields = detail::split_fields(row);
  if (fields.size() != 5) {
    throw Error(ErrorCode::kMalformedRecord, "distance row '" + std::string(row) + "'");
  }
  DistanceReport report;
  report.space = parse_color_space(fields[0]);
  report.hi = detail::parse_double(fields[1]);
  report.kl = detail::parse_double(fields[2]);
  report.db = detail::parse_optional(fields[3]);
  report.epsilon = detail::parse_double(fields[4]);
  return report;
}

std::string to_json(const DistanceReport& report) {
  nlohmann::ordered_json j;
  j["space"] = to_string(report.space);
  j["hi"] = report.hi;
  j["kl"] = report.kl;
  j["db"] = report.db ? nlohmann::ordered_json(*report.db) : nlohmann::ordered_json(nullptr);
  j["epsilon"] = report.epsilon;
  return j.dump();
}

DistanceReport distance_report_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    DistanceReport report;
    report.space = parse_color_space(j.at("space").get<std::string>());
    report.hi = j.at("hi").get<double>();
    report.kl = j.at("kl").get<double>();
    if (!j.at("db").is_null()) report.db = j.at("db").get<double>();
    report.epsilon = j.at("epsilon").get<double>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("distance report JSON: ") + e.what());
  }
}

}  // namespace shiftgate
