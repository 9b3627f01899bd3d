#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftgate/distance.hpp"
#include "shiftgate/image.hpp"

namespace shiftgate {

enum class GatePolicy {
  kAnyMetric,   // safe when at least one metric is inside its limit
  kAllMetrics,  // safe only when every metric is inside its limit
};

std::string_view to_string(GatePolicy policy) noexcept;
/// Accepts "any" / "all" (also the full enumerator names).
GatePolicy parse_gate_policy(std::string_view text);

struct SafetyThresholds {
  double hi_min = 0.0;
  double kl_max = 0.0;
  /// May be +infinity when calibration met disjoint supports.
  double db_max = 0.0;
  int safe_shift = 0;
  ColorSpace space = ColorSpace::kRgb;
  double epsilon = kDefaultEpsilon;
  /// ISO-8601 UTC timestamp, empty for literal thresholds.
  std::string calibrated_at;
  std::size_t n_references = 0;

  /// Throws kInvalidArgument when any limit is out of range.
  void validate() const;

  friend bool operator==(const SafetyThresholds&, const SafetyThresholds&) = default;
};

/// The worst case over +sr and -sr for every reference: minimum hi, maximum
/// kl and db. Throws kEmptyReferenceSet for an empty list and
/// kInvalidArgument when sr is outside [0, 255].
SafetyThresholds calibrate(std::span<const Image> references, int safe_shift,
                           ColorSpace space = ColorSpace::kRgb,
                           double epsilon = kDefaultEpsilon);

struct MetricCheck {
  /// Empty only for an infinite Bhattacharyya distance.
  std::optional<double> value;
  double threshold = 0.0;
  bool pass = false;
};

struct GateDecision {
  bool safe = false;
  MetricCheck hi;
  MetricCheck kl;
  MetricCheck db;
  GatePolicy policy = GatePolicy::kAnyMetric;
};

/// Applies hi > hi_min, kl < kl_max, db < db_max to an already measured
/// report and combines them under `policy`.
GateDecision decide(const SafetyThresholds& thresholds, const DistanceReport& measured,
                    GatePolicy policy = GatePolicy::kAnyMetric);

/// Measures reference vs query in the thresholds' space and epsilon.
GateDecision gate(const SafetyThresholds& thresholds, const Image& reference,
                  const Image& query, GatePolicy policy = GatePolicy::kAnyMetric);

/// A lazily produced frame. `load` may throw; the error is attached to that
/// frame's decision.
struct FrameSource {
  std::int64_t frame = 0;
  std::function<Image()> load;
};

struct FrameDecision {
  std::int64_t frame = 0;
  std::optional<GateDecision> decision;
  /// Non-empty when the frame could not be evaluated. Such frames are unsafe.
  std::string error;

  bool safe() const noexcept { return decision.has_value() && decision->safe; }
};

struct StreamResult {
  std::vector<FrameDecision> frames;
  /// Position (not frame id) of the first unsafe entry.
  std::optional<std::size_t> first_unsafe;
};

/// One decision per frame, in input order.
StreamResult gate_stream(const SafetyThresholds& thresholds, const Image& reference,
                         std::span<const FrameSource> frames,
                         GatePolicy policy = GatePolicy::kAnyMetric);
/// In-memory variant; frame ids are positions.
StreamResult gate_stream(const SafetyThresholds& thresholds, const Image& reference,
                         std::span<const Image> frames,
                         GatePolicy policy = GatePolicy::kAnyMetric);

/// `{hi_min, kl_max, db_max, safe_shift, space, epsilon, calibrated_at,
/// n_references}`. An infinite db_max is written as null.
std::string to_json(const SafetyThresholds& thresholds);
SafetyThresholds thresholds_from_json(std::string_view json);
void save_thresholds(const SafetyThresholds& thresholds, const std::filesystem::path& path);
SafetyThresholds load_thresholds(const std::filesystem::path& path);

/// `frame,hi,kl,db,safe,policy`. Frames that failed to evaluate carry empty
/// metric cells and safe = false.
void write_decisions_csv(std::ostream& out, const StreamResult& result, GatePolicy policy);

struct DecisionRow {
  std::int64_t frame = 0;
  std::optional<double> hi;
  std::optional<double> kl;
  std::optional<double> db;  // empty for both "inf" and a missing cell
  bool db_infinite = false;
  bool safe = false;
  GatePolicy policy = GatePolicy::kAnyMetric;

  friend bool operator==(const DecisionRow&, const DecisionRow&) = default;
};
std::vector<DecisionRow> read_decisions_csv(std::istream& in);

}  // namespace shiftgate
