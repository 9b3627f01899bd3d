#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftgate/dataset.hpp"
#include "shiftgate/distance.hpp"
#include "shiftgate/error_metrics.hpp"
#include "shiftgate/image.hpp"

namespace shiftgate {

struct SweepResult {
  int shift = 0;
  double hi = 0.0;
  double kl = 0.0;
  std::optional<double> db;  // empty when infinite
  ColorSpace space = ColorSpace::kRgb;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

inline constexpr int kDefaultSweepFrom = -120;
inline constexpr int kDefaultSweepTo = 120;

/// distance_report(image, shift_image(image, s)) for s = from, from + step,
/// ..., up to `to`. Row count is (to - from) / step + 1.
std::vector<SweepResult> sweep(const Image& image, int from_shift = kDefaultSweepFrom,
                               int to_shift = kDefaultSweepTo, int step = 1,
                               ColorSpace space = ColorSpace::kRgb,
                               double epsilon = kDefaultEpsilon);

enum class Metric { kHi, kKl, kDb };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

/// Value of one metric from a report; empty for an infinite db.
std::optional<double> metric_value(const DistanceReport& report, Metric metric);

/// Default shift columns for pair tables.
inline const std::vector<int> kTableShifts{-120, -80, -40, 0, 40, 80, 120};

/// Deterministic index sampler: std::mt19937_64 (whose output sequence is
/// fixed by the standard) with rejection sampling for an unbiased bounded
/// draw, so a seed yields the same indices on every platform.
class PairSampler {
 public:
  explicit PairSampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound). bound must be > 0.
  std::size_t uniform_index(std::size_t bound);

  /// Two independent uniform draws; the two positions may coincide.
  std::pair<std::size_t, std::size_t> next_pair(std::size_t population);

 private:
  std::mt19937_64 engine_;
};

struct PairTableRow {
  std::int64_t id1 = 0;
  std::int64_t id2 = 0;
  /// One cell per table shift; empty for an infinite db.
  std::vector<std::optional<double>> values;

  friend bool operator==(const PairTableRow&, const PairTableRow&) = default;
};

struct PairTable {
  Metric metric = Metric::kHi;
  ColorSpace space = ColorSpace::kRgb;
  std::vector<int> shifts;
  std::vector<PairTableRow> rows;

  friend bool operator==(const PairTable&, const PairTable&) = default;
};

/// Frame id plus a loader for its image, used to keep decoding lazy.
struct FrameRef {
  std::int64_t frame = 0;
  std::function<Image()> load;
};

/// For each of n_pairs seeded draws (id1, id2), shifts id2's image by every
/// member of `shifts` and measures `metric` against id1's unshifted image.
/// Throws kDatasetTooSmall for fewer than two frames.
PairTable pair_table(std::span<const FrameRef> frames, std::size_t n_pairs,
                     std::span<const int> shifts, Metric metric, ColorSpace space,
                     double epsilon, std::uint64_t seed);

/// Dataset convenience form; images are decoded on demand and cached.
PairTable pair_table(const std::vector<DriveRecord>& dataset, std::size_t n_pairs,
                     std::span<const int> shifts, Metric metric, ColorSpace space,
                     double epsilon, std::uint64_t seed);

struct Residual {
  std::int64_t frame = 0;
  double truth = 0.0;
  double prediction = 0.0;
  double residual = 0.0;  // truth - prediction

  friend bool operator==(const Residual&, const Residual&) = default;
};

struct ErrorEvaluation {
  int shift = 0;
  ErrorSummary summary;
  std::vector<Residual> residuals;
};

/// Compares dataset steering (ground truth) with externally produced
/// predictions keyed by frame index. `shift` labels the condition under
/// which the predictions were produced. Throws CoverageGapError listing
/// every dataset frame without a prediction.
ErrorEvaluation evaluate_errors(const std::vector<DriveRecord>& dataset,
                                std::span<const std::pair<std::int64_t, double>> predictions,
                                ShiftAmount shift = ShiftAmount{});

}  // namespace shiftgate
