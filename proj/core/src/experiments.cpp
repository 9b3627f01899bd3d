#include "shiftgate/experiments.hpp"

#include <limits>
#include <unordered_map>

#include "shiftgate/errors.hpp"
#include "shiftgate/histogram.hpp"
#include "shiftgate/image_io.hpp"

namespace shiftgate {
namespace {

IntensityHistogram histogram_in(const Image& image, ColorSpace space) {
  if (space == ColorSpace::kYuv && image.space() == ColorSpace::kRgb) {
    return build_histogram(rgb_to_yuv(image));
  }
  return build_histogram(image);
}

std::optional<double> measure(Metric metric, const IntensityHistogram& p,
                              const IntensityHistogram& q, double epsilon) {
  switch (metric) {
    case Metric::kHi:
      return histogram_intersection(p, q);
    case Metric::kKl:
      return relative_entropy(p, q, epsilon);
    case Metric::kDb:
      if (bhattacharyya_coefficient(p, q) <= 0.0) return std::nullopt;
      return bhattacharyya_distance(p, q);
  }
  return std::nullopt;
}

}  // namespace

std::vector<SweepResult> sweep(const Image& image, int from_shift, int to_shift, int step,
                               ColorSpace space, double epsilon) {
  if (from_shift > to_shift) {
    throw Error(ErrorCode::kInvalidArgument, "sweep range is empty (from > to)");
  }
  if (step < 1) throw Error(ErrorCode::kInvalidArgument, "sweep step must be >= 1");
  // Validates both ends before any work is done.
  ShiftAmount{from_shift};
  ShiftAmount{to_shift};

  const IntensityHistogram reference = histogram_in(image, space);
  std::vector<SweepResult> out;
  out.reserve(static_cast<std::size_t>((to_shift - from_shift) / step + 1));
  for (int s = from_shift; s <= to_shift; s += step) {
    const IntensityHistogram query = histogram_in(shift_image(image, ShiftAmount(s)), space);
    const DistanceReport r = distance_report(reference, query, space, epsilon);
    out.push_back({s, r.hi, r.kl, r.db, space});
  }
  return out;
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::kHi: return "hi";
    case Metric::kKl: return "kl";
    case Metric::kDb: return "db";
  }
  return "hi";
}

Metric parse_metric(std::string_view text) {
  if (text == "hi") return Metric::kHi;
  if (text == "kl") return Metric::kKl;
  if (text == "db") return Metric::kDb;
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + std::string(text) + "'");
}

std::optional<double> metric_value(const DistanceReport& report, Metric metric) {
  switch (metric) {
    case Metric::kHi: return report.hi;
    case Metric::kKl: return report.kl;
    case Metric::kDb: return report.db;
  }
  return std::nullopt;
}

std::size_t PairSampler::uniform_index(std::size_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "sampling bound must be > 0");
  const std::uint64_t b = bound;
  // Values below 2^64 mod b would over-represent the low residues.
  const std::uint64_t threshold = (0 - b) % b;
  while (true) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return static_cast<std::size_t>(x % b);
  }
}

std::pair<std::size_t, std::size_t> PairSampler::next_pair(std::size_t population) {
  const std::size_t first = uniform_index(population);
  const std::size_t second = uniform_index(population);
  return {first, second};
}

PairTable pair_table(std::span<const FrameRef> frames, std::size_t n_pairs,
                     std::span<const int> shifts, Metric metric, ColorSpace space,
                     double epsilon, std::uint64_t seed) {
  if (frames.size() < 2) {
    throw Error(ErrorCode::kDatasetTooSmall, "pair sampling needs at least two frames");
  }
  std::vector<ShiftAmount> shift_amounts;
  for (const int s : shifts) shift_amounts.emplace_back(s);

  PairSampler sampler(seed);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) pairs.push_back(sampler.next_pair(frames.size()));

  std::unordered_map<std::size_t, Image> cache;
  const auto image_at = [&](std::size_t pos) -> const Image& {
    auto it = cache.find(pos);
    if (it == cache.end()) it = cache.emplace(pos, frames[pos].load()).first;
    return it->second;
  };

  PairTable table;
  table.metric = metric;
  table.space = space;
  table.shifts.assign(shifts.begin(), shifts.end());
  table.rows.reserve(n_pairs);
  for (const auto& [a, b] : pairs) {
    const IntensityHistogram reference = histogram_in(image_at(a), space);
    const Image& second = image_at(b);
    PairTableRow row;
    row.id1 = frames[a].frame;
    row.id2 = frames[b].frame;
    row.values.reserve(shift_amounts.size());
    for (const ShiftAmount s : shift_amounts) {
      row.values.push_back(
          measure(metric, reference, histogram_in(shift_image(second, s), space), epsilon));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

PairTable pair_table(const std::vector<DriveRecord>& dataset, std::size_t n_pairs,
                     std::span<const int> shifts, Metric metric, ColorSpace space,
                     double epsilon, std::uint64_t seed) {
  std::vector<FrameRef> frames;
  frames.reserve(dataset.size());
  for (const auto& record : dataset) {
    frames.push_back({record.frame_index, [path = record.image_path] { return load_image(path); }});
  }
  return pair_table(std::span<const FrameRef>(frames), n_pairs, shifts, metric, space, epsilon,
                    seed);
}

ErrorEvaluation evaluate_errors(const std::vector<DriveRecord>& dataset,
                                std::span<const std::pair<std::int64_t, double>> predictions,
                                ShiftAmount shift) {
  std::unordered_map<std::int64_t, double> by_frame;
  by_frame.reserve(predictions.size());
  for (const auto& [frame, value] : predictions) {
    if (!by_frame.emplace(frame, value).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  "duplicate prediction for frame " + std::to_string(frame));
    }
  }

  std::vector<std::int64_t> missing;
  std::vector<double> truth;
  std::vector<double> pred;
  truth.reserve(dataset.size());
  pred.reserve(dataset.size());
  ErrorEvaluation out;
  out.shift = shift.value();
  for (const auto& record : dataset) {
    const auto it = by_frame.find(record.frame_index);
    if (it == by_frame.end()) {
      missing.push_back(record.frame_index);
      continue;
    }
    truth.push_back(record.steering);
    pred.push_back(it->second);
    out.residuals.push_back(
        {record.frame_index, record.steering, it->second, record.steering - it->second});
  }
  if (!missing.empty()) throw CoverageGapError(std::move(missing));
  out.summary = summarize_errors(PredictionSeries(std::move(truth)), PredictionSeries(std::move(pred)));
  return out;
}

}  // namespace shiftgate
