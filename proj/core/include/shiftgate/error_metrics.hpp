#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace shiftgate {

/// Ordered, finite steering values.
class PredictionSeries {
 public:
  PredictionSeries() = default;
  explicit PredictionSeries(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

enum class ZeroTargetPolicy {
  kSignal,     // any zero target raises kZeroTarget
  kMaskZeros,  // zero targets are excluded from the mean
};

double mae(const PredictionSeries& truth, const PredictionSeries& pred);
double mape(const PredictionSeries& truth, const PredictionSeries& pred,
            ZeroTargetPolicy policy = ZeroTargetPolicy::kSignal);
double mse(const PredictionSeries& truth, const PredictionSeries& pred);
double rmse(const PredictionSeries& truth, const PredictionSeries& pred);

struct ErrorSummary {
  std::size_t count = 0;
  double mae = 0.0;
  /// Empty when any target is zero; see zero_targets.
  std::optional<double> mape;
  double mse = 0.0;
  double rmse = 0.0;
  std::size_t zero_targets = 0;
};

ErrorSummary summarize_errors(const PredictionSeries& truth, const PredictionSeries& pred);

/// Two-column `index,value` CSV with a header row.
std::vector<std::pair<std::int64_t, double>> read_indexed_csv(std::istream& in);
void write_indexed_csv(std::ostream& out,
                       std::span<const std::pair<std::int64_t, double>> rows);

}  // namespace shiftgate
