#include "shiftgate/error_metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "shiftgate/errors.hpp"
#include "text_io.hpp"

namespace shiftgate {
namespace {

// Neumaier-compensated sum in extended precision; keeps ~1e7-term aggregates
// well inside 1e-9 relative error.
class CompensatedSum {
 public:
  void add(long double x) noexcept {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  long double value() const noexcept { return sum_ + carry_; }

 private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

void require_pair(const PredictionSeries& truth, const PredictionSeries& pred) {
  if (truth.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, "series lengths differ (" +
                                                std::to_string(truth.size()) + " vs " +
                                                std::to_string(pred.size()) + ")");
  }
  if (truth.empty()) throw Error(ErrorCode::kEmptySeries, "series are empty");
}

template <typename Term>
double mean_of(const PredictionSeries& truth, const PredictionSeries& pred, Term term) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    sum.add(term(static_cast<long double>(truth[i]), static_cast<long double>(pred[i])));
  }
  return static_cast<double>(sum.value() / static_cast<long double>(truth.size()));
}

}  // namespace

PredictionSeries::PredictionSeries(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFiniteValue, "non-finite value at position " + std::to_string(i));
    }
  }
}

double mae(const PredictionSeries& truth, const PredictionSeries& pred) {
  require_pair(truth, pred);
  return mean_of(truth, pred, [](long double y, long double p) { return std::fabs(y - p); });
}

double mape(const PredictionSeries& truth, const PredictionSeries& pred, ZeroTargetPolicy policy) {
  require_pair(truth, pred);
  CompensatedSum sum;
  std::size_t used = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0.0) {
      if (policy == ZeroTargetPolicy::kSignal) {
        throw Error(ErrorCode::kZeroTarget, "ground truth is zero at position " + std::to_string(i));
      }
      continue;
    }
    const long double y = truth[i];
    sum.add(std::fabs((y - static_cast<long double>(pred[i])) / y));
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::kZeroTarget, "every ground-truth value is zero");
  return static_cast<double>(sum.value() / static_cast<long double>(used));
}

double mse(const PredictionSeries& truth, const PredictionSeries& pred) {
  require_pair(truth, pred);
  return mean_of(truth, pred, [](long double y, long double p) { return (y - p) * (y - p); });
}

double rmse(const PredictionSeries& truth, const PredictionSeries& pred) {
  return std::sqrt(mse(truth, pred));
}

ErrorSummary summarize_errors(const PredictionSeries& truth, const PredictionSeries& pred) {
  ErrorSummary summary;
  summary.count = truth.size();
  summary.mae = mae(truth, pred);
  summary.mse = mse(truth, pred);
  summary.rmse = std::sqrt(summary.mse);
  for (const double y : truth.values()) summary.zero_targets += (y == 0.0);
  if (summary.zero_targets == 0) summary.mape = mape(truth, pred);
  return summary;
}

std::vector<std::pair<std::int64_t, double>> read_indexed_csv(std::istream& in) {
  detail::expect_header(in, "index,value");
  std::vector<std::pair<std::int64_t, double>> rows;
  std::string line;
  while (detail::next_line(in, line)) {
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedRecord, "expected 'index,value', got '" + line + "'");
    }
    rows.emplace_back(detail::parse_int(fields[0]), detail::parse_double(fields[1]));
  }
  return rows;
}

void write_indexed_csv(std::ostream& out,
                       std::span<const std::pair<std::int64_t, double>> rows) {
  out << "index,value\n";
  for (const auto& [index, value] : rows) {
    out << index << ',' << detail::format_double(value) << '\n';
  }
}

}  // namespace shiftgate
