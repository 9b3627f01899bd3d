#include "shiftgate/histogram.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "shiftgate/errors.hpp"
#include "text_io.hpp"

namespace shiftgate {

IntensityHistogram::IntensityHistogram(const BinCounts& bins)
    : bins_(bins), total_(std::accumulate(bins.begin(), bins.end(), std::uint64_t{0})) {}

IntensityHistogram build_histogram(const Image& image) {
  // Four interleaved partial tables break the store-to-load dependency on
  // runs of equal samples.
  std::array<BinCounts, 4> partial{};
  const auto data = image.data();
  std::size_t i = 0;
  for (; i + 4 <= data.size(); i += 4) {
    ++partial[0][data[i]];
    ++partial[1][data[i + 1]];
    ++partial[2][data[i + 2]];
    ++partial[3][data[i + 3]];
  }
  for (; i < data.size(); ++i) ++partial[0][data[i]];

  BinCounts bins{};
  for (std::size_t b = 0; b < kBinCount; ++b) {
    bins[b] = partial[0][b] + partial[1][b] + partial[2][b] + partial[3][b];
  }
  return IntensityHistogram(bins);
}

std::array<IntensityHistogram, 3> build_channel_histograms(const Image& image) {
  std::array<BinCounts, 3> bins{};
  const auto data = image.data();
  for (std::size_t i = 0; i < data.size(); i += Image::kChannels) {
    ++bins[0][data[i]];
    ++bins[1][data[i + 1]];
    ++bins[2][data[i + 2]];
  }
  return {IntensityHistogram(bins[0]), IntensityHistogram(bins[1]), IntensityHistogram(bins[2])};
}

std::array<double, kBinCount> normalized(const IntensityHistogram& hist) {
  if (hist.empty()) throw Error(ErrorCode::kEmptyHistogram, "histogram total is zero");
  std::array<double, kBinCount> out{};
  const double total = static_cast<double>(hist.total());
  for (std::size_t b = 0; b < kBinCount; ++b) {
    out[b] = static_cast<double>(hist.bins()[b]) / total;
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const IntensityHistogram& hist) {
  out << "bin,count\n";
  for (std::size_t b = 0; b < kBinCount; ++b) out << b << ',' << hist.bins()[b] << '\n';
}

IntensityHistogram read_histogram_csv(std::istream& in) {
  detail::expect_header(in, "bin,count");
  BinCounts bins{};
  std::array<bool, kBinCount> seen{};
  std::string line;
  while (detail::next_line(in, line)) {
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedRecord, "histogram row '" + line + "'");
    }
    const auto bin = detail::parse_int(fields[0]);
    const auto count = detail::parse_int(fields[1]);
    if (bin < 0 || bin >= static_cast<std::int64_t>(kBinCount) || count < 0 ||
        seen[static_cast<std::size_t>(bin)]) {
      throw Error(ErrorCode::kMalformedRecord, "histogram row '" + line + "'");
    }
    seen[static_cast<std::size_t>(bin)] = true;
    bins[static_cast<std::size_t>(bin)] = static_cast<std::uint64_t>(count);
  }
  return IntensityHistogram(bins);
}

}  // namespace shiftgate
