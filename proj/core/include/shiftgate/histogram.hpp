#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "shiftgate/image.hpp"

namespace shiftgate {

/// One bin per 8-bit intensity value.
inline constexpr std::size_t kBinCount = 256;

using BinCounts = std::array<std::uint64_t, kBinCount>;

/// Aggregated intensity counts plus their total. The total is the product of
/// every source dimension (width * height * channels), and is the
/// normalisation constant shared by all distance metrics.
class IntensityHistogram {
 public:
  IntensityHistogram() = default;
  explicit IntensityHistogram(const BinCounts& bins);

  const BinCounts& bins() const noexcept { return bins_; }
  std::uint64_t count(std::size_t bin) const { return bins_.at(bin); }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }

  friend bool operator==(const IntensityHistogram&, const IntensityHistogram&) = default;

 private:
  BinCounts bins_{};
  std::uint64_t total_ = 0;
};

/// Combined histogram over all three channels.
IntensityHistogram build_histogram(const Image& image);

/// One histogram per channel, each with total = width * height.
std::array<IntensityHistogram, 3> build_channel_histograms(const Image& image);

/// Bin masses bins[x] / total. Throws kEmptyHistogram when total == 0.
std::array<double, kBinCount> normalized(const IntensityHistogram& hist);

/// `bin,count` with header, 256 rows, LF endings.
void write_histogram_csv(std::ostream& out, const IntensityHistogram& hist);
IntensityHistogram read_histogram_csv(std::istream& in);

}  // namespace shiftgate
