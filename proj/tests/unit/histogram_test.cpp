#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "shiftgate/errors.hpp"
#include "shiftgate/histogram.hpp"

namespace shiftgate {
namespace {

TEST(HistogramTest, BlackPixel) {
  const auto h = build_histogram(Image(1, 1, {0, 0, 0}));
  EXPECT_EQ(h.count(0), 3u);
  EXPECT_EQ(h.total(), 3u);
  for (std::size_t b = 1; b < kBinCount; ++b) EXPECT_EQ(h.count(b), 0u);
}

TEST(HistogramTest, GreyImage) {
  const auto h = build_histogram(Image::filled(2, 2, 128, 128, 128));
  EXPECT_EQ(h.count(128), 12u);
  EXPECT_EQ(h.total(), 12u);
}

TEST(HistogramTest, HandCountedPair) {
  const auto h = build_histogram(Image(2, 1, {10, 20, 30, 10, 20, 40}));
  EXPECT_EQ(h.count(10), 2u);
  EXPECT_EQ(h.count(20), 2u);
  EXPECT_EQ(h.count(30), 1u);
  EXPECT_EQ(h.count(40), 1u);
  EXPECT_EQ(h.total(), 6u);
}

TEST(HistogramTest, TotalIsProductOfDimensions) {
  std::mt19937_64 rng(5);
  for (int w : {1, 3, 7, 160}) {
    for (int h : {1, 5, 120}) {
      const auto hist = build_histogram(testing::random_image(rng, w, h));
      EXPECT_EQ(hist.total(), static_cast<std::uint64_t>(w) * h * 3);
    }
  }
}

TEST(HistogramTest, PerChannelHistograms) {
  const auto hs = build_channel_histograms(Image(2, 1, {10, 20, 30, 10, 20, 40}));
  EXPECT_EQ(hs[0].count(10), 2u);
  EXPECT_EQ(hs[1].count(20), 2u);
  EXPECT_EQ(hs[2].count(30), 1u);
  EXPECT_EQ(hs[2].count(40), 1u);
  for (const auto& h : hs) EXPECT_EQ(h.total(), 2u);
}

TEST(HistogramTest, PermutationInvariant) {
  std::mt19937_64 rng(6);
  Image image = testing::random_image(rng, 13, 11);
  const auto before = build_histogram(image);
  auto data = image.mutable_data();
  std::shuffle(data.begin(), data.end(), rng);
  EXPECT_EQ(build_histogram(image), before);
}

TEST(HistogramTest, TranslationWithoutSaturation) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> value(60, 195);
  Image image(20, 10);
  for (auto& v : image.mutable_data()) v = static_cast<std::uint8_t>(value(rng));
  const auto base = build_histogram(image);
  for (int s = -60; s <= 60; s += 15) {
    const auto shifted = build_histogram(shift_image(image, ShiftAmount(s)));
    for (int b = 0; b < 256; ++b) {
      const int src = b - s;
      const std::uint64_t expected = (src >= 0 && src < 256) ? base.count(static_cast<std::size_t>(src)) : 0;
      ASSERT_EQ(shifted.count(static_cast<std::size_t>(b)), expected) << "s=" << s << " b=" << b;
    }
  }
}

TEST(HistogramTest, SaturationPileUp) {
  std::mt19937_64 rng(8);
  const Image image = testing::random_image(rng, 30, 30);
  for (int s : {1, 40, 120, 255}) {
    std::uint64_t at_or_above = 0;
    std::uint64_t at_or_below = 0;
    for (const auto v : image.data()) {
      at_or_above += v >= 255 - s;
      at_or_below += v <= s;
    }
    EXPECT_EQ(build_histogram(shift_image(image, ShiftAmount(s))).count(255), at_or_above);
    EXPECT_EQ(build_histogram(shift_image(image, ShiftAmount(-s))).count(0), at_or_below);
  }
}

TEST(NormalizedTest, Examples) {
  const auto single = normalized(testing::histogram_of({{0, 3}}));
  EXPECT_EQ(single[0], 1.0);
  EXPECT_EQ(single[1], 0.0);

  BinCounts flat{};
  flat.fill(9);
  for (const double v : normalized(IntensityHistogram(flat))) EXPECT_DOUBLE_EQ(v, 1.0 / 256);

  const auto two = normalized(testing::histogram_of({{10, 2}, {20, 4}}));
  EXPECT_DOUBLE_EQ(two[10], 1.0 / 3);
  EXPECT_DOUBLE_EQ(two[20], 2.0 / 3);
}

TEST(NormalizedTest, SumsToOne) {
  std::mt19937_64 rng(9);
  const auto n = normalized(build_histogram(testing::random_image(rng, 37, 19)));
  double sum = 0;
  for (const double v : n) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(NormalizedTest, EmptyHistogramIsAnError) {
  try {
    normalized(IntensityHistogram{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyHistogram);
  }
}

TEST(HistogramCsvTest, LayoutAndRoundTrip) {
  std::mt19937_64 rng(10);
  const auto hist = build_histogram(testing::random_image(rng, 9, 9));
  std::stringstream csv;
  write_histogram_csv(csv, hist);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("bin,count\n0,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 257);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(read_histogram_csv(csv), hist);

  std::stringstream bad("bin,count\n300,1\n");
  EXPECT_THROW(read_histogram_csv(bad), Error);
}

}  // namespace
}  // namespace shiftgate
