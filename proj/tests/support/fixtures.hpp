#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "shiftgate/histogram.hpp"
#include "shiftgate/image.hpp"
#include "shiftgate/image_io.hpp"

namespace shiftgate::testing {

/// Every channel cycles through 64..191, so the combined histogram holds the
/// same count in each of those 128 bins and nothing elsewhere. Requires
/// width * height to be a multiple of 128.
inline Image uniform_block_image(int width = 128, int height = 1) {
  Image image(width, height);
  auto data = image.mutable_data();
  const std::size_t pixels = image.pixel_count();
  for (std::size_t k = 0; k < pixels; ++k) {
    data[3 * k] = static_cast<std::uint8_t>(64 + k % 128);
    data[3 * k + 1] = static_cast<std::uint8_t>(64 + (k + 43) % 128);
    data[3 * k + 2] = static_cast<std::uint8_t>(64 + (k + 85) % 128);
  }
  return image;
}

inline Image random_image(std::mt19937_64& rng, int width, int height) {
  Image image(width, height);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& v : image.mutable_data()) v = static_cast<std::uint8_t>(dist(rng));
  return image;
}

inline IntensityHistogram histogram_of(std::initializer_list<std::pair<std::size_t, std::uint64_t>> bins) {
  BinCounts counts{};
  for (const auto& [bin, count] : bins) counts[bin] = count;
  return IntensityHistogram(counts);
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "shiftgate") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// Writes `<index>_cam-image_array_.png` + `<index>.json` per frame.
inline void write_frame(const std::filesystem::path& dir, std::int64_t index, const Image& image,
                        double steering, double throttle = 0.3) {
  save_image(image, dir / (std::to_string(index) + "_cam-image_array_.png"));
  write_text(dir / (std::to_string(index) + ".json"),
             "{\"steering\": " + std::to_string(steering) +
                 ", \"throttle\": " + std::to_string(throttle) + "}");
}

}  // namespace shiftgate::testing
