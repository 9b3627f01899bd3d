#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace shiftgate {

enum class ColorSpace { kRgb, kYuv };

std::string_view to_string(ColorSpace space) noexcept;
/// Accepts "rgb" / "yuv" (case-insensitive).
ColorSpace parse_color_space(std::string_view text);

/// Signed uniform intensity offset, restricted to the 8-bit range [-255, 255].
class ShiftAmount {
 public:
  static constexpr int kMin = -255;
  static constexpr int kMax = 255;

  constexpr ShiftAmount() = default;
  explicit ShiftAmount(int value);

  constexpr int value() const noexcept { return value_; }

  friend constexpr bool operator==(ShiftAmount, ShiftAmount) = default;

 private:
  int value_ = 0;
};

/// Interleaved 3-channel 8-bit image, row-major. The colour-space tag records
/// how the three channels are to be interpreted (RGB or Y/U/V planes).
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  /// Zero-filled image.
  Image(int width, int height, ColorSpace space = ColorSpace::kRgb);
  /// Raw buffer constructor; data.size() must equal width * height * 3.
  Image(int width, int height, std::vector<std::uint8_t> data,
        ColorSpace space = ColorSpace::kRgb);

  static Image filled(int width, int height, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  ColorSpace space() const noexcept { return space_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t sample_count() const noexcept { return data_.size(); }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> mutable_data() noexcept { return data_; }

  std::uint8_t at(int x, int y, int channel) const;
  void set_pixel(int x, int y, std::uint8_t c0, std::uint8_t c1, std::uint8_t c2);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
           kChannels;
  }

  int width_ = 0;
  int height_ = 0;
  ColorSpace space_ = ColorSpace::kRgb;
  std::vector<std::uint8_t> data_;
};

/// Saturating add of `shift` to every sample; values below 0 pin to 0 and
/// values above 255 pin to 255. Dimensions and colour-space tag are preserved.
Image shift_image(const Image& image, ShiftAmount shift);

/// Single-sample form of shift_image.
constexpr std::uint8_t shift_sample(std::uint8_t value, int shift) noexcept {
  const int sum = static_cast<int>(value) + shift;
  return static_cast<std::uint8_t>(sum < 0 ? 0 : (sum > 255 ? 255 : sum));
}

// Full-range BT.601 (JFIF) with chroma offset 128.
std::array<std::uint8_t, 3> rgb_to_yuv_pixel(std::uint8_t r, std::uint8_t g,
                                             std::uint8_t b) noexcept;
std::array<std::uint8_t, 3> yuv_to_rgb_pixel(std::uint8_t y, std::uint8_t u,
                                             std::uint8_t v) noexcept;

/// Requires an RGB-tagged image; returns a YUV-tagged buffer of equal shape.
Image rgb_to_yuv(const Image& image);
/// Requires a YUV-tagged buffer; returns an RGB image.
Image yuv_to_rgb(const Image& image);

struct PreprocessSpec {
  int crop_top_rows = 60;
  int crop_bottom_rows = 25;
  int target_width = 200;
  int target_height = 66;
  ColorSpace output_space = ColorSpace::kRgb;

  /// Throws kCropExceedsHeight when the crop leaves no rows, kInvalidArgument
  /// for negative crops or non-positive targets.
  void validate(int input_height) const;
};

Image crop_rows(const Image& image, int top, int bottom);

/// Bilinear resampling with pixel-centre alignment; identity when the target
/// size equals the source size.
Image resize_bilinear(const Image& image, int target_width, int target_height);

/// Crop top/bottom rows, resize to the target geometry, then optionally move
/// to YUV.
Image preprocess(const Image& image, const PreprocessSpec& spec);

/// Mean over all width * height * 3 samples.
double channel_mean(const Image& image);

}  // namespace shiftgate
