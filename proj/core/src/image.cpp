#include "shiftgate/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "shiftgate/errors.hpp"

namespace shiftgate {

std::string_view to_string(ColorSpace space) noexcept {
  return space == ColorSpace::kYuv ? "yuv" : "rgb";
}

ColorSpace parse_color_space(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rgb") return ColorSpace::kRgb;
  if (lower == "yuv") return ColorSpace::kYuv;
  throw Error(ErrorCode::kInvalidArgument, "unknown colour space '" + std::string(text) + "'");
}

ShiftAmount::ShiftAmount(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw Error(ErrorCode::kInvalidArgument,
                "shift " + std::to_string(value) + " outside [-255, 255]");
  }
}

Image::Image(int width, int height, ColorSpace space)
    : Image(width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(height, 0)) *
                                      kChannels),
            space) {}

Image::Image(int width, int height, std::vector<std::uint8_t> data, ColorSpace space)
    : width_(width), height_(height), space_(space), data_(std::move(data)) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image dimensions");
  }
  if (data_.size() != pixel_count() * kChannels) {
    throw Error(ErrorCode::kInvalidArgument,
                "buffer holds " + std::to_string(data_.size()) + " samples, expected " +
                    std::to_string(pixel_count() * kChannels));
  }
}

Image Image::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Image image(width, height);
  auto samples = image.mutable_data();
  for (std::size_t i = 0; i < samples.size(); i += kChannels) {
    samples[i] = r;
    samples[i + 1] = g;
    samples[i + 2] = b;
  }
  return image;
}

std::uint8_t Image::at(int x, int y, int channel) const {
  if (x < 0 || x >= width_ || y < 0 || y >= height_ || channel < 0 || channel >= kChannels) {
    throw Error(ErrorCode::kInvalidArgument, "pixel access out of range");
  }
  return data_[offset(x, y) + static_cast<std::size_t>(channel)];
}

void Image::set_pixel(int x, int y, std::uint8_t c0, std::uint8_t c1, std::uint8_t c2) {
  if (x < 0 || x >= width_ || y < 0 || y >= height_) {
    throw Error(ErrorCode::kInvalidArgument, "pixel access out of range");
  }
  const auto o = offset(x, y);
  data_[o] = c0;
  data_[o + 1] = c1;
  data_[o + 2] = c2;
}

Image shift_image(const Image& image, ShiftAmount shift) {
  std::array<std::uint8_t, 256> lut;
  for (int v = 0; v < 256; ++v) {
    lut[static_cast<std::size_t>(v)] = shift_sample(static_cast<std::uint8_t>(v), shift.value());
  }
  std::vector<std::uint8_t> out(image.sample_count());
  const auto in = image.data();
  std::transform(in.begin(), in.end(), out.begin(), [&lut](std::uint8_t v) { return lut[v]; });
  return Image(image.width(), image.height(), std::move(out), image.space());
}

namespace {

std::uint8_t quantize(double value) noexcept {
  const double rounded = std::floor(value + 0.5);
  return static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
}

}  // namespace

std::array<std::uint8_t, 3> rgb_to_yuv_pixel(std::uint8_t r, std::uint8_t g,
                                             std::uint8_t b) noexcept {
  const double rd = r, gd = g, bd = b;
  const double y = 0.299 * rd + 0.587 * gd + 0.114 * bd;
  const double u = -0.168736 * rd - 0.331264 * gd + 0.5 * bd + 128.0;
  const double v = 0.5 * rd - 0.418688 * gd - 0.081312 * bd + 128.0;
  return {quantize(y), quantize(u), quantize(v)};
}

std::array<std::uint8_t, 3> yuv_to_rgb_pixel(std::uint8_t y, std::uint8_t u,
                                             std::uint8_t v) noexcept {
  const double yd = y, cb = static_cast<double>(u) - 128.0, cr = static_cast<double>(v) - 128.0;
  const double r = yd + 1.402 * cr;
  const double g = yd - 0.344136 * cb - 0.714136 * cr;
  const double b = yd + 1.772 * cb;
  return {quantize(r), quantize(g), quantize(b)};
}

namespace {

template <typename PixelFn>
Image convert_pixels(const Image& image, ColorSpace target, PixelFn fn) {
  std::vector<std::uint8_t> out(image.sample_count());
  const auto in = image.data();
  for (std::size_t i = 0; i < in.size(); i += Image::kChannels) {
    const auto px = fn(in[i], in[i + 1], in[i + 2]);
    out[i] = px[0];
    out[i + 1] = px[1];
    out[i + 2] = px[2];
  }
  return Image(image.width(), image.height(), std::move(out), target);
}

}  // namespace

Image rgb_to_yuv(const Image& image) {
  if (image.space() != ColorSpace::kRgb) {
    throw Error(ErrorCode::kInvalidArgument, "rgb_to_yuv expects an RGB image");
  }
  return convert_pixels(image, ColorSpace::kYuv, rgb_to_yuv_pixel);
}

Image yuv_to_rgb(const Image& image) {
  if (image.space() != ColorSpace::kYuv) {
    throw Error(ErrorCode::kInvalidArgument, "yuv_to_rgb expects a YUV buffer");
  }
  return convert_pixels(image, ColorSpace::kRgb, yuv_to_rgb_pixel);
}

void PreprocessSpec::validate(int input_height) const {
  if (crop_top_rows < 0 || crop_bottom_rows < 0) {
    throw Error(ErrorCode::kInvalidArgument, "crop row counts must be non-negative");
  }
  if (target_width < 1 || target_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "target dimensions must be >= 1");
  }
  if (crop_top_rows + crop_bottom_rows >= input_height) {
    throw Error(ErrorCode::kCropExceedsHeight,
                "cropping " + std::to_string(crop_top_rows) + " + " +
                    std::to_string(crop_bottom_rows) + " rows from a " +
                    std::to_string(input_height) + "-row image leaves nothing");
  }
}

Image crop_rows(const Image& image, int top, int bottom) {
  if (top < 0 || bottom < 0) {
    throw Error(ErrorCode::kInvalidArgument, "crop row counts must be non-negative");
  }
  if (top + bottom >= image.height()) {
    throw Error(ErrorCode::kCropExceedsHeight, "crop removes every row");
  }
  const int rows = image.height() - top - bottom;
  const std::size_t row_samples = static_cast<std::size_t>(image.width()) * Image::kChannels;
  const auto in = image.data().subspan(static_cast<std::size_t>(top) * row_samples,
                                       static_cast<std::size_t>(rows) * row_samples);
  return Image(image.width(), rows, std::vector<std::uint8_t>(in.begin(), in.end()),
               image.space());
}

Image resize_bilinear(const Image& image, int target_width, int target_height) {
  if (target_width < 1 || target_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "target dimensions must be >= 1");
  }
  if (image.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot resize an empty image");
  }
  if (target_width == image.width() && target_height == image.height()) return image;

  const int sw = image.width();
  const int sh = image.height();
  const double sx = static_cast<double>(sw) / target_width;
  const double sy = static_cast<double>(sh) / target_height;

  struct Tap {
    int i0, i1;
    double f;
  };
  auto taps = [](int count, double scale, int limit) {
    std::vector<Tap> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(limit - 1));
      const int i0 = static_cast<int>(std::floor(src));
      out[static_cast<std::size_t>(i)] = {i0, std::min(i0 + 1, limit - 1), src - i0};
    }
    return out;
  };
  const auto xt = taps(target_width, sx, sw);
  const auto yt = taps(target_height, sy, sh);

  Image out(target_width, target_height, image.space());
  auto dst = out.mutable_data();
  const auto src = image.data();
  const auto idx = [sw](int x, int y, int c) {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(sw) +
            static_cast<std::size_t>(x)) * Image::kChannels + static_cast<std::size_t>(c);
  };
  std::size_t o = 0;
  for (const auto& ty : yt) {
    for (const auto& tx : xt) {
      for (int c = 0; c < Image::kChannels; ++c) {
        const double top = src[idx(tx.i0, ty.i0, c)] * (1.0 - tx.f) + src[idx(tx.i1, ty.i0, c)] * tx.f;
        const double bot = src[idx(tx.i0, ty.i1, c)] * (1.0 - tx.f) + src[idx(tx.i1, ty.i1, c)] * tx.f;
        dst[o++] = quantize(top * (1.0 - ty.f) + bot * ty.f);
      }
    }
  }
  return out;
}

Image preprocess(const Image& image, const PreprocessSpec& spec) {
  spec.validate(image.height());
  Image out = resize_bilinear(crop_rows(image, spec.crop_top_rows, spec.crop_bottom_rows),
                              spec.target_width, spec.target_height);
  if (spec.output_space == ColorSpace::kYuv && out.space() == ColorSpace::kRgb) {
    out = rgb_to_yuv(out);
  } else if (spec.output_space == ColorSpace::kRgb && out.space() == ColorSpace::kYuv) {
    out = yuv_to_rgb(out);
  }
  return out;
}

double channel_mean(const Image& image) {
  if (image.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mean of an empty image");
  }
  std::uint64_t sum = 0;
  for (const auto v : image.data()) sum += v;
  return static_cast<double>(sum) / static_cast<double>(image.sample_count());
}

}  // namespace shiftgate
