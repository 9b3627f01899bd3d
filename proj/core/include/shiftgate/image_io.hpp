#pragma once

#include <filesystem>

#include "shiftgate/image.hpp"

namespace shiftgate {

/// Decodes a JPEG or PNG file (chosen by content signature). Grey and
/// alpha-carrying inputs are expanded/stripped to 3 channels. The result is
/// always tagged RGB.
Image load_image(const std::filesystem::path& path);

/// Encodes by extension: .png (lossless) or .jpg/.jpeg (quality 95). The raw
/// channel bytes are written regardless of the colour-space tag.
void save_image(const Image& image, const std::filesystem::path& path);

}  // namespace shiftgate
