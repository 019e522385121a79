#pragma once

#include <filesystem>

#include "weather/image.hpp"

namespace weather {

// Decodes a PNG, JPEG or BMP file (detected by magic bytes, not extension)
// into 8-bit RGB. Alpha is discarded; grayscale sources are replicated
// across channels; images are taken as stored (no EXIF rotation). Throws
// IoError when unreadable, DecodeError on corrupt or unsupported content,
// DimensionError below 3x3.
ImageRgb8 load_image(const std::filesystem::path& path);

// Encodes an image as PNG. Throws IoError on write failure.
void write_png(const std::filesystem::path& path, const ImageRgb8& img);

}  // namespace weather
