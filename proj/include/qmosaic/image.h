// Copyright 2026 The QMosaic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmosaic {

/// Raised for unreadable or malformed image data.
class ImageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// 8-bit interleaved raster, RGB or RGBA, rows top to bottom.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int width, int height, int channels = 3);

    std::size_t row_bytes() const { return static_cast<std::size_t>(width) * channels; }
    std::uint8_t *at(int x, int y) {
        return pixels.data() + static_cast<std::size_t>(y) * row_bytes() +
               static_cast<std::size_t>(x) * channels;
    }
    const std::uint8_t *at(int x, int y) const {
        return pixels.data() + static_cast<std::size_t>(y) * row_bytes() +
               static_cast<std::size_t>(x) * channels;
    }

    friend bool operator==(const Image &, const Image &) = default;
};

using Bytes = std::vector<std::uint8_t>;

Image decode_png(std::span<const std::uint8_t> data);
Bytes encode_png(const Image &image);
Image decode_jpeg(std::span<const std::uint8_t> data);

/// Sniffs PNG or JPEG from the magic bytes.
Image decode_image(std::span<const std::uint8_t> data);

Bytes read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> data);
void write_text_file(const std::filesystem::path &path, const std::string &text);
std::string read_text_file(const std::filesystem::path &path);

Image read_image(const std::filesystem::path &path);
void write_png(const std::filesystem::path &path, const Image &image);

/// 64-bit FNV-1a over the dimensions and pixel bytes, as 16 hex digits.
std::string pixel_hash(const Image &image);
std::string bytes_hash(std::span<const std::uint8_t> data);

}  // namespace qmosaic
