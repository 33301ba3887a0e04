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

#include "qmosaic/image.h"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <png.h>

namespace qmosaic {

Image::Image(int w, int h, int c) : width(w), height(h), channels(c) {
    if (w < 1 || h < 1 || (c != 3 && c != 4)) {
        throw ImageError("invalid image shape " + std::to_string(w) + "x" + std::to_string(h) +
                         "x" + std::to_string(c));
    }
    pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                      static_cast<std::size_t>(c),
                  0);
}

Image decode_png(std::span<const std::uint8_t> data) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&png, data.data(), data.size())) {
        throw ImageError(std::string("PNG decode failed: ") + png.message);
    }
    const bool alpha = (png.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    png.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
    Image image(static_cast<int>(png.width), static_cast<int>(png.height), alpha ? 4 : 3);
    if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
        std::string message = png.message;
        png_image_free(&png);
        throw ImageError("PNG decode failed: " + message);
    }
    return image;
}

Bytes encode_png(const Image &image) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = image.channels == 4 ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
        throw ImageError(std::string("PNG encode failed: ") + png.message);
    }
    Bytes out(size);
    if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
        throw ImageError(std::string("PNG encode failed: ") + png.message);
    }
    out.resize(size);
    return out;
}

namespace {

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto *err = reinterpret_cast<JpegErrorManager *>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Kept free of objects with destructors: longjmp skips them.
bool jpeg_decode_into(std::span<const std::uint8_t> data, Image *image, char *message) {
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        std::strncpy(message, err.message, JMSG_LENGTH_MAX);
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, data.data(), static_cast<unsigned long>(data.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    image->width = static_cast<int>(cinfo.output_width);
    image->height = static_cast<int>(cinfo.output_height);
    image->channels = 3;
    image->pixels.resize(image->row_bytes() * static_cast<std::size_t>(image->height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = image->pixels.data() + cinfo.output_scanline * image->row_bytes();
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

}  // namespace

Image decode_jpeg(std::span<const std::uint8_t> data) {
    Image image;
    char message[JMSG_LENGTH_MAX] = {0};
    if (!jpeg_decode_into(data, &image, message)) {
        throw ImageError(std::string("JPEG decode failed: ") + message);
    }
    return image;
}

Image decode_image(std::span<const std::uint8_t> data) {
    static constexpr std::uint8_t kPngMagic[] = {0x89, 'P', 'N', 'G'};
    if (data.size() >= 4 && std::memcmp(data.data(), kPngMagic, 4) == 0) {
        return decode_png(data);
    }
    if (data.size() >= 3 && data[0] == 0xFF && data[1] == 0xD8 && data[2] == 0xFF) {
        return decode_jpeg(data);
    }
    throw ImageError("unrecognised image format (expected PNG or JPEG)");
}

Bytes read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char *>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw std::runtime_error("short write to " + path.string());
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

std::string read_text_file(const std::filesystem::path &path) {
    const Bytes bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

Image read_image(const std::filesystem::path &path) {
    return decode_image(read_file(path));
}

void write_png(const std::filesystem::path &path, const Image &image) {
    write_file(path, encode_png(image));
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) {
        h = (h ^ b) * kFnvPrime;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string pixel_hash(const Image &image) {
    const std::uint32_t header[3] = {static_cast<std::uint32_t>(image.width),
                                     static_cast<std::uint32_t>(image.height),
                                     static_cast<std::uint32_t>(image.channels)};
    std::uint64_t h = fnv1a(kFnvOffset, std::span(reinterpret_cast<const std::uint8_t *>(header),
                                                  sizeof(header)));
    return hex64(fnv1a(h, image.pixels));
}

std::string bytes_hash(std::span<const std::uint8_t> data) {
    return hex64(fnv1a(kFnvOffset, data));
}

}  // namespace qmosaic
