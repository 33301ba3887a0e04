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

#include "qmosaic/text_formats.h"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qmosaic {

namespace {

std::string trim(const std::string &s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_comment(const std::string &line) {
    return line.empty() || (line[0] == '#' && (line.size() == 1 || line[1] == ' '));
}

int parse_int(const std::string &s, int line_no) {
    const std::string t = trim(s);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + t +
                                    "' is not an integer");
    }
    return value;
}

}  // namespace

PinMask parse_pin_mask(const std::string &text) {
    PinMask pins;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (is_comment(line)) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'row,col'");
        }
        const int row = parse_int(line.substr(0, comma), line_no);
        const int col = parse_int(line.substr(comma + 1), line_no);
        if (row < 0 || col < 0) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": negative grid coordinate");
        }
        pins.cells.insert(Cell{row, col});
    }
    return pins;
}

std::string format_pin_mask(const PinMask &pins) {
    std::string out;
    for (const auto &cell : pins.cells) {
        out += std::to_string(cell.row) + "," + std::to_string(cell.column) + "\n";
    }
    return out;
}

std::string to_hex(const Rgb &color) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", color.r, color.g, color.b);
    return buf;
}

Rgb rgb_from_hex(const std::string &hex) {
    std::string h = trim(hex);
    if (!h.empty() && h[0] == '#') {
        h.erase(0, 1);
    }
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), value, 16);
    if (h.size() != 6 || ec != std::errc() || ptr != h.data() + h.size()) {
        throw std::invalid_argument("'" + hex + "' is not a #rrggbb colour");
    }
    return Rgb{static_cast<std::uint8_t>(value >> 16), static_cast<std::uint8_t>(value >> 8),
               static_cast<std::uint8_t>(value)};
}

Palette parse_palette(const std::string &text) {
    Palette palette;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (is_comment(line)) {
            continue;
        }
        try {
            palette.push_back(rgb_from_hex(line));
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return palette;
}

std::string format_palette(const Palette &palette) {
    std::string out;
    for (const auto &c : palette) {
        out += to_hex(c) + "\n";
    }
    return out;
}

}  // namespace qmosaic
