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
#include <span>
#include <vector>

#include "qmosaic/image.h"
#include "qmosaic/transform.h"

namespace qmosaic {

struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const Rect &, const Rect &) = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb &, const Rgb &) = default;
};

/// Colours in scan order from the grid's origin row.
using Palette = std::vector<Rgb>;

/// Integer partition of `region` into rows x columns tiles. When a dimension
/// does not divide evenly the leading tiles are one pixel larger.
struct TileGrid {
    int image_width = 0;
    int image_height = 0;
    Rect region;
    int rows = 0;
    int columns = 0;
    std::vector<int> column_edges;  // columns + 1 absolute x positions
    std::vector<int> row_edges;     // rows + 1 absolute y positions

    Rect tile(int row, int column) const;
    bool uniform() const;

    friend bool operator==(const TileGrid &, const TileGrid &) = default;
};

/// Throws std::invalid_argument when the region leaves the image or a tile
/// would be empty.
TileGrid slice(int image_width, int image_height, const Rect &region, int rows, int columns);
TileGrid slice(const Image &image, const Rect &region, int rows, int columns);

/// Whole-image region.
Rect full_region(const Image &image);

/// Permutation modes move tile pixel blocks within each row; tiles of
/// different size are resampled nearest-neighbour. Colour mode fills each
/// cell with palette[rank]. Pixels outside the region are copied unchanged.
/// An empty palette in colour mode means "extract it from the input".
Image apply_plan(const Image &image, const TileGrid &grid, const TransformPlan &plan,
                 std::span<const Rgb> palette = {});

/// Rounded mean colour per tile, in scan order from `origin`.
Palette extract_palette(const Image &image, const TileGrid &grid, OriginRow origin);

}  // namespace qmosaic
