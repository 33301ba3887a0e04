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

#include "qmosaic/tile_grid.h"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace qmosaic {

namespace {

std::vector<int> partition(int start, int length, int parts) {
    std::vector<int> edges(static_cast<std::size_t>(parts) + 1);
    const int base = length / parts;
    const int extra = length % parts;
    edges[0] = start;
    for (int i = 0; i < parts; ++i) {
        edges[static_cast<std::size_t>(i) + 1] =
            edges[static_cast<std::size_t>(i)] + base + (i < extra ? 1 : 0);
    }
    return edges;
}

void copy_tile(const Image &src, const Rect &from, Image &dst, const Rect &to) {
    const auto channels = static_cast<std::size_t>(src.channels);
    if (from.width == to.width && from.height == to.height) {
        const std::size_t span = static_cast<std::size_t>(from.width) * channels;
        for (int dy = 0; dy < to.height; ++dy) {
            std::memcpy(dst.at(to.x, to.y + dy), src.at(from.x, from.y + dy), span);
        }
        return;
    }
    for (int dy = 0; dy < to.height; ++dy) {
        const int sy = from.y + dy * from.height / to.height;
        for (int dx = 0; dx < to.width; ++dx) {
            const int sx = from.x + dx * from.width / to.width;
            std::memcpy(dst.at(to.x + dx, to.y + dy), src.at(sx, sy), channels);
        }
    }
}

void fill_tile(Image &dst, const Rect &to, const Rgb &color) {
    for (int y = to.y; y < to.y + to.height; ++y) {
        for (int x = to.x; x < to.x + to.width; ++x) {
            std::uint8_t *px = dst.at(x, y);
            px[0] = color.r;
            px[1] = color.g;
            px[2] = color.b;
            if (dst.channels == 4) {
                px[3] = 255;
            }
        }
    }
}

}  // namespace

Rect TileGrid::tile(int row, int column) const {
    const auto r = static_cast<std::size_t>(row);
    const auto c = static_cast<std::size_t>(column);
    return Rect{column_edges[c], row_edges[r], column_edges[c + 1] - column_edges[c],
                row_edges[r + 1] - row_edges[r]};
}

bool TileGrid::uniform() const {
    return region.width % columns == 0 && region.height % rows == 0;
}

TileGrid slice(int image_width, int image_height, const Rect &region, int rows, int columns) {
    if (rows < 1 || columns < 1) {
        throw std::invalid_argument("grid needs at least one row and one column");
    }
    if (region.x < 0 || region.y < 0 || region.width < 1 || region.height < 1 ||
        region.x + region.width > image_width || region.y + region.height > image_height) {
        throw std::invalid_argument(
            "region " + std::to_string(region.width) + "x" + std::to_string(region.height) + "+" +
            std::to_string(region.x) + "+" + std::to_string(region.y) + " lies outside the " +
            std::to_string(image_width) + "x" + std::to_string(image_height) + " image");
    }
    if (region.width < columns || region.height < rows) {
        throw std::invalid_argument("region too small for " + std::to_string(rows) + "x" +
                                    std::to_string(columns) + " non-empty tiles");
    }
    TileGrid grid;
    grid.image_width = image_width;
    grid.image_height = image_height;
    grid.region = region;
    grid.rows = rows;
    grid.columns = columns;
    grid.column_edges = partition(region.x, region.width, columns);
    grid.row_edges = partition(region.y, region.height, rows);
    return grid;
}

TileGrid slice(const Image &image, const Rect &region, int rows, int columns) {
    return slice(image.width, image.height, region, rows, columns);
}

Rect full_region(const Image &image) {
    return Rect{0, 0, image.width, image.height};
}

Image apply_plan(const Image &image, const TileGrid &grid, const TransformPlan &plan,
                 std::span<const Rgb> palette) {
    if (image.width != grid.image_width || image.height != grid.image_height) {
        throw std::invalid_argument("tile grid was built for a different image size");
    }
    if (plan.grid.rows != grid.rows || plan.grid.columns != grid.columns) {
        throw std::invalid_argument("plan is " + std::to_string(plan.grid.rows) + "x" +
                                    std::to_string(plan.grid.columns) + " but the tile grid is " +
                                    std::to_string(grid.rows) + "x" +
                                    std::to_string(grid.columns));
    }
    plan.validate();

    Image out = image;
    if (plan.mode == PlanMode::kGlobalColorReorder) {
        Palette extracted;
        if (palette.empty()) {
            extracted = extract_palette(image, grid, plan.grid.origin_row);
            palette = extracted;
        }
        if (palette.size() != static_cast<std::size_t>(plan.palette_size)) {
            throw std::invalid_argument("palette has " + std::to_string(palette.size()) +
                                        " colours, plan needs " +
                                        std::to_string(plan.palette_size));
        }
        for (int r = 0; r < grid.rows; ++r) {
            for (int c = 0; c < grid.columns; ++c) {
                const int rank = plan.color_ranks[static_cast<std::size_t>(r * grid.columns + c)];
                fill_tile(out, grid.tile(r, c), palette[static_cast<std::size_t>(rank)]);
            }
        }
        return out;
    }

    for (int r = 0; r < grid.rows; ++r) {
        const auto &order = plan.row_permutations[static_cast<std::size_t>(r)].order;
        for (int p = 0; p < grid.columns; ++p) {
            const int source = order[static_cast<std::size_t>(p)];
            if (source != p) {
                copy_tile(image, grid.tile(r, source), out, grid.tile(r, p));
            }
        }
    }
    return out;
}

Palette extract_palette(const Image &image, const TileGrid &grid, OriginRow origin) {
    const GridSpec spec{.columns = grid.columns, .rows = grid.rows, .origin_row = origin};
    Palette palette(static_cast<std::size_t>(grid.rows * grid.columns));
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.columns; ++c) {
            const Rect t = grid.tile(r, c);
            std::uint64_t sum[3] = {0, 0, 0};
            for (int y = t.y; y < t.y + t.height; ++y) {
                for (int x = t.x; x < t.x + t.width; ++x) {
                    const std::uint8_t *px = image.at(x, y);
                    sum[0] += px[0];
                    sum[1] += px[1];
                    sum[2] += px[2];
                }
            }
            const auto count = static_cast<std::uint64_t>(t.width) * static_cast<std::uint64_t>(t.height);
            auto mean = [&](int ch) {
                return static_cast<std::uint8_t>((sum[ch] + count / 2) / count);
            };
            palette[static_cast<std::size_t>(spec.scan_index(r, c))] = Rgb{mean(0), mean(1), mean(2)};
        }
    }
    return palette;
}

}  // namespace qmosaic
