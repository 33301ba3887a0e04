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

#include "qmosaic/template.h"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace qmosaic {

namespace {

// 3x5 digit glyphs, one row per entry, bit 2 = leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits = {{
    {7, 5, 5, 5, 7},
    {2, 6, 2, 2, 7},
    {7, 1, 7, 4, 7},
    {7, 1, 7, 1, 7},
    {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7},
    {7, 4, 7, 5, 7},
    {7, 1, 1, 1, 1},
    {7, 5, 7, 5, 7},
    {7, 5, 7, 1, 7},
}};

void put(Image &img, int x, int y, std::uint8_t v) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    std::uint8_t *px = img.at(x, y);
    px[0] = px[1] = px[2] = v;
    if (img.channels == 4) px[3] = 255;
}

void fill(Image &img, int x0, int y0, int w, int h, std::uint8_t v) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) put(img, x, y, v);
}

// Black digits on a white box at (x, y), clipped to max_w x max_h.
void stamp(Image &img, int x, int y, int max_w, int max_h, int number) {
    const std::string text = std::to_string(number);
    const int chars = static_cast<int>(text.size());
    // Glyph cell is 4x6 units including spacing; pick the largest scale that fits.
    int scale = std::min((max_w - 2) / (4 * chars), (max_h - 2) / 6);
    scale = std::clamp(scale, 1, 4);
    const int box_w = std::min(max_w, 4 * chars * scale + scale + 1);
    const int box_h = std::min(max_h, 6 * scale + 1);
    fill(img, x, y, box_w, box_h, 255);
    for (int i = 0; i < chars; ++i) {
        const auto &glyph = kDigits[static_cast<std::size_t>(text[static_cast<std::size_t>(i)] - '0')];
        const int gx = x + scale + 4 * scale * i;
        for (int row = 0; row < 5; ++row) {
            for (int col = 0; col < 3; ++col) {
                if (!((glyph[static_cast<std::size_t>(row)] >> (2 - col)) & 1)) continue;
                const int px = gx + col * scale, py = y + scale + row * scale;
                if (px + scale > x + max_w || py + scale > y + max_h) continue;
                fill(img, px, py, scale, scale, 0);
            }
        }
    }
}

}  // namespace

int tile_label(const GridSpec &grid, int row, int column) {
    return row * grid.columns + column + 1;
}

std::vector<LegendEntry> legend(const TransformPlan &plan) {
    plan.validate();
    const GridSpec &g = plan.grid;
    std::vector<LegendEntry> out;
    out.reserve(static_cast<std::size_t>(g.rows * g.columns));
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.columns; ++c) {
            Cell src;
            if (plan.mode == PlanMode::kGlobalColorReorder) {
                const int rank = plan.color_ranks[static_cast<std::size_t>(r * g.columns + c)];
                src = Cell{g.image_row_from_origin(rank / g.columns), rank % g.columns};
            } else {
                src = Cell{r, plan.row_permutations[static_cast<std::size_t>(r)].order[static_cast<std::size_t>(c)]};
            }
            out.push_back(LegendEntry{tile_label(g, src.row, src.column), src, Cell{r, c}});
        }
    }
    return out;
}

std::string legend_csv(const TransformPlan &plan) {
    std::ostringstream os;
    os << "label,src_row,src_col,dst_row,dst_col\n";
    for (const auto &e : legend(plan)) {
        os << e.label << ',' << e.source.row << ',' << e.source.column << ',' << e.destination.row << ','
           << e.destination.column << '\n';
    }
    return os.str();
}

Image render_template(const Image &output, const TileGrid &tiles, const TransformPlan &plan) {
    if (plan.grid.rows != tiles.rows || plan.grid.columns != tiles.columns) {
        throw std::invalid_argument("plan and tile grid disagree on the grid shape");
    }
    if (output.width != tiles.image_width || output.height != tiles.image_height) {
        throw std::invalid_argument("tile grid was built for a different image size");
    }
    Image img = output;
    for (const auto &e : legend(plan)) {
        const Rect t = tiles.tile(e.destination.row, e.destination.column);
        stamp(img, t.x + 1, t.y + 1, t.width - 1, t.height - 1, e.label);
    }
    for (int x : tiles.column_edges) {
        const int xx = std::min(x, tiles.image_width - 1);
        for (int y = tiles.region.y; y < tiles.region.y + tiles.region.height; ++y) put(img, xx, y, 0);
    }
    for (int y : tiles.row_edges) {
        const int yy = std::min(y, tiles.image_height - 1);
        for (int x = tiles.region.x; x < tiles.region.x + tiles.region.width; ++x) put(img, x, yy, 0);
    }
    return img;
}

}  // namespace qmosaic
