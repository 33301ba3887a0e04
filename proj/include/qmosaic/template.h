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

// Numbered templates for reproducing a plan by hand.

#pragma once

#include <string>
#include <vector>

#include "qmosaic/image.h"
#include "qmosaic/tile_grid.h"
#include "qmosaic/transform.h"

namespace qmosaic {

/// Label of source tile (row, column): row * columns + column + 1.
int tile_label(const GridSpec &grid, int row, int column);

struct LegendEntry {
    int label = 0;
    Cell source;
    Cell destination;

    friend bool operator==(const LegendEntry &, const LegendEntry &) = default;
};

/// One entry per destination cell, row-major. For colour plans the source is
/// the tile whose colour was assigned to the destination.
std::vector<LegendEntry> legend(const TransformPlan &plan);

/// CSV with header "label,src_row,src_col,dst_row,dst_col".
std::string legend_csv(const TransformPlan &plan);

/// Output image with the tile grid drawn in and each tile stamped with the
/// label of its source tile.
Image render_template(const Image &output, const TileGrid &tiles, const TransformPlan &plan);

}  // namespace qmosaic
