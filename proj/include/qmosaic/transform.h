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

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qmosaic/ising.h"
#include "qmosaic/trace.h"

namespace qmosaic {

inline constexpr double kDefaultShiftStrength = 10.0;

/// Which image row holds time slice 0.
enum class OriginRow { kBottom, kTop };

/// Grid of `rows` x `columns` tiles; one column per site. Image rows are
/// numbered from the top (row 0) regardless of origin.
struct GridSpec {
    int columns = 0;
    int rows = 0;
    OriginRow origin_row = OriginRow::kBottom;

    void validate() const;

    /// Image row holding the given distance from the origin row (slice index
    /// in row mode).
    int image_row_from_origin(int offset) const {
        return origin_row == OriginRow::kBottom ? rows - 1 - offset : offset;
    }
    int offset_from_origin(int image_row) const { return image_row_from_origin(image_row); }

    /// Position of a cell in the scan that starts at the origin row and runs
    /// left to right, then away from the origin.
    int scan_index(int image_row, int column) const {
        return offset_from_origin(image_row) * columns + column;
    }

    friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// Output position p of the row shows the input tile order[p].
struct RowPermutation {
    int slice_index = 0;
    int run = 0;  // which trace (mirrored plans use 0 and 1)
    std::vector<int> order;
    std::vector<double> i_values;

    bool is_identity() const;
    friend bool operator==(const RowPermutation &, const RowPermutation &) = default;
};

struct Cell {
    int row = 0;
    int column = 0;
    friend auto operator<=>(const Cell &, const Cell &) = default;
};

/// Grid cells that keep their tile in every plan.
struct PinMask {
    std::set<Cell> cells;

    bool contains(int row, int column) const { return cells.contains(Cell{row, column}); }
    friend bool operator==(const PinMask &, const PinMask &) = default;
};

enum class PlanMode { kRowEvolution, kMirroredEvolution, kGlobalColorReorder };

std::string to_string(PlanMode mode);
PlanMode plan_mode_from_string(const std::string &name);

/// Where a plan's numbers came from. Filled by the run pipeline.
struct PlanProvenance {
    std::vector<IsingParams> params;
    TrotterSchedule schedule;
    std::optional<std::int64_t> shots;
    std::vector<std::uint64_t> seeds;

    friend bool operator==(const PlanProvenance &, const PlanProvenance &) = default;
};

/// Everything needed to turn an input image into the output image.
///
/// Permutation modes fill `row_permutations` (one per image row, top first).
/// Colour mode fills `color_ranks` and `color_values`, both indexed by image
/// cell in row-major order from the top-left; a cell's rank is the palette
/// index it receives.
struct TransformPlan {
    PlanMode mode = PlanMode::kRowEvolution;
    GridSpec grid;
    double shift_strength = kDefaultShiftStrength;
    PinMask pins;
    std::vector<RowPermutation> row_permutations;
    int palette_size = 0;
    std::vector<int> color_ranks;
    std::vector<double> color_values;
    PlanProvenance provenance;

    /// Structural checks (bijections, pins, sizes); throws std::invalid_argument.
    void validate() const;
    bool is_identity() const;

    friend bool operator==(const TransformPlan &, const TransformPlan &) = default;
};

/// i_n = n + c * <O_n>; order = stable ascending argsort of i (ties keep
/// the lower original index first).
RowPermutation reorder_row(std::span<const double> expectations,
                           double shift_strength = kDefaultShiftStrength);

/// Restricts `order` to the unpinned columns and writes them, in sorted
/// order, into the unpinned positions. Pinned columns stay in place.
std::vector<int> restrict_to_unpinned(std::span<const int> order,
                                      const std::vector<bool> &pinned_columns);

/// One row per slice; slice 0 sits on the grid's origin row.
TransformPlan plan_row_evolution(const EvolutionTrace &trace, const GridSpec &grid,
                                 double shift_strength = kDefaultShiftStrength,
                                 const PinMask &pins = {});

struct MirrorOptions {
    /// false: rows show steps 1..rows/2. true: rows show slices 0..rows/2-1.
    bool include_initial_slice = false;
};

/// Two independent runs of rows/2 Trotter steps each (traces with rows/2+1
/// slices). Top half: run A, step growing downward; bottom half: run B, step
/// growing upward. The two middle rows hold the most evolved slices.
TransformPlan plan_mirrored(const EvolutionTrace &trace_a, const EvolutionTrace &trace_b,
                            const GridSpec &grid, double shift_strength = kDefaultShiftStrength,
                            const PinMask &pins = {}, const MirrorOptions &options = {});

/// C = <O> * palette_size for every (slice, site), ranked ascending over the
/// whole grid with (slice, site) tie-breaking. The cell holding rank r gets
/// palette colour r, palette order being the scan from the origin row.
TransformPlan plan_global_color(const EvolutionTrace &trace, const GridSpec &grid,
                                int palette_size);

std::vector<int> invert_permutation(std::span<const int> order);

/// Plan whose row permutations undo `plan` (permutation modes only).
TransformPlan inverse_plan(const TransformPlan &plan);

}  // namespace qmosaic
