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

#include "qmosaic/transform.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qmosaic {

namespace {

bool is_permutation_of_range(std::span<const int> order, int n) {
    if (order.size() != static_cast<std::size_t>(n)) {
        return false;
    }
    std::vector<bool> seen(order.size(), false);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            return false;
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

void check_pins(const PinMask &pins, const GridSpec &grid) {
    for (const auto &cell : pins.cells) {
        if (cell.row < 0 || cell.row >= grid.rows || cell.column < 0 ||
            cell.column >= grid.columns) {
            throw std::invalid_argument("pinned cell (" + std::to_string(cell.row) + "," +
                                        std::to_string(cell.column) + ") lies outside the grid");
        }
    }
}

std::vector<bool> pinned_columns(const PinMask &pins, int row, int columns) {
    std::vector<bool> pinned(static_cast<std::size_t>(columns), false);
    for (int c = 0; c < columns; ++c) {
        pinned[static_cast<std::size_t>(c)] = pins.contains(row, c);
    }
    return pinned;
}

RowPermutation pinned_row(std::span<const double> expectations, double shift_strength,
                          const PinMask &pins, int image_row, int columns) {
    RowPermutation perm = reorder_row(expectations, shift_strength);
    const auto pinned = pinned_columns(pins, image_row, columns);
    perm.order = restrict_to_unpinned(perm.order, pinned);
    return perm;
}

void check_trace_columns(const EvolutionTrace &trace, const GridSpec &grid) {
    trace.validate();
    if (trace.num_sites != grid.columns) {
        throw std::invalid_argument("trace has " + std::to_string(trace.num_sites) +
                                    " sites but the grid has " + std::to_string(grid.columns) +
                                    " columns");
    }
}

}  // namespace

void GridSpec::validate() const {
    if (columns < 1 || rows < 1) {
        throw std::invalid_argument("grid needs at least one row and one column");
    }
}

bool RowPermutation::is_identity() const {
    for (std::size_t p = 0; p < order.size(); ++p) {
        if (order[p] != static_cast<int>(p)) {
            return false;
        }
    }
    return true;
}

std::string to_string(PlanMode mode) {
    switch (mode) {
        case PlanMode::kRowEvolution:
            return "row";
        case PlanMode::kMirroredEvolution:
            return "mirrored";
        case PlanMode::kGlobalColorReorder:
            return "colors";
    }
    return "row";
}

PlanMode plan_mode_from_string(const std::string &name) {
    if (name == "row") return PlanMode::kRowEvolution;
    if (name == "mirrored") return PlanMode::kMirroredEvolution;
    if (name == "colors") return PlanMode::kGlobalColorReorder;
    throw std::invalid_argument("unknown mode '" + name + "' (expected row, mirrored or colors)");
}

void TransformPlan::validate() const {
    grid.validate();
    check_pins(pins, grid);
    if (mode == PlanMode::kGlobalColorReorder) {
        const int cells = grid.rows * grid.columns;
        if (palette_size != cells) {
            throw std::invalid_argument("colour plan palette size must equal the cell count");
        }
        if (!is_permutation_of_range(color_ranks, cells)) {
            throw std::invalid_argument("colour plan ranks are not a bijection");
        }
        if (color_values.size() != static_cast<std::size_t>(cells)) {
            throw std::invalid_argument("colour plan values have the wrong size");
        }
        return;
    }
    if (row_permutations.size() != static_cast<std::size_t>(grid.rows)) {
        throw std::invalid_argument("plan needs one permutation per grid row");
    }
    for (int r = 0; r < grid.rows; ++r) {
        const auto &order = row_permutations[static_cast<std::size_t>(r)].order;
        if (!is_permutation_of_range(order, grid.columns)) {
            throw std::invalid_argument("row " + std::to_string(r) + " order is not a permutation");
        }
        for (int c = 0; c < grid.columns; ++c) {
            if (pins.contains(r, c) && order[static_cast<std::size_t>(c)] != c) {
                throw std::invalid_argument("pinned cell moved in row " + std::to_string(r));
            }
        }
    }
}

bool TransformPlan::is_identity() const {
    if (mode == PlanMode::kGlobalColorReorder) {
        for (int r = 0; r < grid.rows; ++r) {
            for (int c = 0; c < grid.columns; ++c) {
                if (color_ranks[static_cast<std::size_t>(r * grid.columns + c)] !=
                    grid.scan_index(r, c)) {
                    return false;
                }
            }
        }
        return true;
    }
    return std::all_of(row_permutations.begin(), row_permutations.end(),
                       [](const RowPermutation &p) { return p.is_identity(); });
}

RowPermutation reorder_row(std::span<const double> expectations, double shift_strength) {
    if (!(shift_strength > 0.0) || !std::isfinite(shift_strength)) {
        throw std::invalid_argument("shift strength must be positive and finite");
    }
    RowPermutation perm;
    perm.i_values.resize(expectations.size());
    for (std::size_t n = 0; n < expectations.size(); ++n) {
        const double e = expectations[n];
        if (!(e >= 0.0 && e <= 1.0)) {
            throw std::invalid_argument("expectation value outside [0, 1] at site " +
                                        std::to_string(n));
        }
        perm.i_values[n] = static_cast<double>(n) + shift_strength * e;
    }
    perm.order.resize(expectations.size());
    std::iota(perm.order.begin(), perm.order.end(), 0);
    std::stable_sort(perm.order.begin(), perm.order.end(), [&](int a, int b) {
        return perm.i_values[static_cast<std::size_t>(a)] <
               perm.i_values[static_cast<std::size_t>(b)];
    });
    return perm;
}

std::vector<int> restrict_to_unpinned(std::span<const int> order,
                                      const std::vector<bool> &pinned_columns) {
    if (order.size() != pinned_columns.size()) {
        throw std::invalid_argument("pin row length does not match the order");
    }
    std::vector<int> out(order.size());
    std::vector<int> movable;
    for (int c : order) {
        if (!pinned_columns[static_cast<std::size_t>(c)]) {
            movable.push_back(c);
        }
    }
    auto next = movable.begin();
    for (std::size_t p = 0; p < order.size(); ++p) {
        out[p] = pinned_columns[p] ? static_cast<int>(p) : *next++;
    }
    return out;
}

TransformPlan plan_row_evolution(const EvolutionTrace &trace, const GridSpec &grid,
                                 double shift_strength, const PinMask &pins) {
    grid.validate();
    check_trace_columns(trace, grid);
    check_pins(pins, grid);
    if (trace.num_slices != grid.rows) {
        throw std::invalid_argument("row mode needs one slice per grid row: " +
                                    std::to_string(trace.num_slices) + " slices vs " +
                                    std::to_string(grid.rows) + " rows");
    }
    TransformPlan plan;
    plan.mode = PlanMode::kRowEvolution;
    plan.grid = grid;
    plan.shift_strength = shift_strength;
    plan.pins = pins;
    plan.row_permutations.resize(static_cast<std::size_t>(grid.rows));
    for (int s = 0; s < trace.num_slices; ++s) {
        const int row = grid.image_row_from_origin(s);
        RowPermutation perm = pinned_row(trace.slice(s), shift_strength, pins, row, grid.columns);
        perm.slice_index = s;
        plan.row_permutations[static_cast<std::size_t>(row)] = std::move(perm);
    }
    return plan;
}

TransformPlan plan_mirrored(const EvolutionTrace &trace_a, const EvolutionTrace &trace_b,
                            const GridSpec &grid, double shift_strength, const PinMask &pins,
                            const MirrorOptions &options) {
    grid.validate();
    check_trace_columns(trace_a, grid);
    check_trace_columns(trace_b, grid);
    check_pins(pins, grid);
    if (grid.rows % 2 != 0) {
        throw std::invalid_argument("mirrored mode needs an even number of rows, got " +
                                    std::to_string(grid.rows));
    }
    const int half = grid.rows / 2;
    for (const auto *trace : {&trace_a, &trace_b}) {
        if (trace->num_slices != half + 1) {
            throw std::invalid_argument("mirrored mode needs traces of " + std::to_string(half) +
                                        " steps (" + std::to_string(half + 1) + " slices), got " +
                                        std::to_string(trace->num_slices) + " slices");
        }
    }
    const int first_slice = options.include_initial_slice ? 0 : 1;

    TransformPlan plan;
    plan.mode = PlanMode::kMirroredEvolution;
    plan.grid = grid;
    plan.shift_strength = shift_strength;
    plan.pins = pins;
    plan.row_permutations.resize(static_cast<std::size_t>(grid.rows));
    for (int r = 0; r < grid.rows; ++r) {
        const bool upper = r < half;
        const EvolutionTrace &trace = upper ? trace_a : trace_b;
        const int slice = first_slice + (upper ? r : grid.rows - 1 - r);
        RowPermutation perm = pinned_row(trace.slice(slice), shift_strength, pins, r, grid.columns);
        perm.slice_index = slice;
        perm.run = upper ? 0 : 1;
        plan.row_permutations[static_cast<std::size_t>(r)] = std::move(perm);
    }
    return plan;
}

TransformPlan plan_global_color(const EvolutionTrace &trace, const GridSpec &grid,
                                int palette_size) {
    grid.validate();
    check_trace_columns(trace, grid);
    const int cells = grid.rows * grid.columns;
    if (palette_size != cells) {
        throw std::invalid_argument("palette size " + std::to_string(palette_size) +
                                    " does not match the " + std::to_string(cells) + " grid cells");
    }
    if (trace.num_slices != grid.rows) {
        throw std::invalid_argument("colour mode needs one slice per grid row");
    }

    // Scan position p = slice * columns + site, so a stable sort on p breaks
    // ties by (slice, site).
    std::vector<double> values(static_cast<std::size_t>(cells));
    for (int p = 0; p < cells; ++p) {
        values[static_cast<std::size_t>(p)] =
            trace.expectations[static_cast<std::size_t>(p)] * palette_size;
    }
    std::vector<int> by_rank(static_cast<std::size_t>(cells));
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::stable_sort(by_rank.begin(), by_rank.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
    });
    const std::vector<int> rank_of = invert_permutation(by_rank);

    TransformPlan plan;
    plan.mode = PlanMode::kGlobalColorReorder;
    plan.grid = grid;
    plan.palette_size = palette_size;
    plan.color_ranks.resize(static_cast<std::size_t>(cells));
    plan.color_values.resize(static_cast<std::size_t>(cells));
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.columns; ++c) {
            const auto cell = static_cast<std::size_t>(r * grid.columns + c);
            const auto p = static_cast<std::size_t>(grid.scan_index(r, c));
            plan.color_ranks[cell] = rank_of[p];
            plan.color_values[cell] = values[p];
        }
    }
    return plan;
}

std::vector<int> invert_permutation(std::span<const int> order) {
    std::vector<int> inverse(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        inverse[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
    }
    return inverse;
}

TransformPlan inverse_plan(const TransformPlan &plan) {
    if (plan.mode == PlanMode::kGlobalColorReorder) {
        throw std::invalid_argument("colour plans have no tile inverse");
    }
    TransformPlan inv = plan;
    for (auto &perm : inv.row_permutations) {
        perm.order = invert_permutation(perm.order);
    }
    return inv;
}

}  // namespace qmosaic
