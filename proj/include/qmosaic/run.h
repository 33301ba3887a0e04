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

// End-to-end runs: request -> simulation -> plan -> image + sidecar.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmosaic/image.h"
#include "qmosaic/sidecar.h"
#include "qmosaic/tile_grid.h"
#include "qmosaic/trace.h"
#include "qmosaic/transform.h"

namespace qmosaic {

/// Bad user input (maps to exit code 2 / HTTP 400).
class RequestError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kDefaultShots = 4096;

struct RunRequest {
    PlanMode mode = PlanMode::kRowEvolution;
    GridSpec grid{.columns = 16, .rows = 13};
    std::optional<Rect> region;  // whole image when absent
    CouplingSet couplings;
    std::uint64_t seed = 0;    // coupling draws; sampling too in row/colour mode
    std::uint64_t seed_a = 0;  // mirrored: sampling seed of the upper run
    std::uint64_t seed_b = 1;  // mirrored: sampling seed of the lower run
    double dt = kDefaultDt;
    int steps = 12;
    Backend backend = Backend::kSampled;
    std::int64_t shots = kDefaultShots;
    double shift_strength = kDefaultShiftStrength;
    PinMask pins;
    Palette palette;  // colour mode; extracted from the input when empty
    bool include_initial_slice = false;

    /// Steps implied by the grid: one slice per row (row, colour) or one step
    /// per half-row (mirrored).
    int derived_steps() const;
    void validate() const;

    friend bool operator==(const RunRequest &, const RunRequest &) = default;
};

/// Builds a request from the structured-text form, filling mode-dependent
/// defaults. Accepts shorthand couplings (a number, a list, "random", or an
/// object of per-term values). Throws RequestError.
RunRequest parse_request(const nlohmann::json &j);

/// Canonical form; parse_request(request_to_json(r)) == r.
nlohmann::json request_to_json(const RunRequest &request);

struct RunOutput {
    Image image;
    Bytes png;
    Sidecar sidecar;
    std::string sidecar_text;
};

/// Progress counts simulated slices over all traces.
RunOutput run_pipeline(const RunRequest &request, std::span<const std::uint8_t> input_bytes,
                       const ProgressFn &progress = {});
RunOutput run_pipeline(const RunRequest &request, const Image &input,
                       const ProgressFn &progress = {});

/// Realized Hamiltonian parameters for a request.
IsingParams resolve_params(const RunRequest &request);

struct ReplayResult {
    Image image;
    Bytes png;
    bool input_matches = false;
    bool output_matches = false;
};

/// Re-applies the stored plan (no simulation).
ReplayResult replay(const Sidecar &sidecar, const Image &input);

/// Re-runs the whole pipeline from the stored request and reports whether
/// traces and plan come out identical.
bool resimulate_matches(const Sidecar &sidecar, const Image &input);

/// One frame per time slice: frame s applies every plan row whose slice
/// index is <= s. Not defined for colour plans.
std::vector<Image> render_frames(const Sidecar &sidecar, const Image &input);

/// Tile grid the sidecar's plan was applied to.
TileGrid sidecar_grid(const Sidecar &sidecar);

/// {"traces": [{"run", "num_slices", "num_sites", "shots", "expectations"}]}
nlohmann::json trace_matrix_json(const Sidecar &sidecar);

}  // namespace qmosaic
