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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmosaic/ising.h"
#include "qmosaic/tile_grid.h"
#include "qmosaic/trace.h"
#include "qmosaic/transform.h"

namespace qmosaic {

class SidecarError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSidecarVersion = 1;
inline constexpr const char *kSidecarFormat = "qmosaic.sidecar";
inline constexpr const char *kSidecarExtension = ".qmplan";

/// Coupling recipe for all three coefficient arrays.
struct CouplingSet {
    CouplingSpec j = CouplingSpec::random_uniform(-1.0, 1.0, 0);
    CouplingSpec hz = CouplingSpec::random_uniform(-1.0, 1.0, 0);
    CouplingSpec hx = CouplingSpec::random_uniform(-1.0, 1.0, 0);
    bool periodic = true;

    friend bool operator==(const CouplingSet &, const CouplingSet &) = default;
};

/// Reproducibility record written next to every output image. Together with
/// the input image it determines the output bit for bit: replay slices the
/// recorded region and applies the recorded plan.
struct Sidecar {
    int version = kSidecarVersion;
    PlanMode mode = PlanMode::kRowEvolution;
    int image_width = 0;
    int image_height = 0;
    Rect region;
    bool resampled = false;  // tiles in a row differ in size
    CouplingSet couplings;
    std::vector<std::uint64_t> seeds;
    TrotterSchedule schedule;
    Backend backend = Backend::kExact;
    std::optional<std::int64_t> shots;
    std::vector<EvolutionTrace> traces;
    TransformPlan plan;
    Palette palette;  // colour mode only
    std::string input_hash;
    std::string output_hash;
    nlohmann::json request;  // the resolved run request, free-form

    friend bool operator==(const Sidecar &, const Sidecar &) = default;
};

/// Indented JSON text, stable key order.
std::string write_sidecar(const Sidecar &sidecar);

/// Throws SidecarError on malformed text, a foreign format tag or an
/// unsupported version.
Sidecar read_sidecar(const std::string &text);

std::string to_string(Backend backend);
Backend backend_from_string(const std::string &name);
std::string to_string(OriginRow origin);
OriginRow origin_from_string(const std::string &name);

// JSON mappings shared with the run layer.
void to_json(nlohmann::json &j, const IsingParams &p);
void from_json(const nlohmann::json &j, IsingParams &p);
void to_json(nlohmann::json &j, const CouplingSpec &c);
void from_json(const nlohmann::json &j, CouplingSpec &c);
void to_json(nlohmann::json &j, const CouplingSet &c);
void from_json(const nlohmann::json &j, CouplingSet &c);
void to_json(nlohmann::json &j, const TrotterSchedule &s);
void from_json(const nlohmann::json &j, TrotterSchedule &s);
void to_json(nlohmann::json &j, const EvolutionTrace &t);
void from_json(const nlohmann::json &j, EvolutionTrace &t);
void to_json(nlohmann::json &j, const GridSpec &g);
void from_json(const nlohmann::json &j, GridSpec &g);
void to_json(nlohmann::json &j, const Rect &r);
void from_json(const nlohmann::json &j, Rect &r);
void to_json(nlohmann::json &j, const PinMask &p);
void from_json(const nlohmann::json &j, PinMask &p);
void to_json(nlohmann::json &j, const TransformPlan &p);
void from_json(const nlohmann::json &j, TransformPlan &p);

}  // namespace qmosaic
