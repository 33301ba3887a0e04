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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qmosaic/ising.h"
#include "qmosaic/measure.h"
#include "qmosaic/state_vector.h"

namespace qmosaic {

/// Exact statevector expectations, or estimates from simulated shots.
enum class Backend { kExact, kSampled };

/// Per-slice, per-site values of <O_n> = P(site n reads 1). Slice 0 is the
/// un-evolved initial state; slice s follows s Trotter steps.
struct EvolutionTrace {
    int num_slices = 0;
    int num_sites = 0;
    std::vector<double> expectations;  // row-major [slice][site]
    std::optional<std::int64_t> shots;  // set for sampled traces
    std::vector<Counts> shot_counts;    // one per slice when kept

    double at(int slice, int site) const {
        return expectations[static_cast<std::size_t>(slice) * static_cast<std::size_t>(num_sites) +
                            static_cast<std::size_t>(site)];
    }
    std::span<const double> slice(int s) const {
        return std::span<const double>(expectations)
            .subspan(static_cast<std::size_t>(s) * static_cast<std::size_t>(num_sites),
                     static_cast<std::size_t>(num_sites));
    }

    /// Shape and [0, 1] range checks; throws std::invalid_argument.
    void validate() const;

    friend bool operator==(const EvolutionTrace &, const EvolutionTrace &) = default;
};

/// Shot-estimated expectations. Each slice is measured as its own circuit
/// with seed mix_seed(seed, slice).
struct SamplingOptions {
    std::int64_t shots = 4096;
    std::uint64_t seed = 0;
    bool keep_counts = true;
};

/// Called after every completed slice with (done, total).
using ProgressFn = std::function<void(int, int)>;

EvolutionTrace simulate_trace(const StateVector &initial, const IsingParams &params,
                              const TrotterSchedule &schedule,
                              const std::optional<SamplingOptions> &sampling = std::nullopt,
                              const ProgressFn &progress = {});

}  // namespace qmosaic
