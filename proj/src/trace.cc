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

#include "qmosaic/trace.h"

#include <stdexcept>
#include <string>

#include "qmosaic/rng.h"

namespace qmosaic {

void EvolutionTrace::validate() const {
    if (num_slices < 1 || num_sites < 1) {
        throw std::invalid_argument("trace needs at least one slice and one site");
    }
    if (expectations.size() !=
        static_cast<std::size_t>(num_slices) * static_cast<std::size_t>(num_sites)) {
        throw std::invalid_argument("trace expectation matrix has the wrong size");
    }
    for (double v : expectations) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("trace expectation outside [0, 1]: " + std::to_string(v));
        }
    }
    if (!shot_counts.empty() && shot_counts.size() != static_cast<std::size_t>(num_slices)) {
        throw std::invalid_argument("trace shot_counts must have one entry per slice");
    }
}

EvolutionTrace simulate_trace(const StateVector &initial, const IsingParams &params,
                              const TrotterSchedule &schedule,
                              const std::optional<SamplingOptions> &sampling,
                              const ProgressFn &progress) {
    EvolutionTrace trace;
    trace.num_slices = schedule.num_steps + 1;
    trace.num_sites = params.num_sites;
    trace.expectations.reserve(static_cast<std::size_t>(trace.num_slices) *
                               static_cast<std::size_t>(trace.num_sites));
    if (sampling) {
        if (sampling->shots < 1) {
            throw std::invalid_argument("shots must be >= 1");
        }
        trace.shots = sampling->shots;
    }

    evolve_each(initial, params, schedule, [&](int step, const StateVector &state) {
        if (sampling) {
            Counts counts = sample_counts(state, sampling->shots,
                                          mix_seed(sampling->seed, static_cast<std::uint64_t>(step)));
            for (int site = 0; site < params.num_sites; ++site) {
                trace.expectations.push_back(expect_from_counts(counts, site));
            }
            if (sampling->keep_counts) {
                trace.shot_counts.push_back(std::move(counts));
            }
        } else {
            for (int site = 0; site < params.num_sites; ++site) {
                trace.expectations.push_back(expect_obs(state, site));
            }
        }
        if (progress) {
            progress(step + 1, trace.num_slices);
        }
    });
    return trace;
}

}  // namespace qmosaic
