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
#include <map>
#include <span>

#include "qmosaic/state_vector.h"

namespace qmosaic {

/// <psi| (I - Z_site) / 2 |psi>: the probability that `site` reads 1.
double expect_obs(const StateVector &state, int site);

/// Measurement histogram keyed by basis index. Render keys with to_bitstring.
struct Counts {
    int num_qubits = 0;
    std::map<std::uint64_t, std::uint64_t> by_index;

    std::uint64_t total() const;
    friend bool operator==(const Counts &, const Counts &) = default;
};

/// Draws `shots` independent computational-basis samples from |amplitude|^2.
/// Deterministic for a given seed. No noise model.
Counts sample_counts(const StateVector &state, std::int64_t shots, std::uint64_t seed);

/// Fraction of shots in which `site` read 1.
double expect_from_counts(const Counts &counts, int site);

/// Product state with P(qubit n = 1) = probs[n], built from |0...0> by
/// Ry(2 asin(sqrt(p))) on every qubit.
StateVector prepare_ry_product(int num_qubits, std::span<const double> probs);

}  // namespace qmosaic
