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

#include "qmosaic/measure.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmosaic/rng.h"

namespace qmosaic {

double expect_obs(const StateVector &state, int site) {
    if (site < 0 || site >= state.num_qubits()) {
        throw std::out_of_range("site " + std::to_string(site) + " out of range");
    }
    const std::size_t mask = std::size_t{1} << site;
    double p1 = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (i & mask) {
            p1 += std::norm(state[i]);
        }
    }
    return std::clamp(p1, 0.0, 1.0);
}

std::uint64_t Counts::total() const {
    std::uint64_t sum = 0;
    for (const auto &[_, c] : by_index) {
        sum += c;
    }
    return sum;
}

Counts sample_counts(const StateVector &state, std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be >= 1, got " + std::to_string(shots));
    }
    // Inverse-CDF sampling. The last cumulative entry is the actual norm, so
    // rounding drift never sends a draw past the end.
    std::vector<double> cdf(state.size());
    double running = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        running += std::norm(state[i]);
        cdf[i] = running;
    }
    auto rng = seeded_engine(seed);
    Counts counts{.num_qubits = state.num_qubits(), .by_index = {}};
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng) * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        // Only reachable at the clamped tail: back off trailing zero entries.
        auto index = static_cast<std::uint64_t>(it - cdf.begin());
        while (index > 0 && std::norm(state[index]) == 0.0) {
            --index;
        }
        ++counts.by_index[index];
    }
    return counts;
}

double expect_from_counts(const Counts &counts, int site) {
    if (counts.by_index.empty()) {
        throw std::invalid_argument("expect_from_counts: empty counts");
    }
    if (site < 0 || site >= counts.num_qubits) {
        throw std::out_of_range("site " + std::to_string(site) + " out of range");
    }
    std::uint64_t ones = 0;
    std::uint64_t total = 0;
    for (const auto &[index, c] : counts.by_index) {
        total += c;
        if ((index >> site) & 1U) {
            ones += c;
        }
    }
    if (total == 0) {
        throw std::invalid_argument("expect_from_counts: zero shots recorded");
    }
    return static_cast<double>(ones) / static_cast<double>(total);
}

StateVector prepare_ry_product(int num_qubits, std::span<const double> probs) {
    if (probs.size() != static_cast<std::size_t>(num_qubits)) {
        throw std::invalid_argument("prepare_ry_product: need " + std::to_string(num_qubits) +
                                    " probabilities, got " + std::to_string(probs.size()));
    }
    StateVector state(num_qubits);
    for (int q = 0; q < num_qubits; ++q) {
        const double p = probs[static_cast<std::size_t>(q)];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("probability for qubit " + std::to_string(q) +
                                        " outside [0, 1]");
        }
        state.apply_ry(q, 2.0 * std::asin(std::sqrt(p)));
    }
    return state;
}

}  // namespace qmosaic
