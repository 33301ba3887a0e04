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

#include "qmosaic/state_vector.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qmosaic {

namespace {

void check_num_qubits(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("num_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(num_qubits));
    }
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_num_qubits(num_qubits);
    amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    StateVector state(num_qubits);
    if (index >= state.size()) {
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range for " +
                                std::to_string(num_qubits) + " qubits");
    }
    state.amplitudes_[0] = 0.0;
    state.amplitudes_[index] = 1.0;
    return state;
}

StateVector StateVector::from_bitstring(const std::string &bits) {
    return basis(static_cast<int>(bits.size()), parse_bitstring(bits));
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2 || !std::has_single_bit(n)) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2, got " +
                                    std::to_string(n));
    }
    const int num_qubits = std::countr_zero(n);
    check_num_qubits(num_qubits);
    return StateVector(num_qubits, std::move(amplitudes));
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> probs(amplitudes_.size());
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        probs[i] = std::norm(amplitudes_[i]);
    }
    return probs;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) {
        throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " +
                                std::to_string(num_qubits_) + " qubits");
    }
}

// The single-qubit kernels walk pairs (i0, i1 = i0 | stride) with bit `qubit`
// clear in i0.
void StateVector::apply_rx(int qubit, double theta) {
    check_qubit(qubit);
    const double c = std::cos(theta / 2);
    const Amplitude mis{0.0, -std::sin(theta / 2)};
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t n = amplitudes_.size();
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i0 = base; i0 < base + stride; ++i0) {
            const Amplitude a0 = amplitudes_[i0];
            const Amplitude a1 = amplitudes_[i0 + stride];
            amplitudes_[i0] = c * a0 + mis * a1;
            amplitudes_[i0 + stride] = mis * a0 + c * a1;
        }
    }
}

void StateVector::apply_ry(int qubit, double theta) {
    check_qubit(qubit);
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t n = amplitudes_.size();
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i0 = base; i0 < base + stride; ++i0) {
            const Amplitude a0 = amplitudes_[i0];
            const Amplitude a1 = amplitudes_[i0 + stride];
            amplitudes_[i0] = c * a0 - s * a1;
            amplitudes_[i0 + stride] = s * a0 + c * a1;
        }
    }
}

void StateVector::apply_rz(int qubit, double theta) {
    check_qubit(qubit);
    const Amplitude phase0 = std::polar(1.0, -theta / 2);
    const Amplitude phase1 = std::polar(1.0, theta / 2);
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        amplitudes_[i] *= (i & mask) ? phase1 : phase0;
    }
}

void StateVector::apply_rzz(int qubit_a, int qubit_b, double theta) {
    check_qubit(qubit_a);
    check_qubit(qubit_b);
    if (qubit_a == qubit_b) {
        throw std::invalid_argument("rzz needs two distinct qubits, got " + std::to_string(qubit_a) +
                                    " twice");
    }
    const Amplitude same = std::polar(1.0, -theta / 2);
    const Amplitude differ = std::polar(1.0, theta / 2);
    const std::size_t mask = (std::size_t{1} << qubit_a) | (std::size_t{1} << qubit_b);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        // Odd parity of the two bits <=> Z_a Z_b eigenvalue -1.
        amplitudes_[i] *= (std::popcount(i & mask) & 1) ? differ : same;
    }
}

Amplitude inner_product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner_product: qubit count mismatch");
    }
    Amplitude total{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

double fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(inner_product(a, b));
}

double distance(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("distance: qubit count mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += std::norm(a[i] - b[i]);
    }
    return std::sqrt(total);
}

std::string to_bitstring(std::uint64_t index, int num_qubits) {
    std::string bits(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q) {
        if ((index >> q) & 1U) {
            bits[static_cast<std::size_t>(num_qubits - 1 - q)] = '1';
        }
    }
    return bits;
}

std::uint64_t parse_bitstring(const std::string &bits) {
    if (bits.empty() || bits.size() > 64) {
        throw std::invalid_argument("bitstring length must be in [1, 64]");
    }
    std::uint64_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bitstring may only contain 0 and 1: '" + bits + "'");
        }
        index = (index << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return index;
}

}  // namespace qmosaic
