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

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmosaic {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 28;

/// Dense statevector over `num_qubits` qubits.
///
/// Basis index convention is little-endian: bit n of the index holds qubit n,
/// so the ket |q_{N-1} ... q_1 q_0> has index sum(q_n << n). Bitstrings are
/// always rendered most-significant qubit first.
///
/// Gate methods mutate in place and throw std::out_of_range for bad qubit
/// indices. All gates are unitary, so the norm is preserved up to rounding.
class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits);

    /// Computational basis state |index>.
    static StateVector basis(int num_qubits, std::uint64_t index);

    /// Parses a ket label such as "0100" (q3 q2 q1 q0).
    static StateVector from_bitstring(const std::string &bits);

    /// Takes ownership of explicit amplitudes. The length must be a power of two.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude &operator[](std::size_t index) const { return amplitudes_[index]; }

    double norm_squared() const;
    std::vector<double> probabilities() const;

    /// Rx(theta) = exp(-i theta X / 2).
    void apply_rx(int qubit, double theta);
    /// Ry(theta) = exp(-i theta Y / 2).
    void apply_ry(int qubit, double theta);
    /// Rz(theta) = exp(-i theta Z / 2).
    void apply_rz(int qubit, double theta);
    /// Rzz(theta) = exp(-i theta Z_a Z_b / 2). Requires qubit_a != qubit_b.
    void apply_rzz(int qubit_a, int qubit_b, double theta);

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    StateVector(int num_qubits, std::vector<Amplitude> amplitudes);
    void check_qubit(int qubit) const;

    int num_qubits_;
    std::vector<Amplitude> amplitudes_;
};

/// <a|b>.
Amplitude inner_product(const StateVector &a, const StateVector &b);

/// |<a|b>|^2.
double fidelity(const StateVector &a, const StateVector &b);

/// Euclidean distance ||a - b||.
double distance(const StateVector &a, const StateVector &b);

/// Renders `index` as an N-character bitstring, q_{N-1} first.
std::string to_bitstring(std::uint64_t index, int num_qubits);

/// Inverse of to_bitstring. Throws std::invalid_argument on non-binary input.
std::uint64_t parse_bitstring(const std::string &bits);

}  // namespace qmosaic
