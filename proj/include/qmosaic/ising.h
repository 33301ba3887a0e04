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
#include <span>
#include <string>
#include <vector>

#include "qmosaic/state_vector.h"

namespace qmosaic {

/// Couplings of the chain
///
///   H = sum_n J_n Z_n Z_{n+1} + sum_n hz_n Z_n + sum_n hx_n X_n
///
/// The pair (N-1, 0) is included only when `periodic`. A single site has no
/// neighbour: the periodic self-pair Z_0 Z_0 is the identity and is dropped.
struct IsingParams {
    int num_sites = 0;
    std::vector<double> j;
    std::vector<double> hz;
    std::vector<double> hx;
    bool periodic = true;

    /// Throws std::invalid_argument unless all arrays have length num_sites.
    void validate() const;

    /// Neighbour pairs (n, n+1 mod N) carrying a ZZ term, in order.
    std::vector<std::pair<int, int>> bonds() const;

    friend bool operator==(const IsingParams &, const IsingParams &) = default;
};

/// Which coefficient array a CouplingSpec fills. Also selects the random
/// stream so J, hz and hx drawn from one seed are independent.
enum class CouplingTerm { kJ = 0, kHz = 1, kHx = 2 };

/// Fixed values (one value broadcast, or one per site) or seeded uniform draws.
struct CouplingSpec {
    enum class Kind { kFixed, kRandomUniform };

    Kind kind = Kind::kRandomUniform;
    std::vector<double> values;
    double low = -1.0;
    double high = 1.0;
    std::uint64_t seed = 0;

    static CouplingSpec fixed(std::vector<double> values);
    static CouplingSpec random_uniform(double low, double high, std::uint64_t seed);

    std::vector<double> realize(int num_sites, CouplingTerm term) const;

    friend bool operator==(const CouplingSpec &, const CouplingSpec &) = default;
};

IsingParams make_params(int num_sites, const CouplingSpec &j, const CouplingSpec &hz,
                        const CouplingSpec &hx, bool periodic = true);

/// Every coefficient uniform on [low, high], all three arrays from `seed`.
IsingParams random_params(int num_sites, std::uint64_t seed, double low = -1.0,
                          double high = 1.0, bool periodic = true);

inline constexpr double kDefaultDt = 0.1;

/// k first-order Trotter steps covering total time t; dt = t / k.
/// A zero-step schedule is allowed and evolves nothing.
struct TrotterSchedule {
    double total_time = 0.0;
    int num_steps = 0;

    static TrotterSchedule from_dt(double dt, int num_steps);

    double dt() const { return num_steps == 0 ? 0.0 : total_time / num_steps; }
    void validate() const;

    friend bool operator==(const TrotterSchedule &, const TrotterSchedule &) = default;
};

enum class GateKind { kRzz, kRz, kRx, kRy };

struct Gate {
    GateKind kind;
    int qubit;
    int partner = -1;  // second qubit of Rzz
    double theta;
};

using GateSequence = std::vector<Gate>;

/// One Trotter step exp(-i H dt) ~ prod_n exp(-i H_n dt): every Rzz(2 J_n dt)
/// on the bonds, then Rz(2 hz_n dt) per site, then Rx(2 hx_n dt) per site.
/// theta = 2 * coefficient * dt makes each gate exactly exp(-i coeff P dt).
GateSequence build_trotter_step(const IsingParams &params, double dt);

void apply_gates(StateVector &state, std::span<const Gate> gates);

/// Calls `visit(step, state)` for step 0 (the initial state) through k.
void evolve_each(const StateVector &initial, const IsingParams &params,
                 const TrotterSchedule &schedule,
                 const std::function<void(int, const StateVector &)> &visit);

/// k+1 snapshots; snapshot s is s Trotter steps applied to `initial`.
std::vector<StateVector> evolve(const StateVector &initial, const IsingParams &params,
                                const TrotterSchedule &schedule);

inline constexpr int kMaxExactSites = 12;

/// Dense H, row-major 2^N x 2^N, assembled term by term from Kronecker
/// products of the 2x2 Pauli matrices. H is real symmetric.
std::vector<double> ising_hamiltonian(const IsingParams &params);

/// Diagonal energy <b|H|b> of basis state b with all transverse fields off.
double classical_energy(const IsingParams &params, std::uint64_t bits);

/// exp(-i H t) |initial> by full eigendecomposition of the dense Hamiltonian.
/// Reference oracle only; limited to kMaxExactSites sites.
StateVector exact_evolve(const StateVector &initial, const IsingParams &params, double t);

}  // namespace qmosaic
