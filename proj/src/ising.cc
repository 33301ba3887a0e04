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

#include "qmosaic/ising.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qmosaic/rng.h"

namespace qmosaic {

void IsingParams::validate() const {
    if (num_sites < 1) {
        throw std::invalid_argument("num_sites must be >= 1");
    }
    const auto n = static_cast<std::size_t>(num_sites);
    if (j.size() != n || hz.size() != n || hx.size() != n) {
        throw std::invalid_argument("coupling arrays must all have length " +
                                    std::to_string(num_sites));
    }
}

std::vector<std::pair<int, int>> IsingParams::bonds() const {
    std::vector<std::pair<int, int>> out;
    const int last = periodic ? num_sites : num_sites - 1;
    for (int n = 0; n < last; ++n) {
        const int next = (n + 1) % num_sites;
        if (next != n) {
            out.emplace_back(n, next);
        }
    }
    return out;
}

CouplingSpec CouplingSpec::fixed(std::vector<double> values) {
    CouplingSpec spec;
    spec.kind = Kind::kFixed;
    spec.values = std::move(values);
    return spec;
}

CouplingSpec CouplingSpec::random_uniform(double low, double high, std::uint64_t seed) {
    CouplingSpec spec;
    spec.kind = Kind::kRandomUniform;
    spec.low = low;
    spec.high = high;
    spec.seed = seed;
    return spec;
}

std::vector<double> CouplingSpec::realize(int num_sites, CouplingTerm term) const {
    const auto n = static_cast<std::size_t>(num_sites);
    if (kind == Kind::kFixed) {
        if (values.size() == 1) {
            return std::vector<double>(n, values.front());
        }
        if (values.size() != n) {
            throw std::invalid_argument("fixed couplings need 1 or " + std::to_string(num_sites) +
                                        " values, got " + std::to_string(values.size()));
        }
        return values;
    }
    if (!(low <= high)) {
        throw std::invalid_argument("random coupling range needs low <= high");
    }
    auto rng = seeded_engine(seed, static_cast<std::uint64_t>(term));
    std::vector<double> out(n);
    for (auto &v : out) {
        v = low + (high - low) * uniform01(rng);
    }
    return out;
}

IsingParams make_params(int num_sites, const CouplingSpec &j, const CouplingSpec &hz,
                        const CouplingSpec &hx, bool periodic) {
    IsingParams params{
        .num_sites = num_sites,
        .j = j.realize(num_sites, CouplingTerm::kJ),
        .hz = hz.realize(num_sites, CouplingTerm::kHz),
        .hx = hx.realize(num_sites, CouplingTerm::kHx),
        .periodic = periodic,
    };
    params.validate();
    return params;
}

IsingParams random_params(int num_sites, std::uint64_t seed, double low, double high,
                          bool periodic) {
    const auto spec = CouplingSpec::random_uniform(low, high, seed);
    return make_params(num_sites, spec, spec, spec, periodic);
}

TrotterSchedule TrotterSchedule::from_dt(double dt, int num_steps) {
    TrotterSchedule s{.total_time = dt * num_steps, .num_steps = num_steps};
    s.validate();
    return s;
}

void TrotterSchedule::validate() const {
    if (num_steps < 0) {
        throw std::invalid_argument("num_steps must be >= 0");
    }
    if (!std::isfinite(total_time)) {
        throw std::invalid_argument("total_time must be finite");
    }
}

GateSequence build_trotter_step(const IsingParams &params, double dt) {
    params.validate();
    GateSequence gates;
    const auto bonds = params.bonds();
    gates.reserve(bonds.size() + 2 * static_cast<std::size_t>(params.num_sites));
    for (const auto &[a, b] : bonds) {
        gates.push_back({GateKind::kRzz, a, b, 2.0 * params.j[static_cast<std::size_t>(a)] * dt});
    }
    for (int n = 0; n < params.num_sites; ++n) {
        gates.push_back({GateKind::kRz, n, -1, 2.0 * params.hz[static_cast<std::size_t>(n)] * dt});
    }
    for (int n = 0; n < params.num_sites; ++n) {
        gates.push_back({GateKind::kRx, n, -1, 2.0 * params.hx[static_cast<std::size_t>(n)] * dt});
    }
    return gates;
}

void apply_gates(StateVector &state, std::span<const Gate> gates) {
    for (const auto &g : gates) {
        switch (g.kind) {
            case GateKind::kRzz:
                state.apply_rzz(g.qubit, g.partner, g.theta);
                break;
            case GateKind::kRz:
                state.apply_rz(g.qubit, g.theta);
                break;
            case GateKind::kRx:
                state.apply_rx(g.qubit, g.theta);
                break;
            case GateKind::kRy:
                state.apply_ry(g.qubit, g.theta);
                break;
        }
    }
}

void evolve_each(const StateVector &initial, const IsingParams &params,
                 const TrotterSchedule &schedule,
                 const std::function<void(int, const StateVector &)> &visit) {
    params.validate();
    schedule.validate();
    if (initial.num_qubits() != params.num_sites) {
        throw std::invalid_argument("initial state has " + std::to_string(initial.num_qubits()) +
                                    " qubits but the chain has " +
                                    std::to_string(params.num_sites) + " sites");
    }
    StateVector state = initial;
    visit(0, state);
    if (schedule.num_steps == 0) {
        return;
    }
    const GateSequence step = build_trotter_step(params, schedule.dt());
    for (int s = 1; s <= schedule.num_steps; ++s) {
        apply_gates(state, step);
        visit(s, state);
    }
}

std::vector<StateVector> evolve(const StateVector &initial, const IsingParams &params,
                                const TrotterSchedule &schedule) {
    std::vector<StateVector> snapshots;
    snapshots.reserve(static_cast<std::size_t>(schedule.num_steps) + 1);
    evolve_each(initial, params, schedule,
                [&](int, const StateVector &state) { snapshots.push_back(state); });
    return snapshots;
}

namespace {

void check_exact_size(const IsingParams &params) {
    params.validate();
    if (params.num_sites > kMaxExactSites) {
        throw std::invalid_argument("dense evolution supports at most " +
                                    std::to_string(kMaxExactSites) + " sites, got " +
                                    std::to_string(params.num_sites));
    }
}

// Operator acting as `a` on site_a (and `b` on site_b, if given), identity
// elsewhere. The leftmost Kronecker factor is the most significant qubit.
Eigen::MatrixXd embed(int num_sites, const Eigen::Matrix2d &a, int site_a,
                      const Eigen::Matrix2d *b = nullptr, int site_b = -1) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int q = num_sites - 1; q >= 0; --q) {
        Eigen::Matrix2d factor = Eigen::Matrix2d::Identity();
        if (q == site_a) {
            factor = a;
        } else if (b != nullptr && q == site_b) {
            factor = *b;
        }
        Eigen::MatrixXd next = Eigen::kroneckerProduct(out, factor);
        out.swap(next);
    }
    return out;
}

Eigen::MatrixXd dense_hamiltonian(const IsingParams &params) {
    Eigen::Matrix2d pauli_z;
    pauli_z << 1, 0, 0, -1;
    Eigen::Matrix2d pauli_x;
    pauli_x << 0, 1, 1, 0;

    const int n = params.num_sites;
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto &[a, b] : params.bonds()) {
        h += params.j[static_cast<std::size_t>(a)] * embed(n, pauli_z, a, &pauli_z, b);
    }
    for (int site = 0; site < n; ++site) {
        const auto s = static_cast<std::size_t>(site);
        h += params.hz[s] * embed(n, pauli_z, site);
        h += params.hx[s] * embed(n, pauli_x, site);
    }
    return h;
}

}  // namespace

std::vector<double> ising_hamiltonian(const IsingParams &params) {
    check_exact_size(params);
    const Eigen::MatrixXd h = dense_hamiltonian(params);
    std::vector<double> out(static_cast<std::size_t>(h.size()));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out.data(), h.rows(), h.cols()) = h;
    return out;
}

double classical_energy(const IsingParams &params, std::uint64_t bits) {
    params.validate();
    auto spin = [&](int site) { return ((bits >> site) & 1U) ? -1.0 : 1.0; };
    double energy = 0.0;
    for (const auto &[a, b] : params.bonds()) {
        energy += params.j[static_cast<std::size_t>(a)] * spin(a) * spin(b);
    }
    for (int site = 0; site < params.num_sites; ++site) {
        energy += params.hz[static_cast<std::size_t>(site)] * spin(site);
    }
    return energy;
}

StateVector exact_evolve(const StateVector &initial, const IsingParams &params, double t) {
    check_exact_size(params);
    if (initial.num_qubits() != params.num_sites) {
        throw std::invalid_argument("initial state and chain differ in size");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(params));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hamiltonian eigendecomposition failed");
    }
    const Eigen::MatrixXd &vectors = solver.eigenvectors();
    const Eigen::VectorXd &energies = solver.eigenvalues();

    const auto amps = initial.amplitudes();
    const Eigen::VectorXcd psi =
        Eigen::Map<const Eigen::VectorXcd>(amps.data(), static_cast<Eigen::Index>(amps.size()));
    Eigen::VectorXcd coeffs = vectors.transpose().cast<Amplitude>() * psi;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs[k] *= std::polar(1.0, -energies[k] * t);
    }
    const Eigen::VectorXcd evolved = vectors.cast<Amplitude>() * coeffs;
    return StateVector::from_amplitudes(std::vector<Amplitude>(evolved.begin(), evolved.end()));
}

}  // namespace qmosaic
