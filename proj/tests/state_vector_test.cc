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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "dense_oracle.h"
#include "qmosaic/measure.h"

using namespace qmosaic;
using oracle::C;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_amplitudes(const StateVector &s, const std::vector<C> &expected, double tol = 1e-14) {
    ASSERT_EQ(s.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_NEAR(s[i].real(), expected[i].real(), tol) << "index " << i;
        EXPECT_NEAR(s[i].imag(), expected[i].imag(), tol) << "index " << i;
    }
}

StateVector random_state(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<C> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = C(g(rng), g(rng));
        norm += std::norm(a);
    }
    for (auto &a : amps) a /= std::sqrt(norm);
    return StateVector::from_amplitudes(amps);
}

}  // namespace

TEST(StateVector, starts_in_all_zeros) {
    StateVector s(3);
    EXPECT_EQ(s.size(), 8u);
    expect_amplitudes(s, {1, 0, 0, 0, 0, 0, 0, 0});
}

TEST(StateVector, bitstring_is_little_endian) {
    // |0100> sets qubit 2, i.e. index 4.
    EXPECT_EQ(parse_bitstring("0100"), 4u);
    EXPECT_EQ(to_bitstring(4, 4), "0100");
    const auto s = StateVector::from_bitstring("0100");
    EXPECT_EQ(s.num_qubits(), 4);
    EXPECT_EQ(s[4], C(1, 0));
    EXPECT_THROW(parse_bitstring("01a0"), std::invalid_argument);
}

TEST(StateVector, rejects_bad_shapes) {
    EXPECT_THROW(StateVector(0), std::invalid_argument);
    EXPECT_THROW(StateVector::from_amplitudes({1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(StateVector::basis(2, 4), std::out_of_range);
}

TEST(Gates, rx_examples) {
    StateVector s(1);
    s.apply_rx(0, 0.0);
    expect_amplitudes(s, {1, 0});

    StateVector flip(1);
    flip.apply_rx(0, kPi);
    expect_amplitudes(flip, {0, C(0, -1)}, 1e-15);
}

TEST(Gates, rx_on_high_qubit_matches_dense_product) {
    // Oracle: kron(Rx(pi/2), I) acting on |00>.
    const auto expected =
        oracle::apply_to(oracle::on_qubit(2, 1, oracle::rx(kPi / 2)), std::vector<C>{1, 0, 0, 0});
    StateVector s(2);
    s.apply_rx(1, kPi / 2);
    expect_amplitudes(s, expected);
    // (|00> - i|10>)/sqrt2 with |10> = index 2.
    expect_amplitudes(s, {1 / std::sqrt(2.0), 0, C(0, -1 / std::sqrt(2.0)), 0});
}

TEST(Gates, ry_examples) {
    StateVector id(1);
    id.apply_ry(0, 0.0);
    expect_amplitudes(id, {1, 0});

    StateVector third(1);
    third.apply_ry(0, kPi / 3);
    expect_amplitudes(third, {std::cos(kPi / 6), std::sin(kPi / 6)});
    EXPECT_NEAR(expect_obs(third, 0), 0.25, 1e-15);

    StateVector flip(1);
    flip.apply_ry(0, kPi);
    expect_amplitudes(flip, {0, 1}, 1e-15);
}

TEST(Gates, rz_examples) {
    const double theta = 0.73;
    StateVector zero(1);
    zero.apply_rz(0, theta);
    expect_amplitudes(zero, {std::polar(1.0, -theta / 2), 0});
    EXPECT_NEAR(zero.probabilities()[0], 1.0, 1e-15);

    auto plus = StateVector::from_amplitudes({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    plus.apply_rz(0, kPi);
    expect_amplitudes(plus, {std::polar(1 / std::sqrt(2.0), -kPi / 2), std::polar(1 / std::sqrt(2.0), kPi / 2)});
}

TEST(Gates, rzz_examples) {
    const double theta = 1.1;
    auto s00 = StateVector::from_bitstring("00");
    s00.apply_rzz(0, 1, theta);
    expect_amplitudes(s00, {std::polar(1.0, -theta / 2), 0, 0, 0});

    auto s01 = StateVector::from_bitstring("01");
    s01.apply_rzz(0, 1, theta);
    expect_amplitudes(s01, {0, std::polar(1.0, theta / 2), 0, 0});
}

TEST(Gates, errors) {
    StateVector s(2);
    EXPECT_THROW(s.apply_rx(2, 0.1), std::out_of_range);
    EXPECT_THROW(s.apply_ry(-1, 0.1), std::out_of_range);
    EXPECT_THROW(s.apply_rz(5, 0.1), std::out_of_range);
    EXPECT_THROW(s.apply_rzz(0, 0, 0.1), std::invalid_argument);
    EXPECT_THROW(s.apply_rzz(0, 2, 0.1), std::out_of_range);
}

TEST(Gates, every_kernel_matches_dense_oracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        const StateVector start = random_state(n, rng);
        for (int q = 0; q < n; ++q) {
            const double t = angle(rng);
            const auto psi = oracle::amplitudes(start);

            StateVector sx = start;
            sx.apply_rx(q, t);
            expect_amplitudes(sx, oracle::apply_to(oracle::on_qubit(n, q, oracle::rx(t)), psi), 1e-13);

            StateVector sy = start;
            sy.apply_ry(q, t);
            expect_amplitudes(sy, oracle::apply_to(oracle::on_qubit(n, q, oracle::ry(t)), psi), 1e-13);

            StateVector sz = start;
            sz.apply_rz(q, t);
            expect_amplitudes(sz, oracle::apply_to(oracle::on_qubit(n, q, oracle::rz(t)), psi), 1e-13);

            for (int r = 0; r < n; ++r) {
                if (r == q) continue;
                // Rzz = exp(-i t/2 Z_q Z_r), built from the dense product.
                oracle::Dense zz = oracle::mul(oracle::on_qubit(n, q, oracle::pauli_z()),
                                               oracle::on_qubit(n, r, oracle::pauli_z()));
                for (auto &x : zz.m) x *= C(0, -t / 2);
                StateVector szz = start;
                szz.apply_rzz(q, r, t);
                expect_amplitudes(szz, oracle::apply_to(oracle::expm(zz), psi), 1e-12);
            }
        }
    }
}

TEST(GateProperties, norm_preserved_over_ten_thousand_random_gates) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    const int n = 6;
    StateVector s = random_state(n, rng);
    for (int g = 0; g < 10000; ++g) {
        const int q = static_cast<int>(rng() % n);
        switch (rng() % 4) {
            case 0: s.apply_rx(q, angle(rng)); break;
            case 1: s.apply_ry(q, angle(rng)); break;
            case 2: s.apply_rz(q, angle(rng)); break;
            default: s.apply_rzz(q, (q + 1 + static_cast<int>(rng() % (n - 1))) % n, angle(rng)); break;
        }
    }
    EXPECT_LT(std::abs(s.norm_squared() - 1.0), 1e-10);
}

TEST(GateProperties, diagonal_gates_leave_every_probability_unchanged) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector start = random_state(4, rng);
        const auto before = start.probabilities();
        StateVector s = start;
        s.apply_rz(trial % 4, 0.1 * trial);
        s.apply_rzz(trial % 4, (trial + 1) % 4, -0.3 * trial);
        const auto after = s.probabilities();
        for (std::size_t i = 0; i < before.size(); ++i) {
            EXPECT_NEAR(after[i], before[i], 1e-14);
        }
        for (int site = 0; site < 4; ++site) {
            EXPECT_NEAR(expect_obs(s, site), expect_obs(start, site), 1e-14);
        }
    }
}

TEST(StateVector, overlap_helpers) {
    const auto a = StateVector::from_bitstring("01");
    const auto b = StateVector::from_bitstring("10");
    EXPECT_DOUBLE_EQ(fidelity(a, a), 1.0);
    EXPECT_DOUBLE_EQ(fidelity(a, b), 0.0);
    EXPECT_NEAR(distance(a, b), std::sqrt(2.0), 1e-15);
}
