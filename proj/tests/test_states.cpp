// Copyright 2026 The cadsec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cadsec/cadsec.hpp"
#include "support/oracles.hpp"

using namespace cadsec;

namespace {

void expect_lambdas(const BellDiagonalState &s, std::array<double, 4> expected, double tol = 1e-12) {
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s[i], expected[i], tol) << "index " << i;
}

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::IOError;
}

} // namespace

TEST(BellDiagonal, AcceptsEbitAndIdentity) {
    expect_lambdas(make_bell_diagonal({1, 0, 0, 0}), {1, 0, 0, 0});
    expect_lambdas(make_bell_diagonal({0.25, 0.25, 0.25, 0.25}), {0.25, 0.25, 0.25, 0.25});
}

TEST(BellDiagonal, RejectsBadInput) {
    EXPECT_EQ(code_of([] { make_bell_diagonal({0.5, 0.5, 0.1, 0}); }), ErrorCode::NotNormalized);
    EXPECT_EQ(code_of([] { make_bell_diagonal({0.6, 0.5, 0.1, -0.2}); }), ErrorCode::NegativeCoefficient);
}

TEST(BellDiagonal, RenormalizesInsideTolerance) {
    const auto s = make_bell_diagonal({0.7 + 5e-10, 0.1, 0.1, 0.1});
    EXPECT_DOUBLE_EQ(s[0] + s[1] + s[2] + s[3], 1.0);
}

TEST(Canonicalize, OrdersMaxMinThenDescending) {
    const auto cf = canonicalize(make_bell_diagonal({0.1, 0.2, 0.3, 0.4}));
    expect_lambdas(cf.state, {0.4, 0.1, 0.3, 0.2});
    EXPECT_EQ(cf.permutation.image(), (std::array<int, 4>{1, 3, 2, 0}));
}

TEST(Canonicalize, CanonicalStateIsFixed) {
    const auto cf = canonicalize(make_bell_diagonal({0.7, 0.1, 0.1, 0.1}));
    expect_lambdas(cf.state, {0.7, 0.1, 0.1, 0.1});
    EXPECT_TRUE(cf.permutation.is_identity());
}

TEST(Canonicalize, TiesKeepLowestIndexFirst) {
    const auto cf = canonicalize(make_bell_diagonal({0.3, 0.3, 0.2, 0.2}));
    EXPECT_EQ(cf.permutation.image(), (std::array<int, 4>{0, 2, 1, 3}));
    expect_lambdas(cf.state, {0.3, 0.2, 0.3, 0.2});
}

TEST(Canonicalize, IdempotentAndMultisetPreservingOnRandomStates) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto s = oracle::random_bell_state(rng);
        const auto once = canonicalize(s);
        const auto twice = canonicalize(once.state);
        EXPECT_EQ(twice.state, once.state);
        EXPECT_TRUE(twice.permutation.is_identity());
        auto a = s.lambdas(), b = once.state.lambdas();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
        for (int k = 0; k < 4; ++k) EXPECT_EQ(once.state[once.permutation(k)], s[k]);
        const auto &l = once.state.lambdas();
        EXPECT_EQ(l[0], *std::max_element(l.begin(), l.end()));
        EXPECT_EQ(l[1], *std::min_element(l.begin(), l.end()));
        EXPECT_GE(l[2], l[3]);
    }
}

TEST(BellPermutationTest, InverseAndComposition) {
    const BellPermutation p({2, 0, 3, 1});
    EXPECT_TRUE(p.then(p.inverse()).is_identity());
    EXPECT_TRUE(p.inverse().then(p).is_identity());
    EXPECT_THROW(BellPermutation({0, 0, 1, 2}), Error);
    const auto s = make_bell_diagonal({0.1, 0.2, 0.3, 0.4});
    EXPECT_EQ(p.inverse().apply(p.apply(s)), s);
}

TEST(Entanglement, Examples) {
    EXPECT_TRUE(is_entangled(make_bell_diagonal({1, 0, 0, 0})));
    EXPECT_FALSE(is_entangled(make_bell_diagonal({0.25, 0.25, 0.25, 0.25})));
    EXPECT_FALSE(is_entangled(sixstate_attack_state(1.0 / 3.0)));
}

TEST(Entanglement, MatchesPartialTransposeOracle) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        const auto l = oracle::random_simplex4(rng);
        const double min_eig = oracle::partial_transpose_min_eigenvalue(l);
        if (std::abs(min_eig) < 1e-12) continue;
        EXPECT_EQ(is_entangled(make_bell_diagonal(l)), min_eig < 0.0);
    }
}

TEST(Qber, Examples) {
    EXPECT_EQ(qber(make_bell_diagonal({1, 0, 0, 0})), 0.0);
    EXPECT_NEAR(qber(sixstate_attack_state(0.2)), 0.2, 1e-15);
    EXPECT_NEAR(qber(make_bell_diagonal({0.4, 0.1, 0.3, 0.2})), 0.5, 1e-15);
}

TEST(AttackFamilies, Bb84Examples) {
    expect_lambdas(bb84_attack_state(0.2, 0.0), {0.6, 0.2, 0.2, 0.0});
    expect_lambdas(bb84_attack_state(0.0, 0.0), {1, 0, 0, 0});
    expect_lambdas(bb84_attack_state(0.11, 0.11 * 0.11), {0.7921, 0.0979, 0.0979, 0.0121});
    EXPECT_EQ(code_of([] { bb84_attack_state(0.2, 0.3); }), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of([] { bb84_attack_state(0.6, 0.0); }), ErrorCode::OutOfRange);
}

TEST(AttackFamilies, Bb84ErrorRateIsQInBothBases) {
    for (int i = 0; i <= 50; ++i) {
        const double Q = 0.01 * i;
        for (int k = 0; k <= 10; ++k) {
            const double x = Q * (k / 10.0);
            const auto s = bb84_attack_state(Q, x);
            EXPECT_NEAR(qber(s), Q, 1e-14);
            EXPECT_NEAR(s[1] + s[3], Q, 1e-14); // phase basis
        }
    }
}

TEST(AttackFamilies, SixStateExamples) {
    expect_lambdas(sixstate_attack_state(0.0), {1, 0, 0, 0});
    expect_lambdas(sixstate_attack_state(0.2), {0.7, 0.1, 0.1, 0.1});
    expect_lambdas(sixstate_attack_state(2.0 / 3.0), {0, 1.0 / 3, 1.0 / 3, 1.0 / 3});
    EXPECT_EQ(code_of([] { sixstate_attack_state(0.7); }), ErrorCode::OutOfRange);
}

TEST(ProtocolChannel, QubitCasesMatchQubitFamilies) {
    for (double F : {0.5, 0.67, 0.8, 0.95, 1.0}) {
        const auto d1 = protocol_channel_d(QuditProtocol::DPlusOneBases, 2, F);
        const auto six = to_channel(sixstate_attack_state(1.0 - F));
        const auto two = protocol_channel_d(QuditProtocol::TwoBases, 2, F, 0.0);
        const auto bb = to_channel(bb84_attack_state(1.0 - F, 0.0));
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(d1.probabilities()[i], six.probabilities()[i], 1e-12);
            EXPECT_NEAR(two.probabilities()[i], bb.probabilities()[i], 1e-12);
        }
    }
}

TEST(ProtocolChannel, NoiselessAndConstraint) {
    const auto ch = protocol_channel_d(QuditProtocol::DPlusOneBases, 3, 1.0);
    EXPECT_NEAR(ch.p(0, 0), 1.0, 1e-15);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            if (m || n) {
                EXPECT_NEAR(ch.p(m, n), 0.0, 1e-15);
            }
    for (int d : {2, 3, 5, 8}) {
        for (double y : {0.0, 0.02, 0.05}) {
            const double F = 0.8;
            const auto two = protocol_channel_d(QuditProtocol::TwoBases, d, F, y);
            const double v2 = two.p(0, 0), x2 = two.p(0, 1), y2 = two.p(1, 1);
            EXPECT_NEAR(v2 + 2.0 * (d - 1) * x2 + (d - 1.0) * (d - 1.0) * y2, 1.0, 1e-12);
            EXPECT_NEAR(fidelity_disturbances(two).F, F, 1e-12);
        }
    }
}

TEST(ProtocolChannel, InfeasibleFidelity) {
    EXPECT_EQ(code_of([] { protocol_channel_d(QuditProtocol::DPlusOneBases, 3, 0.2); }), ErrorCode::InfeasibleFidelity);
    EXPECT_EQ(code_of([] { protocol_channel_d(QuditProtocol::TwoBases, 3, 0.8, 0.3); }), ErrorCode::InfeasibleFidelity);
    EXPECT_EQ(code_of([] { protocol_channel_d(QuditProtocol::TwoBases, 3, 0.3, 0.0); }), ErrorCode::InfeasibleFidelity);
}

TEST(ProtocolChannel, CloningChannelIsBb84AtQSquared) {
    for (double Q : {0.0, 0.05, 0.11, 0.2}) {
        const auto a = cloning_channel_d(2, 1.0 - Q);
        const auto b = to_channel(bb84_attack_state(Q, Q * Q));
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a.probabilities()[i], b.probabilities()[i], 1e-14);
    }
}

TEST(FidelityDisturbances, Examples) {
    const auto id = fidelity_disturbances(protocol_channel_d(QuditProtocol::DPlusOneBases, 4, 1.0));
    EXPECT_NEAR(id.F, 1.0, 1e-15);
    for (double dj : id.D) EXPECT_NEAR(dj, 0.0, 1e-15);

    const auto fd = fidelity_disturbances(protocol_channel_d(QuditProtocol::DPlusOneBases, 3, 0.7));
    EXPECT_NEAR(fd.F, 0.7, 1e-12);
    EXPECT_NEAR(fd.D[0], 0.15, 1e-12);
    EXPECT_NEAR(fd.D[1], 0.15, 1e-12);

    const auto uni = fidelity_disturbances(make_channel(3, std::vector<double>(9, 1.0 / 9.0)));
    EXPECT_NEAR(uni.F, 1.0 / 3.0, 1e-15);
    for (double dj : uni.D) EXPECT_NEAR(dj, 1.0 / 3.0, 1e-15);
}

TEST(FidelityDisturbances, SumToOneOnRandomChannels) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        const int d = 2 + static_cast<int>(rng() % 7);
        const auto fd = fidelity_disturbances(oracle::random_channel(rng, d));
        double s = fd.F;
        for (double dj : fd.D) s += dj;
        EXPECT_NEAR(s, 1.0, 1e-9);
    }
}

TEST(Channel, RejectsBadMatrices) {
    EXPECT_EQ(code_of([] { make_channel(2, {0.5, 0.5, 0.1, 0.0}); }), ErrorCode::NotNormalized);
    EXPECT_EQ(code_of([] { make_channel(2, {0.5, 0.5, 0.0}); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([] { make_channel({{0.5, 0.5}, {0.0}}); }), ErrorCode::LengthMismatch);
}

TEST(CloningReportTest, Examples) {
    const auto ebit = cloning_report(make_bell_diagonal({1, 0, 0, 0}));
    EXPECT_NEAR(ebit.eta_xz_B, 1.0, 1e-15);
    EXPECT_NEAR(ebit.eta_xz_E, 0.0, 1e-15);
    EXPECT_NEAR(cloning_report(bb84_attack_state(0.2, 0.0)).eta_xz_B, 0.6, 1e-15);
    EXPECT_EQ(code_of([] { cloning_report(make_bell_diagonal({0.5, 0.2, 0.3, 0.0})); }), ErrorCode::AsymmetricState);
}

TEST(CloningReportTest, FactorsBoundedForPhaseCovariantAttacks) {
    for (int i = 0; i <= 50; ++i) {
        const double Q = 0.01 * i;
        for (double x : {0.0, Q * Q, Q / 2.0}) {
            const auto r = cloning_report(bb84_attack_state(Q, x));
            for (double eta : {r.eta_xz_B, r.eta_xz_E, r.eta_y_B, r.eta_y_E}) {
                EXPECT_LE(std::abs(eta), 1.0 + 1e-12);
            }
        }
    }
}

TEST(Channel, QubitRoundTrip) {
    const auto s = make_bell_diagonal({0.6, 0.2, 0.15, 0.05});
    EXPECT_EQ(to_bell_diagonal(to_channel(s)), s);
}
