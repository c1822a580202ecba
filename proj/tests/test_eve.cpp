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
#include "support/oracle_values.hpp"
#include "support/oracles.hpp"

using namespace cadsec;

namespace {

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> sorted_nonzero_padded(const Eigen::VectorXd &evals, std::size_t size) {
    std::vector<double> v(evals.data(), evals.data() + evals.size());
    std::sort(v.begin(), v.end(), std::greater<>());
    v.resize(size, 0.0);
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST(QubitEnsemble, Examples) {
    const auto ebit = qubit_ensemble(make_bell_diagonal({1, 0, 0, 0}));
    EXPECT_EQ(ebit.eps, 0.0);
    EXPECT_EQ(ebit.lambda_eq, 1.0);

    const auto six = qubit_ensemble(sixstate_attack_state(0.2));
    EXPECT_NEAR(six.eps, 0.2, 1e-15);
    EXPECT_NEAR(six.lambda_eq, 0.75, 1e-15);
    EXPECT_NEAR(six.lambda_dif, 0.0, 1e-15);

    const auto bb = qubit_ensemble(bb84_attack_state(0.2, 0.0));
    EXPECT_NEAR(bb.eps, 0.2, 1e-15);
    EXPECT_NEAR(bb.lambda_eq, 0.5, 1e-15);
    EXPECT_EQ(bb.lambda_dif, 1.0);
}

TEST(QuditEnsemble, Examples) {
    const auto six = qudit_ensemble(to_channel(sixstate_attack_state(0.2)));
    EXPECT_NEAR(six.overlap(0, 1).real(), 0.75, 1e-15);

    const auto id = qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, 5, 1.0));
    for (int m = 0; m < 5; ++m) EXPECT_NEAR(std::abs(id.overlap(0, m) - 1.0), 0.0, 1e-15);

    for (double F : {0.6, 0.75, 0.9}) {
        const int d = 3;
        const auto ens = qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, d, F));
        const double v2 = ((d + 1) * F - 1) / d, x2 = (1 - F) / (d * (d - 1.0));
        for (int m = 1; m < d; ++m) {
            EXPECT_NEAR(ens.overlap(0, m).real(), (v2 - x2) / F, 1e-14);
            EXPECT_NEAR(ens.overlap(0, m).imag(), 0.0, 1e-14);
        }
    }
}

TEST(QuditEnsemble, OverlapInvariantsOnRandomChannels) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        const int d = 2 + static_cast<int>(rng() % 6);
        const auto ens = qudit_ensemble(oracle::random_channel(rng, d));
        for (int j = 0; j < d; ++j) {
            EXPECT_NEAR(std::abs(ens.overlap(j, 0) - 1.0), 0.0, 1e-15);
            for (int m = 1; m < d; ++m) {
                EXPECT_LE(std::abs(ens.overlap(j, m)), 1.0 + 1e-12);
                EXPECT_NEAR(std::abs(ens.overlap(j, -m) - std::conj(ens.overlap(j, m))), 0.0, 1e-14);
            }
        }
    }
}

TEST(QuditEnsemble, QubitCaseMatchesQubitEnsemble) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 300; ++i) {
        const auto s = oracle::random_bell_state(rng);
        const auto q = qubit_ensemble(s);
        const auto e = qudit_ensemble(to_channel(s));
        EXPECT_NEAR(std::abs(e.overlap(0, 1)), q.lambda_eq, 1e-12);
        EXPECT_NEAR(std::abs(e.overlap(1, 1)), q.lambda_dif, 1e-12);
    }
}

TEST(QuditEnsemble, EmptyClassIsFlagged) {
    const auto ens = qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, 3, 1.0));
    EXPECT_FALSE(ens.has_class(1));
    try {
        (void)ens.overlap(1, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyClass);
    }
}

TEST(Helstrom, Examples) {
    EXPECT_EQ(helstrom_error(0.0, 1), 0.0);
    for (int N : {1, 5, 100}) EXPECT_DOUBLE_EQ(helstrom_error(1.0, N), 0.5);
    EXPECT_NEAR(helstrom_error(std::sqrt(0.5), 2), oracle::kHelstromSqrtHalfN2, 1e-15);
}

TEST(Helstrom, NonincreasingInN) {
    for (int i = 0; i <= 100; ++i) {
        const double c = 0.01 * i;
        double prev = 1.0;
        for (int N = 1; N <= 128; ++N) {
            const double e = helstrom_error(c, N);
            EXPECT_LE(e, prev + 1e-16);
            EXPECT_GE(e, 0.0);
            EXPECT_LE(e, 0.5);
            prev = e;
        }
    }
}

TEST(GuEigenvalues, QubitClosedForm) {
    for (double c : {-0.9, -0.3, 0.0, 0.4, 0.75, 1.0}) {
        for (int N : {1, 2, 3, 7}) {
            const auto spectrum = gu_eigenvalues([c](int m) { return Complex(m == 0 ? 1.0 : c); }, 2, N);
            const double cN = std::pow(c, N);
            const auto got = sorted(spectrum.eigenvalues);
            const auto want = sorted({(1 + cN) / 2, (1 - cN) / 2});
            for (int k = 0; k < 2; ++k) EXPECT_NEAR(got[k], want[k], 1e-14);
        }
    }
}

TEST(GuEigenvalues, IdenticalStates) {
    for (int d : {2, 3, 7}) {
        const auto spectrum = gu_eigenvalues([](int) { return Complex(1.0); }, d, 4);
        EXPECT_NEAR(spectrum.eigenvalues[0], 1.0, 1e-15);
        for (int k = 1; k < d; ++k) EXPECT_NEAR(spectrum.eigenvalues[k], 0.0, 1e-15);
        EXPECT_NEAR(spectrum.entropy_bits, 0.0, 1e-15);
        EXPECT_NEAR(spectrum.deficit_bits, std::log2(d), 1e-12);
    }
}

TEST(GuEigenvalues, MatchesDenseDiagonalizationSingleCopy) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + trial % 5;
        const auto ch = oracle::random_channel(rng, d);
        const auto ens = qudit_ensemble(ch);
        for (int j = 0; j < d; ++j) {
            const auto spectrum = class_spectrum(ens, j, 1);
            const auto dense = sorted_nonzero_padded(oracle::dense_class_spectrum(ch, j), static_cast<std::size_t>(d));
            const auto mine = sorted(spectrum.eigenvalues);
            for (int k = 0; k < d; ++k) EXPECT_NEAR(mine[k], dense[k], 1e-12) << "d=" << d << " j=" << j;
            EXPECT_NEAR(spectrum.entropy_bits, oracle::entropy_bits(oracle::dense_class_spectrum(ch, j)), 1e-10);
        }
    }
}

TEST(GuEigenvalues, MatchesDenseDiagonalizationTwoCopies) {
    std::mt19937_64 rng(24);
    for (int d : {2, 3, 4}) {
        const auto ch = oracle::random_channel(rng, d);
        const auto ens = qudit_ensemble(ch);
        std::vector<oracle::CVec> comps;
        for (int k = 0; k < d; ++k) {
            oracle::CVec v = oracle::eve_vector(ch, k, k);
            v /= v.norm();
            comps.push_back(oracle::kron_power(v, 2) / std::sqrt(static_cast<double>(d)));
        }
        const auto dense = sorted_nonzero_padded(oracle::mixture_spectrum(comps), static_cast<std::size_t>(d));
        const auto mine = sorted(class_spectrum(ens, 0, 2).eigenvalues);
        for (int k = 0; k < d; ++k) EXPECT_NEAR(mine[k], dense[k], 1e-12);
    }
}

TEST(GuEigenvalues, NormalizedAndDeficitConsistent) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 9;
        const auto ens = qudit_ensemble(oracle::random_channel(rng, d));
        const int N = 1 + static_cast<int>(rng() % 40);
        for (int j = 0; j < d; ++j) {
            const auto spectrum = class_spectrum(ens, j, N);
            double s = 0.0;
            for (double a : spectrum.eigenvalues) {
                EXPECT_GE(a, 0.0);
                s += a;
            }
            EXPECT_NEAR(s, 1.0, 1e-9);
            EXPECT_NEAR(spectrum.entropy_bits + spectrum.deficit_bits, std::log2(d), 1e-10);
            EXPECT_LE(spectrum.entropy_bits, std::log2(d) + 1e-12);
        }
    }
}

TEST(GuEigenvalues, RejectsInvalidGramGenerator) {
    try {
        gu_eigenvalues([](int m) { return Complex(m == 0 ? 1.0 : -1.0); }, 3, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositiveSemidefinite);
    }
}

TEST(Srm, QubitEqualsHelstrom) {
    for (int i = 0; i <= 100; ++i) {
        const double c = 0.01 * i;
        for (int N = 1; N <= 64; ++N) {
            const double p = srm_success([c](int m) { return Complex(m == 0 ? 1.0 : c); }, 2, N);
            EXPECT_NEAR(p, 1.0 - helstrom_error(c, N), 1e-12);
        }
    }
}

TEST(Srm, OrthogonalStatesAreDiscriminatedPerfectly) {
    for (int d : {2, 3, 5, 11}) {
        EXPECT_NEAR(srm_success([](int m) { return Complex(m == 0 ? 1.0 : 0.0); }, d, 1), 1.0, 1e-12);
        // Single copy of Fourier states with uniform amplitudes 1/sqrt(d).
        const auto ens = qudit_ensemble(make_channel(d, [&] {
            std::vector<double> p(static_cast<std::size_t>(d * d), 0.0);
            for (int n = 0; n < d; ++n) p[static_cast<std::size_t>(n)] = 1.0 / d;
            return p;
        }()));
        EXPECT_NEAR(srm_success_error_class(ens, 0, 1), 1.0, 1e-12);
    }
}

TEST(Srm, ErrorClassExamples) {
    std::mt19937_64 rng(26);
    const auto ens = qudit_ensemble(oracle::random_channel(rng, 4));
    for (int N : {1, 3}) EXPECT_DOUBLE_EQ(srm_success_error_class(ens, 0, N), srm_success(ens.overlaps(0), 4, N));

    const auto bb = qudit_ensemble(to_channel(bb84_attack_state(0.2, 0.0)));
    EXPECT_NEAR(srm_success_error_class(bb, 1, 1), 0.5, 1e-12);

    const auto sym = qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, 3, 0.7));
    for (int N : {1, 2, 5}) EXPECT_NEAR(srm_success_error_class(sym, 1, N), srm_success_error_class(sym, 2, N), 1e-12);

    const auto id = qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, 3, 1.0));
    EXPECT_THROW(srm_success_error_class(id, 1, 1), Error);
}
