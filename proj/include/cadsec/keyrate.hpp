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

/**
 * @file
 * Achievable key rates after CAD followed by one-way reconciliation:
 * rate = I(A:B) - chi(A:E), in bits.
 *
 * Rates are assembled from deficits (distance of an entropy from its
 * maximum), so they stay accurate when I(A:B) and chi(A:E) are both within
 * rounding of their maximum.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "cad.hpp"
#include "entropy.hpp"
#include "error.hpp"
#include "eve.hpp"

namespace cadsec {

enum class RateMethod { Exact, Asymptotic };

constexpr std::string_view to_string(RateMethod m) { return m == RateMethod::Exact ? "exact" : "asymptotic"; }

struct KeyRateReport {
    int N = 1;
    double i_ab = 0.0; ///< I(A:B) in bits
    double i_ae = 0.0; ///< chi(A:E) in bits
    double rate = 0.0; ///< i_ab - i_ae, evaluated without cancellation
    RateMethod method = RateMethod::Exact;
    int d = 2;
    std::optional<double> q; ///< pre-processing flip probability, when used
};

// ---------------------------------------------------------------------------
// Qubit rates
// ---------------------------------------------------------------------------

/// 1 - h(eps_N) - (1 - eps_N) h((1 - L_eq^N)/2) - eps_N h((1 - L_dif^N)/2).
inline KeyRateReport rate_post_cad_qubit(const EveEnsembleQubit &ens, int N) {
    const double eN = cad_error(ens.eps, N);
    const double g_eq = binary_entropy_deficit(std::pow(ens.lambda_eq, N));
    const double g_dif = binary_entropy_deficit(std::pow(ens.lambda_dif, N));
    const double h_err = binary_entropy(eN);
    const double eve_deficit = (1.0 - eN) * g_eq + eN * g_dif;
    KeyRateReport r;
    r.N = N;
    r.i_ab = 1.0 - h_err;
    r.i_ae = 1.0 - eve_deficit;
    r.rate = eve_deficit - h_err;
    return r;
}

/// Large-N expansion: i_ab = 1 + eps_N log2 eps_N, i_ae = 1 - L_eq^{2N}/ln 4.
/// The L_dif guard is skipped when eps = 0 because that branch carries no
/// weight.
inline KeyRateReport rate_asymptotic_qubit(const EveEnsembleQubit &ens, int N) {
    const double eN = cad_error(ens.eps, N);
    const double leqN = std::pow(ens.lambda_eq, N);
    const double ldifN = std::pow(ens.lambda_dif, N);
    if (!(eN < 0.1 && leqN < 0.1 && (ens.eps == 0.0 || ldifN < 0.1))) {
        throw Error(ErrorCode::OutsideAsymptoticRegime,
                    "large-N expansion needs eps_N, L_eq^N and L_dif^N below 0.1");
    }
    const double bob_deficit = eN > 0.0 ? -eN * std::log2(eN) : 0.0;
    const double eve_deficit = leqN * leqN / (2.0 * std::numbers::ln2);
    KeyRateReport r;
    r.N = N;
    r.i_ab = 1.0 - bob_deficit;
    r.i_ae = 1.0 - eve_deficit;
    r.rate = eve_deficit - bob_deficit;
    r.method = RateMethod::Asymptotic;
    return r;
}

/// Smallest N <= N_max with a strictly positive exact rate.
inline std::optional<int> minimal_block_size(const EveEnsembleQubit &ens, int N_max) {
    if (N_max < 1) throw Error(ErrorCode::OutOfRange, "N_max must be >= 1");
    for (int N = 1; N <= N_max; ++N)
        if (rate_post_cad_qubit(ens, N).rate > 0.0) return N;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Qudit rates
// ---------------------------------------------------------------------------

/// Exact post-CAD rate for a generalized Pauli channel.
///
/// Given Alice's symbol, Eve's classes are orthogonal and each class is a
/// geometrically uniform family of pure states, so
/// chi = sum_j w_j S_j with w = (F_N, D'_1, ...) and S_j the class spectrum
/// entropy. With I(A:B) = log2 d - H(w) the rate is
/// sum_j w_j (log2 d - S_j) - H(w).
inline KeyRateReport holevo_post_cad_d(const EveEnsembleD &ens, int N) {
    const int d = ens.dim();
    const auto stats = cad_statistics_d(ens.fidelity(), ens.disturbances(), N);
    std::vector<double> w(static_cast<std::size_t>(d));
    w[0] = stats.fidelity_after;
    for (int j = 1; j < d; ++j) w[static_cast<std::size_t>(j)] = stats.disturbances_after[static_cast<std::size_t>(j - 1)];

    const double log_d = std::log2(static_cast<double>(d));
    const double h_w = shannon_entropy(w);
    double eve_deficit = 0.0;
    for (int j = 0; j < d; ++j) {
        const double wj = w[static_cast<std::size_t>(j)];
        if (wj <= 0.0 || !ens.has_class(j)) continue;
        eve_deficit += wj * class_spectrum(ens, j, N).deficit_bits;
    }
    KeyRateReport r;
    r.N = N;
    r.d = d;
    r.i_ab = log_d - h_w;
    r.i_ae = log_d - eve_deficit;
    r.rate = eve_deficit - h_w;
    return r;
}

inline std::optional<int> minimal_block_size_d(const EveEnsembleD &ens, int N_max) {
    if (N_max < 1) throw Error(ErrorCode::OutOfRange, "N_max must be >= 1");
    for (int N = 1; N <= N_max; ++N)
        if (holevo_post_cad_d(ens, N).rate > 0.0) return N;
    return std::nullopt;
}

/// Leading large-N term of log2 d - chi for class 0:
/// (1/(2 ln 2)) sum_{m != 0} |o_0(m)|^{2N}.
inline double holevo_large_n_deficit(const EveEnsembleD &ens, int N) {
    double acc = 0.0;
    for (int m = 1; m < ens.dim(); ++m) acc += std::pow(std::abs(ens.overlap(0, m)), 2.0 * N);
    return acc / (2.0 * std::numbers::ln2);
}

// ---------------------------------------------------------------------------
// One-party pre-processing
// ---------------------------------------------------------------------------

/// Alice flips each bit with probability q before CAD.
struct PreprocParams {
    double q;
    double u;     ///< weight of the no-flip component among agreeing positions
    double v;     ///< 1 - u
    double omega; ///< Alice-Bob error after flipping
};

inline PreprocParams preproc_params(const EveEnsembleQubit &ens, double q) {
    if (!(q >= 0.0 && q <= 0.5)) throw Error(ErrorCode::OutOfRange, "flip probability q must lie in [0, 1/2]");
    const double eps = ens.eps;
    const double omega = (1.0 - q) * eps + q * (1.0 - eps);
    const double agree = 1.0 - omega;
    const double u = agree > 0.0 ? (1.0 - q) * (1.0 - eps) / agree : 1.0;
    return {q, u, 1.0 - u, omega};
}

namespace detail {

/// r log x with 0 log 0 = 0.
inline double weighted_log(int r, double x) { return r == 0 ? 0.0 : r * std::log(x); }

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace detail

/// Spectrum of sigma_E = (rho_00^{(x)N} + rho_11^{(x)N})/2 with
/// rho_aa = u [e_aa] + v [e_{1-a,a}]: levels u^r v^{N-r} (1 +- c_r)/2 with
/// c_r = L_eq^r L_dif^{N-r}, each of multiplicity binomial(N, r).
inline SpectrumReport preproc_spectrum(const PreprocParams &pp, const EveEnsembleQubit &ens, int N) {
    if (N < 1) throw Error(ErrorCode::OutOfRange, "block size must be >= 1");
    SpectrumReport out;
    out.eigenvalues.reserve(2 * static_cast<std::size_t>(N + 1));
    out.multiplicities.reserve(2 * static_cast<std::size_t>(N + 1));
    for (int r = 0; r <= N; ++r) {
        const double weight = std::exp(detail::weighted_log(r, pp.u) + detail::weighted_log(N - r, pp.v));
        const double c = std::exp(detail::weighted_log(r, ens.lambda_eq) + detail::weighted_log(N - r, ens.lambda_dif));
        const double mult = std::round(std::exp(detail::log_binomial(N, r)));
        for (double sign : {1.0, -1.0}) {
            const double lam = weight * (1.0 + sign * c) / 2.0;
            out.eigenvalues.push_back(lam);
            out.multiplicities.push_back(mult);
            // no small-value cutoff: multiplicities can be ~2^N
            if (lam > 0.0) out.entropy_bits -= mult * lam * std::log2(lam);
        }
    }
    return out;
}

/// Exact rate with one-party pre-processing.
///
/// Eve's state splits into orthogonal sectors labelled by which positions
/// of the block carry an "equal" (e_00/e_11) or "different" (e_01/e_10)
/// state. In a sector with r equal positions and Alice's final bit s, Eve
/// holds a two-component mixture of pure states with overlap c_r: the
/// agreeing branch (Alice did not flip, or the flip cancelled Bob's error)
/// and the disagreeing one. The sector distribution does not depend on s,
/// so chi is the sector average of two-state Holevo quantities.
///
/// For large N this tends to S(sigma_E) - N h(u) from the agreeing branch
/// alone; the exact form also accounts for the disagreeing branch, which is
/// what makes q = 0 coincide with rate_post_cad_qubit.
inline KeyRateReport rate_preprocessed(const EveEnsembleQubit &ens, double q, int N) {
    const PreprocParams pp = preproc_params(ens, q);
    const double omega_N = cad_error(pp.omega, N);
    const double eps = ens.eps;
    const double omega = pp.omega;
    // Per-position sector weights in the disagreeing branch.
    const double v_dis = omega > 0.0 ? q * (1.0 - eps) / omega : 0.0; // equal sector
    const double u_dis = omega > 0.0 ? 1.0 - v_dis : 1.0;             // different sector

    double eve_deficit = 0.0;
    for (int r = 0; r <= N; ++r) {
        const double lb = detail::log_binomial(N, r);
        const double la = omega_N < 1.0
                              ? std::log1p(-omega_N) + detail::weighted_log(r, pp.u) + detail::weighted_log(N - r, pp.v)
                              : -INFINITY;
        const double ld = omega_N > 0.0
                              ? std::log(omega_N) + detail::weighted_log(r, v_dis) + detail::weighted_log(N - r, u_dis)
                              : -INFINITY;
        if (la == -INFINITY && ld == -INFINITY) continue;
        const double lmax = std::max(la, ld);
        const double ea = std::exp(la - lmax);
        const double eb = std::exp(ld - lmax);
        const double weight = std::exp(lb + lmax) * (ea + eb);
        if (weight == 0.0) continue;
        const double p = ea / (ea + eb);
        const double c = std::exp(detail::weighted_log(r, ens.lambda_eq) + detail::weighted_log(N - r, ens.lambda_dif));
        // Smaller eigenvalue of p[psi] + (1-p)[phi] with |<psi|phi>| = c.
        const double k = 4.0 * p * (1.0 - p) * (1.0 - c * c);
        const double small = k / (2.0 * (1.0 + std::sqrt(std::max(0.0, 1.0 - k))));
        eve_deficit += weight * (binary_entropy_deficit(c) + binary_entropy(std::min(0.5, small)));
    }
    const double h_err = binary_entropy(omega_N);
    KeyRateReport r;
    r.N = N;
    r.q = q;
    r.i_ab = 1.0 - h_err;
    r.i_ae = 1.0 - eve_deficit;
    r.rate = eve_deficit - h_err;
    return r;
}

/// Asymptotic condition u L_eq^2 + v L_dif^2 > omega / (1 - omega).
inline double preproc_margin(const EveEnsembleQubit &ens, double q) {
    const PreprocParams pp = preproc_params(ens, q);
    if (pp.omega >= 1.0) return -INFINITY;
    return pp.u * ens.lambda_eq * ens.lambda_eq + pp.v * ens.lambda_dif * ens.lambda_dif - pp.omega / (1.0 - pp.omega);
}

inline bool preproc_condition(const EveEnsembleQubit &ens, double q) { return preproc_margin(ens, q) > 0.0; }

// ---------------------------------------------------------------------------
// Coherent Bob
// ---------------------------------------------------------------------------

inline constexpr int kCoherentBobMaxN = 8;

namespace detail {

/// Entropy in bits of a small Hermitian PSD matrix.
inline double dense_entropy(const Eigen::MatrixXd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) s += entropy_term(std::max(0.0, solver.eigenvalues()(i)));
    return s;
}

inline Eigen::VectorXd kron_power(const Eigen::Vector4d &v, int N) {
    Eigen::VectorXd out = Eigen::VectorXd::Ones(1);
    for (int i = 0; i < N; ++i) {
        Eigen::VectorXd next(out.size() * 4);
        for (Eigen::Index a = 0; a < out.size(); ++a) next.segment<4>(4 * a) = out(a) * v;
        out = std::move(next);
    }
    return out;
}

} // namespace detail

/// Rate when Bob keeps his post-CAD bit coherently instead of measuring.
///
/// Builds the unnormalized vectors |b> (x) |e~_{a,b}>^{(x)N} of the accepted
/// block for a representative Bell-diagonal state of the ensemble
/// (dimension 4^N), and evaluates I(A:B) and chi(A:E) as Holevo quantities
/// from the resulting Gram matrices.
inline KeyRateReport coherent_bob_rate(const EveEnsembleQubit &ens, int N) {
    if (N < 1) throw Error(ErrorCode::OutOfRange, "block size must be >= 1");
    if (N > kCoherentBobMaxN) {
        throw Error(ErrorCode::BudgetExceeded, "coherent Bob construction is limited to N <= " + std::to_string(kCoherentBobMaxN));
    }
    const double l1 = (1.0 - ens.eps) * (1.0 + ens.lambda_eq) / 2.0;
    const double l2 = (1.0 - ens.eps) * (1.0 - ens.lambda_eq) / 2.0;
    const double l3 = ens.eps * (1.0 + ens.lambda_dif) / 2.0;
    const double l4 = ens.eps * (1.0 - ens.lambda_dif) / 2.0;
    const double s = 1.0 / std::sqrt(2.0);
    // e~_{a,b}, indexed [a][b], in the Bell-label basis of Eve's purification.
    const Eigen::Vector4d single[2][2] = {
        {Eigen::Vector4d(std::sqrt(l1), std::sqrt(l2), 0, 0) * s, Eigen::Vector4d(0, 0, std::sqrt(l3), std::sqrt(l4)) * s},
        {Eigen::Vector4d(0, 0, std::sqrt(l3), -std::sqrt(l4)) * s, Eigen::Vector4d(std::sqrt(l1), -std::sqrt(l2), 0, 0) * s},
    };
    Eigen::VectorXd block[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) block[a][b] = detail::kron_power(single[a][b], N);

    // Gram matrix of the four branch vectors, index 2a + b.
    Eigen::Matrix4d gram;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) gram(i, k) = block[i / 2][i % 2].dot(block[k / 2][k % 2]);
    const double Z = gram.trace();
    gram /= Z;

    double p[2];
    for (int a = 0; a < 2; ++a) p[a] = gram(2 * a, 2 * a) + gram(2 * a + 1, 2 * a + 1);

    // Bob: rho_{B|a}[b][b'] = <e_{a,b'}|e_{a,b}> / p_a.
    Eigen::MatrixXd rho_b = Eigen::MatrixXd::Zero(2, 2);
    double cond_b = 0.0;
    // Eve: rho_{E|a} has the same nonzero spectrum as its 2x2 Gram matrix.
    double cond_e = 0.0;
    for (int a = 0; a < 2; ++a) {
        if (p[a] <= 0.0) continue;
        Eigen::MatrixXd g = gram.block(2 * a, 2 * a, 2, 2);
        rho_b += g;
        cond_b += p[a] * detail::dense_entropy(g / p[a]);
        cond_e += p[a] * detail::dense_entropy(g / p[a]);
    }
    const double s_b = detail::dense_entropy(rho_b);
    const double s_e = detail::dense_entropy(Eigen::MatrixXd(gram));

    KeyRateReport r;
    r.N = N;
    r.i_ab = s_b - cond_b;
    r.i_ae = s_e - cond_e;
    r.rate = r.i_ab - r.i_ae;
    return r;
}

} // namespace cadsec
