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
 * Geometry of the eavesdropper's conditional states and her optimal
 * measurements.
 *
 * After Alice and Bob measure in the computational basis, Eve holds a pure
 * state |e_{a,b}> for every outcome pair. States belonging to different
 * error classes j = b - a are orthogonal, so each class is handled on its
 * own. Within a class the d states are geometrically uniform and everything
 * follows from the overlap function m -> o_j(m).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "entropy.hpp"
#include "error.hpp"
#include "states.hpp"

namespace cadsec {

using Complex = std::complex<double>;

inline constexpr double kEigenvalueTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Qubit ensembles
// ---------------------------------------------------------------------------

/// Eve's view of a Bell-diagonal state measured in the computational basis.
struct EveEnsembleQubit {
    double eps;        ///< QBER, lambda_3 + lambda_4
    double lambda_eq;  ///< |<e00|e11>| = (l1 - l2)/(l1 + l2), sign dropped
    double lambda_dif; ///< |<e01|e10>| = |l3 - l4|/(l3 + l4)
};

inline EveEnsembleQubit make_qubit_ensemble(double eps, double lambda_eq, double lambda_dif) {
    detail::require_probability(eps, "eps");
    detail::require_probability(lambda_eq, "lambda_eq");
    detail::require_probability(lambda_dif, "lambda_dif");
    return {eps, lambda_eq, lambda_dif};
}

/// An empty branch (zero weight) gets overlap 1 by convention.
inline EveEnsembleQubit qubit_ensemble(const BellDiagonalState &s) {
    const double z_eq = s[0] + s[1];
    const double z_dif = s[2] + s[3];
    const double leq = z_eq > 0.0 ? std::abs(s[0] - s[1]) / z_eq : 1.0;
    const double ldif = z_dif > 0.0 ? std::abs(s[2] - s[3]) / z_dif : 1.0;
    return {z_dif, std::min(leq, 1.0), std::min(ldif, 1.0)};
}

// ---------------------------------------------------------------------------
// Qudit ensembles
// ---------------------------------------------------------------------------

namespace detail {

/// exp(2 pi i k / d) with k reduced mod d first.
inline Complex root_of_unity(long long k, int d) {
    long long r = k % d;
    if (r < 0) r += d;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
    return {std::cos(angle), std::sin(angle)};
}

/// z^N via polar form; exact zero stays zero.
inline Complex overlap_power(Complex z, int N) {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    if (N == 1) return z;
    return std::polar(std::exp(N * std::log(r)), N * std::arg(z));
}

} // namespace detail

/// Per-class overlap tables of a generalized Pauli channel.
class EveEnsembleD {
  public:
    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] double fidelity() const noexcept { return F_; }
    [[nodiscard]] const std::vector<double> &disturbances() const noexcept { return D_; }
    /// Weight of class j: F for j = 0, D_j otherwise.
    [[nodiscard]] double class_weight(int j) const {
        return j == 0 ? F_ : D_.at(static_cast<std::size_t>(j - 1));
    }
    [[nodiscard]] bool has_class(int j) const { return class_weight(j) > 0.0; }

    /// o_j(m); m is taken mod d.
    [[nodiscard]] Complex overlap(int j, int m) const {
        if (!has_class(j)) throw Error(ErrorCode::EmptyClass, "error class " + std::to_string(j) + " has zero weight");
        int r = m % d_;
        if (r < 0) r += d_;
        return overlaps_.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(r));
    }
    [[nodiscard]] std::span<const Complex> overlaps(int j) const {
        if (!has_class(j)) throw Error(ErrorCode::EmptyClass, "error class " + std::to_string(j) + " has zero weight");
        return overlaps_.at(static_cast<std::size_t>(j));
    }

  private:
    friend EveEnsembleD qudit_ensemble(const GeneralizedPauliChannel &ch);
    EveEnsembleD() = default;

    int d_ = 0;
    double F_ = 0.0;
    std::vector<double> D_;
    std::vector<std::vector<Complex>> overlaps_;
};

/// o_0(m) = (1/F) sum_n p_{0,n} w^{mn} and, for j != 0,
/// o_j(m) = <e_{m,m+j}|e_{0,j}> = (1/D_j) sum_n p_{j,n} w^{-mn}, w = e^{2 pi i/d}.
/// Both satisfy o(0) = 1 and o(-m) = conj(o(m)).
inline EveEnsembleD qudit_ensemble(const GeneralizedPauliChannel &ch) {
    const int d = ch.dim();
    const auto fd = fidelity_disturbances(ch);
    EveEnsembleD ens;
    ens.d_ = d;
    ens.F_ = fd.F;
    ens.D_ = fd.D;
    ens.overlaps_.assign(static_cast<std::size_t>(d), {});
    for (int j = 0; j < d; ++j) {
        const double weight = ens.class_weight(j);
        if (weight <= 0.0) continue;
        const int sign = j == 0 ? 1 : -1;
        auto &table = ens.overlaps_[static_cast<std::size_t>(j)];
        table.assign(static_cast<std::size_t>(d), Complex{});
        table[0] = 1.0;
        for (int m = 1; m < d; ++m) {
            Complex acc{};
            for (int n = 0; n < d; ++n)
                acc += ch.p(j, n) * detail::root_of_unity(static_cast<long long>(sign) * m * n, d);
            table[static_cast<std::size_t>(m)] = acc / weight;
        }
    }
    return ens;
}

// ---------------------------------------------------------------------------
// Two-state discrimination
// ---------------------------------------------------------------------------

/// Minimum error discriminating N copies of two equiprobable pure states
/// with |<a|b>| = overlap_abs: 1/2 - 1/2 sqrt(1 - overlap^{2N}).
inline double helstrom_error(double overlap_abs, int N) {
    if (!(overlap_abs >= 0.0 && overlap_abs <= 1.0) || N < 1) {
        throw Error(ErrorCode::OutOfRange, "helstrom_error needs overlap in [0,1] and N >= 1");
    }
    if (overlap_abs == 0.0) return 0.0;
    const double s = std::exp(2.0 * N * std::log(overlap_abs));
    // 1/2 (1 - sqrt(1 - s)) rewritten without cancellation.
    return s / (2.0 * (1.0 + std::sqrt(1.0 - s)));
}

// ---------------------------------------------------------------------------
// Geometrically uniform ensembles
// ---------------------------------------------------------------------------

template <class F>
concept OverlapFunction = requires(const F &f, int m) {
    { f(m) } -> std::convertible_to<Complex>;
};

/// Spectrum of a density operator, with optional multiplicities.
struct SpectrumReport {
    std::vector<double> eigenvalues;
    std::vector<double> multiplicities; ///< empty means all ones
    double entropy_bits = 0.0;
    /// log2(d) - entropy for geometrically uniform spectra, computed without
    /// cancellation; NaN where it does not apply.
    double deficit_bits = std::nan("");

    [[nodiscard]] double multiplicity(std::size_t i) const {
        return multiplicities.empty() ? 1.0 : multiplicities.at(i);
    }
    [[nodiscard]] double total() const {
        double t = 0.0;
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) t += multiplicity(i) * eigenvalues[i];
        return t;
    }
};

namespace detail {

/// Fourier deviations delta_eta = sum_{m != 0} w^{sign*eta*m} overlap(m)^N.
template <OverlapFunction Overlap>
std::vector<Complex> fourier_deviations(const Overlap &overlap, int d, int N, int sign) {
    std::vector<Complex> powers(static_cast<std::size_t>(d));
    for (int m = 1; m < d; ++m)
        powers[static_cast<std::size_t>(m)] = overlap_power(Complex(overlap(m)), N);
    std::vector<Complex> delta(static_cast<std::size_t>(d));
    for (int eta = 0; eta < d; ++eta) {
        Complex acc{};
        for (int m = 1; m < d; ++m)
            acc += root_of_unity(static_cast<long long>(sign) * eta * m, d) * powers[static_cast<std::size_t>(m)];
        delta[static_cast<std::size_t>(eta)] = acc;
    }
    return delta;
}

inline void check_arguments(int d, int N) {
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    if (N < 1) throw Error(ErrorCode::OutOfRange, "block size must be >= 1");
}

} // namespace detail

/// Eigenvalues A_eta of (1/d) sum_k [e_k^{(x)N}] for geometrically uniform
/// states with <e_k|e_k'> = overlap(k' - k):
/// A_eta = (1/d^2) sum_{k,k'} w^{eta (k - k')} <e_k|e_k'>^N.
template <OverlapFunction Overlap>
SpectrumReport gu_eigenvalues(const Overlap &overlap, int d, int N) {
    detail::check_arguments(d, N);
    const auto delta = detail::fourier_deviations(overlap, d, N, -1);
    SpectrumReport out;
    out.eigenvalues.resize(static_cast<std::size_t>(d));
    double deficit = 0.0;
    for (int eta = 0; eta < d; ++eta) {
        const Complex dev = delta[static_cast<std::size_t>(eta)];
        double a = (1.0 + dev.real()) / d;
        if (a < -kEigenvalueTolerance) {
            throw Error(ErrorCode::NotPositiveSemidefinite,
                        "eigenvalue " + std::to_string(a) + " at eta = " + std::to_string(eta));
        }
        a = std::max(a, 0.0);
        out.eigenvalues[static_cast<std::size_t>(eta)] = a;
        out.entropy_bits += entropy_term(a);
        deficit += xlogx_excess(std::max(dev.real(), -1.0));
    }
    out.deficit_bits = deficit / (d * std::numbers::ln2);
    return out;
}

inline SpectrumReport gu_eigenvalues(std::span<const Complex> overlap, int d, int N) {
    return gu_eigenvalues([overlap](int m) { return overlap[static_cast<std::size_t>(m)]; }, d, N);
}

/// Success probability of the square-root measurement on N copies of d
/// equiprobable geometrically uniform states:
/// (1/d^2) |sum_eta sqrt(1 + Y_eta)|^2, Y_eta = sum_{m != 0} w^{eta m} overlap(m)^N.
template <OverlapFunction Overlap>
double srm_success(const Overlap &overlap, int d, int N) {
    detail::check_arguments(d, N);
    const auto Y = detail::fourier_deviations(overlap, d, N, +1);
    double root_sum = 0.0;
    for (int eta = 0; eta < d; ++eta) {
        const double y = Y[static_cast<std::size_t>(eta)].real();
        if (1.0 + y < -kEigenvalueTolerance) {
            throw Error(ErrorCode::NotPositiveSemidefinite,
                        "1 + Y_eta = " + std::to_string(1.0 + y) + " at eta = " + std::to_string(eta));
        }
        root_sum += std::sqrt(std::max(0.0, 1.0 + y));
    }
    return std::min(1.0, root_sum * root_sum / (static_cast<double>(d) * d));
}

inline double srm_success(std::span<const Complex> overlap, int d, int N) {
    return srm_success([overlap](int m) { return overlap[static_cast<std::size_t>(m)]; }, d, N);
}

/// SRM success on the d states of error class j after CAD on N copies.
inline double srm_success_error_class(const EveEnsembleD &ens, int j, int N) {
    if (j < 0 || j >= ens.dim()) throw Error(ErrorCode::OutOfRange, "class index out of range");
    return srm_success(ens.overlaps(j), ens.dim(), N);
}

/// Spectrum of class j of Eve's post-CAD state.
inline SpectrumReport class_spectrum(const EveEnsembleD &ens, int j, int N) {
    if (j < 0 || j >= ens.dim()) throw Error(ErrorCode::OutOfRange, "class index out of range");
    return gu_eigenvalues(ens.overlaps(j), ens.dim(), N);
}

} // namespace cadsec
