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
 * Channel descriptions: qubit Bell-diagonal states (Pauli channels acting on
 * half an ebit) and d-dimensional generalized Pauli channels, together with
 * the attack families of the standard prepare-and-measure protocols.
 *
 * Unitaries never appear as matrices. Local Bell-basis permutations are
 * index maps and every later computation only needs the coefficients.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace cadsec {

inline constexpr double kNormalizationTolerance = 1e-9;

namespace detail {

/// Validates a probability vector and renormalizes it. Sums within a few
/// ulps of 1 are kept as given, so permuting a valid vector is exact.
/// Entries in (-1e-12, 0) are roundoff and are clamped to zero.
inline void validate_and_normalize(std::span<double> values, const char *what) {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double &v = values[i];
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::OutOfRange,
                        std::string(what) + "[" + std::to_string(i) + "] is not finite");
        }
        if (v < 0.0) {
            if (v > -1e-12) {
                v = 0.0;
            } else {
                throw Error(ErrorCode::NegativeCoefficient,
                            std::string(what) + "[" + std::to_string(i) +
                                "] = " + std::to_string(v) + " is negative");
            }
        }
        total += v;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw Error(ErrorCode::NotNormalized,
                    std::string(what) + " sums to " + std::to_string(total));
    }
    if (std::abs(total - 1.0) > 8.0 * std::numeric_limits<double>::epsilon())
        for (double &v : values) v /= total;
}

inline void require_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, std::string(name) + " = " + std::to_string(p) +
                                               " is outside [0, 1]");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Qubit Bell-diagonal states
// ---------------------------------------------------------------------------

/// rho_AB = sum_i lambda_i [Phi_i] with Phi_1 = Phi+, Phi_2 = Phi-,
/// Phi_3 = Psi+, Phi_4 = Psi-. Indices are zero-based in code.
class BellDiagonalState {
  public:
    using Coefficients = std::array<double, 4>;

    [[nodiscard]] const Coefficients &lambdas() const noexcept { return lambdas_; }
    [[nodiscard]] double operator[](std::size_t i) const { return lambdas_.at(i); }

    friend bool operator==(const BellDiagonalState &, const BellDiagonalState &) = default;

  private:
    explicit BellDiagonalState(const Coefficients &l) : lambdas_(l) {}
    friend BellDiagonalState make_bell_diagonal(Coefficients lambdas);

    Coefficients lambdas_;
};

/// Rejects negative coefficients and sums off by more than 1e-9.
inline BellDiagonalState make_bell_diagonal(BellDiagonalState::Coefficients lambdas) {
    detail::validate_and_normalize(lambdas, "lambdas");
    return BellDiagonalState(lambdas);
}

/// Bijection on Bell indices: `image[i]` is the output slot of input index i.
class BellPermutation {
  public:
    BellPermutation() : image_{0, 1, 2, 3} {}

    explicit BellPermutation(const std::array<int, 4> &image) : image_(image) {
        std::array<int, 4> sorted = image;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != std::array<int, 4>{0, 1, 2, 3}) {
            throw Error(ErrorCode::OutOfRange, "Bell permutation is not a bijection");
        }
    }

    [[nodiscard]] int operator()(int input_index) const { return image_.at(input_index); }
    [[nodiscard]] const std::array<int, 4> &image() const noexcept { return image_; }

    [[nodiscard]] BellPermutation inverse() const {
        std::array<int, 4> inv{};
        for (int i = 0; i < 4; ++i) inv[image_[i]] = i;
        return BellPermutation(inv);
    }

    /// (a.then(b))(i) == b(a(i))
    [[nodiscard]] BellPermutation then(const BellPermutation &next) const {
        std::array<int, 4> out{};
        for (int i = 0; i < 4; ++i) out[i] = next(image_[i]);
        return BellPermutation(out);
    }

    [[nodiscard]] bool is_identity() const { return image_ == std::array<int, 4>{0, 1, 2, 3}; }

    [[nodiscard]] BellDiagonalState apply(const BellDiagonalState &s) const {
        BellDiagonalState::Coefficients out{};
        for (int i = 0; i < 4; ++i) out[image_[i]] = s[i];
        return make_bell_diagonal(out);
    }

    friend bool operator==(const BellPermutation &, const BellPermutation &) = default;

  private:
    std::array<int, 4> image_;
};

struct CanonicalForm {
    BellDiagonalState state;
    BellPermutation permutation;
};

/// lambda_1 = max, lambda_2 = min, lambda_3 >= lambda_4. Ties go to the
/// lowest original index.
inline CanonicalForm canonicalize(const BellDiagonalState &s) {
    const auto &l = s.lambdas();
    std::array<int, 4> order{0, 1, 2, 3};

    int imax = 0;
    for (int i = 1; i < 4; ++i)
        if (l[i] > l[imax]) imax = i;
    int imin = -1;
    for (int i = 0; i < 4; ++i) {
        if (i == imax) continue;
        if (imin < 0 || l[i] < l[imin]) imin = i;
    }
    std::array<int, 2> rest{};
    int k = 0;
    for (int i = 0; i < 4; ++i)
        if (i != imax && i != imin) rest[k++] = i;
    if (l[rest[1]] > l[rest[0]]) std::swap(rest[0], rest[1]);

    order = {imax, imin, rest[0], rest[1]};
    std::array<int, 4> image{};
    for (int slot = 0; slot < 4; ++slot) image[order[slot]] = slot;
    BellPermutation perm(image);
    return {perm.apply(s), perm};
}

/// Bell-diagonal two-qubit states are entangled iff the largest weight
/// exceeds 1/2 (PPT criterion).
inline bool is_entangled(const BellDiagonalState &s) {
    const auto &l = s.lambdas();
    return *std::max_element(l.begin(), l.end()) > 0.5;
}

/// Computational-basis error rate: lambda_3 + lambda_4.
inline double qber(const BellDiagonalState &s) { return s[2] + s[3]; }

/// (1 - 2Q + x, Q - x, Q - x, x); error rate Q in both BB84 bases.
inline BellDiagonalState bb84_attack_state(double Q, double x) {
    if (!(Q >= 0.0 && Q <= 0.5)) {
        throw Error(ErrorCode::OutOfRange, "BB84 error rate must lie in [0, 1/2]");
    }
    if (!(x >= 0.0 && x <= Q)) {
        throw Error(ErrorCode::OutOfRange, "BB84 attack parameter must satisfy 0 <= x <= Q");
    }
    return make_bell_diagonal({1.0 - 2.0 * Q + x, Q - x, Q - x, x});
}

/// Universal-cloning (depolarizing) attack for the six-state protocol.
inline BellDiagonalState sixstate_attack_state(double Q) {
    if (!(Q >= 0.0 && Q <= 2.0 / 3.0)) {
        throw Error(ErrorCode::OutOfRange, "six-state error rate must lie in [0, 2/3]");
    }
    return make_bell_diagonal({1.0 - 1.5 * Q, Q / 2.0, Q / 2.0, Q / 2.0});
}

struct CloningReport {
    double eta_xz_B;
    double eta_xz_E;
    double eta_y_B;
    double eta_y_E;
};

/// Shrinking factors of the phase-covariant cloner matching a state with
/// lambda_2 == lambda_3.
inline CloningReport cloning_report(const BellDiagonalState &s) {
    if (std::abs(s[1] - s[2]) > kNormalizationTolerance) {
        throw Error(ErrorCode::AsymmetricState, "cloning report needs lambda_2 == lambda_3");
    }
    const double l1 = s[0];
    const double lam = 0.5 * (s[1] + s[2]);
    const double l4 = s[3];
    return {
        l1 - l4,
        2.0 * std::sqrt(lam) * (std::sqrt(l1) + std::sqrt(l4)),
        1.0 - 4.0 * lam + 4.0 * l4,
        2.0 * (lam + std::sqrt(std::max(0.0, l4 * (1.0 - 2.0 * lam - l4)))),
    };
}

// ---------------------------------------------------------------------------
// Generalized Pauli channels
// ---------------------------------------------------------------------------

/// p(m, n) is the probability of the flip/phase operator U_{m,n}; row m is
/// the flip (error class), column n the phase.
class GeneralizedPauliChannel {
  public:
    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] double p(int m, int n) const {
        return probs_.at(static_cast<std::size_t>(m * d_ + n));
    }
    /// Row-major d*d probabilities.
    [[nodiscard]] const std::vector<double> &probabilities() const noexcept { return probs_; }
    [[nodiscard]] std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out(d_, std::vector<double>(d_));
        for (int m = 0; m < d_; ++m)
            for (int n = 0; n < d_; ++n) out[m][n] = p(m, n);
        return out;
    }

    friend bool operator==(const GeneralizedPauliChannel &,
                           const GeneralizedPauliChannel &) = default;

  private:
    GeneralizedPauliChannel(int d, std::vector<double> probs) : d_(d), probs_(std::move(probs)) {}
    friend GeneralizedPauliChannel make_channel(int d, std::vector<double> row_major);

    int d_;
    std::vector<double> probs_;
};

inline GeneralizedPauliChannel make_channel(int d, std::vector<double> row_major) {
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    if (row_major.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::LengthMismatch, "channel needs d*d probabilities");
    }
    detail::validate_and_normalize(row_major, "p");
    return GeneralizedPauliChannel(d, std::move(row_major));
}

inline GeneralizedPauliChannel make_channel(const std::vector<std::vector<double>> &rows) {
    const int d = static_cast<int>(rows.size());
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto &row : rows) {
        if (row.size() != rows.size()) {
            throw Error(ErrorCode::LengthMismatch, "channel matrix must be square");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return make_channel(d, std::move(flat));
}

/// Qubit states embed as d = 2 channels: Phi+ = B_{0,0}, Phi- = B_{0,1},
/// Psi+ = B_{1,0}, Psi- = B_{1,1}.
inline GeneralizedPauliChannel to_channel(const BellDiagonalState &s) {
    return make_channel(2, {s[0], s[1], s[2], s[3]});
}

inline BellDiagonalState to_bell_diagonal(const GeneralizedPauliChannel &ch) {
    if (ch.dim() != 2) throw Error(ErrorCode::UnsupportedCombination, "channel is not a qubit channel");
    return make_bell_diagonal({ch.p(0, 0), ch.p(0, 1), ch.p(1, 0), ch.p(1, 1)});
}

enum class QuditProtocol { TwoBases, DPlusOneBases };

/// Attack channel of the 2-bases or (d+1)-bases protocol at fidelity F.
///
/// Amplitudes follow the symmetric (v, x, y) pattern: c_{0,0} = v,
/// c_{0,n} = c_{m,0} = x, c_{m,n} = y for m, n != 0, with
/// v^2 + 2(d-1)x^2 + (d-1)^2 y^2 = 1 and F = v^2 + (d-1)x^2. The (d+1)-bases
/// protocol forces x = y and ignores `y`. For the 2-bases protocol `y` is the
/// free amplitude; it defaults to 0, the optimal two-way attack.
inline GeneralizedPauliChannel protocol_channel_d(QuditProtocol kind, int d, double F,
                                                  std::optional<double> y = std::nullopt) {
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    detail::require_probability(F, "F");
    const double dd = d;
    double v2 = 0.0, x2 = 0.0, y2 = 0.0;
    if (kind == QuditProtocol::DPlusOneBases) {
        v2 = ((dd + 1.0) * F - 1.0) / dd;
        x2 = y2 = (1.0 - F) / (dd * (dd - 1.0));
    } else {
        const double amp = y.value_or(0.0);
        if (!(amp >= 0.0)) throw Error(ErrorCode::OutOfRange, "y must be non-negative");
        y2 = amp * amp;
        x2 = (1.0 - F - (dd - 1.0) * (dd - 1.0) * y2) / (dd - 1.0);
        v2 = F - (dd - 1.0) * x2;
    }
    if (v2 < -1e-15 || x2 < -1e-15) {
        throw Error(ErrorCode::InfeasibleFidelity,
                    "no non-negative amplitudes reach F = " + std::to_string(F));
    }
    v2 = std::max(v2, 0.0);
    x2 = std::max(x2, 0.0);
    std::vector<double> p(static_cast<std::size_t>(d * d), y2);
    p[0] = v2;
    for (int k = 1; k < d; ++k) {
        p[static_cast<std::size_t>(k)] = x2;
        p[static_cast<std::size_t>(k * d)] = x2;
    }
    return make_channel(d, std::move(p));
}

/// Optimal one-way (1 -> 1+1 cloning) attack on the 2-bases protocol:
/// c_{0,0} = F, c_{m,0} = c_{0,n} = sqrt(F(1-F)/(d-1)), c_{m,n} = (1-F)/(d-1).
/// At d = 2 this is bb84_attack_state(Q, Q^2).
inline GeneralizedPauliChannel cloning_channel_d(int d, double F) {
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    detail::require_probability(F, "F");
    const double dm1 = d - 1.0;
    std::vector<double> p(static_cast<std::size_t>(d * d), (1.0 - F) * (1.0 - F) / (dm1 * dm1));
    p[0] = F * F;
    for (int k = 1; k < d; ++k) {
        p[static_cast<std::size_t>(k)] = F * (1.0 - F) / dm1;
        p[static_cast<std::size_t>(k * d)] = F * (1.0 - F) / dm1;
    }
    return make_channel(d, std::move(p));
}

struct FidelityDisturbances {
    double F;
    std::vector<double> D; ///< D[j-1] is the probability of difference j.
};

inline FidelityDisturbances fidelity_disturbances(const GeneralizedPauliChannel &ch) {
    const int d = ch.dim();
    FidelityDisturbances out{0.0, std::vector<double>(static_cast<std::size_t>(d - 1), 0.0)};
    for (int n = 0; n < d; ++n) out.F += ch.p(0, n);
    for (int j = 1; j < d; ++j)
        for (int n = 0; n < d; ++n) out.D[static_cast<std::size_t>(j - 1)] += ch.p(j, n);
    return out;
}

} // namespace cadsec
