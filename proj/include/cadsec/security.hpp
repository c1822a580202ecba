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
 * Security predicates, the matching attack, critical error rates and the
 * closed-form bounds of the symmetric qudit protocols.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cad.hpp"
#include "entropy.hpp"
#include "error.hpp"
#include "eve.hpp"
#include "keyrate.hpp"
#include "states.hpp"

namespace cadsec {

struct SecurityVerdict {
    bool secure = false;
    double margin = 0.0; ///< positive on the secure side; zero is not secure
};

inline SecurityVerdict make_verdict(double margin) { return {margin > 0.0, margin}; }

/// L_eq^2 - eps/(1 - eps).
inline SecurityVerdict qubit_security(const EveEnsembleQubit &ens) {
    if (ens.eps >= 1.0) return make_verdict(-INFINITY);
    return make_verdict(ens.lambda_eq * ens.lambda_eq - ens.eps / (1.0 - ens.eps));
}

/// max_{m != 0} |o_0(m)|^2 - max_j D_j / F.
inline SecurityVerdict qudit_security(const EveEnsembleD &ens) {
    const double F = ens.fidelity();
    if (!(F > 0.0)) throw Error(ErrorCode::DegenerateChannel, "security condition needs F > 0");
    double overlap2 = 0.0;
    for (int m = 1; m < ens.dim(); ++m) overlap2 = std::max(overlap2, std::norm(ens.overlap(0, m)));
    double dmax = 0.0;
    for (double dj : ens.disturbances()) dmax = std::max(dmax, dj);
    return make_verdict(overlap2 - dmax / F);
}

// ---------------------------------------------------------------------------
// Attack side
// ---------------------------------------------------------------------------

struct AttackRecord {
    int N;
    double eps_B;       ///< Bob's error after CAD
    double eps_eq;      ///< Eve's Helstrom error on the equal branch
    double oneway_rate; ///< h(eps_eq) - h(eps_B)
};

enum class AttackVerdict { Broken, Undecided };

constexpr std::string_view to_string(AttackVerdict v) { return v == AttackVerdict::Broken ? "broken" : "undecided"; }

struct AttackReport {
    std::vector<AttackRecord> records;
    AttackVerdict verdict = AttackVerdict::Undecided;
};

/// Eve measures every copy of the equal branch with the Helstrom measurement
/// and reconciles one-way; the rate is non-positive whenever
/// eps_eq <= eps_B. Broken means that holds for every N in [N_lo, N_hi].
inline AttackReport attack_oneway_check(const EveEnsembleQubit &ens, int N_lo, int N_hi) {
    if (N_lo < 1 || N_hi < N_lo) throw Error(ErrorCode::OutOfRange, "attack check needs 1 <= N_lo <= N_hi");
    if (ens.eps >= 1.0) throw Error(ErrorCode::DegenerateChannel, "attack check needs eps < 1");
    AttackReport report;
    report.records.reserve(static_cast<std::size_t>(N_hi - N_lo + 1));
    bool broken = true;
    for (int N = N_lo; N <= N_hi; ++N) {
        const double eB = cad_error(ens.eps, N);
        const double eE = helstrom_error(ens.lambda_eq, N);
        report.records.push_back({N, eB, eE, binary_entropy(eE) - binary_entropy(eB)});
        broken &= eE <= eB;
    }
    report.verdict = broken ? AttackVerdict::Broken : AttackVerdict::Undecided;
    return report;
}

// ---------------------------------------------------------------------------
// Critical error rates
// ---------------------------------------------------------------------------

enum class Protocol { BB84, SixState, TwoBases, DPlusOneBases };
enum class AnalysisMode { TwoWay, OneWayN1 };

constexpr std::string_view to_string(Protocol p) {
    switch (p) {
    case Protocol::BB84: return "bb84";
    case Protocol::SixState: return "sixstate";
    case Protocol::TwoBases: return "two-bases";
    case Protocol::DPlusOneBases: return "d-plus-1-bases";
    }
    return "";
}

constexpr std::string_view to_string(AnalysisMode m) { return m == AnalysisMode::TwoWay ? "two-way" : "one-way-N1"; }

inline Protocol parse_protocol(std::string_view name) {
    if (name == "bb84") return Protocol::BB84;
    if (name == "sixstate" || name == "six-state") return Protocol::SixState;
    if (name == "two-bases") return Protocol::TwoBases;
    if (name == "d-plus-1-bases") return Protocol::DPlusOneBases;
    throw Error(ErrorCode::ParseError, "unknown protocol '" + std::string(name) + "'");
}

inline AnalysisMode parse_mode(std::string_view name) {
    if (name == "two-way") return AnalysisMode::TwoWay;
    if (name == "one-way-N1") return AnalysisMode::OneWayN1;
    throw Error(ErrorCode::ParseError, "unknown mode '" + std::string(name) + "'");
}

inline constexpr double kBisectionTolerance = 1e-10;
inline constexpr int kBisectionMaxIterations = 80;

struct Minimum {
    double argmin;
    double value;
};

/// Golden-section minimum of f on [lo, hi], then compared with f(lo);
/// ties go to lo.
inline Minimum golden_section_min(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-12) {
    const double f_lo = f(lo);
    if (!(hi > lo)) return {lo, f_lo};
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = (a + b) / 2.0;
    const double fx = f(x);
    if (f_lo <= fx) return {lo, f_lo};
    return {x, fx};
}

/// Margin of one point of a protocol family at error rate e (QBER for the
/// qubit families, total disturbance D = 1 - F for the qudit ones).
struct FamilyPoint {
    double margin;
    double parameter = 0.0; ///< attack parameter selected (x for BB84, y for two-bases)
};

inline FamilyPoint family_margin(Protocol protocol, AnalysisMode mode, int d, double e) {
    if (mode == AnalysisMode::TwoWay) {
        switch (protocol) {
        case Protocol::SixState:
            return {qubit_security(qubit_ensemble(sixstate_attack_state(e))).margin};
        case Protocol::BB84: {
            const auto m = golden_section_min(
                [e](double x) { return qubit_security(qubit_ensemble(bb84_attack_state(e, x))).margin; }, 0.0, e);
            return {m.value, m.argmin};
        }
        case Protocol::TwoBases: {
            const double F = 1.0 - e;
            const double y_max = std::sqrt(std::max(0.0, 1.0 - F)) / (d - 1.0);
            const auto margin_at = [&](double y) -> double {
                try {
                    return qudit_security(qudit_ensemble(protocol_channel_d(QuditProtocol::TwoBases, d, F, y))).margin;
                } catch (const Error &err) {
                    if (err.code() == ErrorCode::InfeasibleFidelity) return INFINITY;
                    throw;
                }
            };
            const auto m = golden_section_min(margin_at, 0.0, y_max);
            return {m.value, m.argmin};
        }
        case Protocol::DPlusOneBases:
            return {qudit_security(qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, d, 1.0 - e))).margin};
        }
    } else {
        switch (protocol) {
        case Protocol::SixState:
            return {rate_post_cad_qubit(qubit_ensemble(sixstate_attack_state(e)), 1).rate};
        case Protocol::BB84:
            return {rate_post_cad_qubit(qubit_ensemble(bb84_attack_state(e, e * e)), 1).rate, e * e};
        case Protocol::TwoBases:
            return {holevo_post_cad_d(qudit_ensemble(cloning_channel_d(d, 1.0 - e)), 1).rate};
        case Protocol::DPlusOneBases:
            return {holevo_post_cad_d(qudit_ensemble(protocol_channel_d(QuditProtocol::DPlusOneBases, d, 1.0 - e)), 1).rate};
        }
    }
    throw Error(ErrorCode::UnsupportedCombination, "unknown protocol");
}

struct CriticalRateReport {
    Protocol protocol;
    AnalysisMode mode;
    int d;
    double value;           ///< critical error rate
    double argmin_parameter; ///< attack parameter at the root (BB84 x or two-bases y)
    int iterations;
    std::optional<double> closed_form;
};

/// Upper end of the bisection bracket: the largest error rate at which the
/// family is still defined and the margin is non-positive.
inline double critical_bracket_high(Protocol protocol, int d) {
    switch (protocol) {
    case Protocol::SixState: return 1.0 / 3.0;
    case Protocol::BB84: return 0.25;
    case Protocol::TwoBases: return 0.5;
    case Protocol::DPlusOneBases: return (d - 1.0) / d;
    }
    return 0.5;
}

inline double closed_form_bound(QuditProtocol kind, int d) {
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    const double dd = d;
    if (kind == QuditProtocol::DPlusOneBases)
        return (dd - 1.0) * (2.0 * dd + 1.0 - std::sqrt(5.0)) / (2.0 * (dd * dd + dd - 1.0));
    return (dd - 1.0) * (4.0 * dd - 1.0 - std::sqrt(4.0 * dd + 1.0)) / (2.0 * dd * (4.0 * dd - 3.0));
}

/// Bisection on the sign of the family margin (two-way) or the N = 1 rate
/// (one-way-N1).
inline CriticalRateReport critical_rate(Protocol protocol, AnalysisMode mode, int d = 2) {
    if ((protocol == Protocol::BB84 || protocol == Protocol::SixState) && d != 2) {
        throw Error(ErrorCode::UnsupportedCombination,
                    std::string(to_string(protocol)) + " is a qubit protocol; d must be 2");
    }
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    double lo = 0.0;
    double hi = critical_bracket_high(protocol, d);
    const auto secure = [&](double e) { return family_margin(protocol, mode, d, e).margin > 0.0; };
    if (!secure(lo) || secure(hi)) {
        throw Error(ErrorCode::UnsupportedCombination, "predicate does not change sign on the bracket");
    }
    int it = 0;
    for (; it < kBisectionMaxIterations && hi - lo > kBisectionTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        (secure(mid) ? lo : hi) = mid;
    }
    CriticalRateReport out{protocol, mode, d, 0.5 * (lo + hi), 0.0, it, std::nullopt};
    out.argmin_parameter = family_margin(protocol, mode, d, out.value).parameter;
    if (mode == AnalysisMode::TwoWay) {
        switch (protocol) {
        case Protocol::SixState:
        case Protocol::DPlusOneBases: out.closed_form = closed_form_bound(QuditProtocol::DPlusOneBases, d); break;
        case Protocol::BB84:
        case Protocol::TwoBases: out.closed_form = closed_form_bound(QuditProtocol::TwoBases, d); break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tightness of the symmetric attacks
// ---------------------------------------------------------------------------

/// SRM success on N copies of d symmetric states with pairwise overlap t:
/// (1/d^2) (sqrt(1 + (d-1) t^N) + (d-1) sqrt(1 - t^N))^2.
inline double srm_attack_success_symmetric(int d, double t, int N) {
    if (d < 2 || N < 1 || !(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "need d >= 2, N >= 1 and t in [0, 1]");
    }
    const double tN = std::pow(t, N);
    const double root = std::sqrt(1.0 + (d - 1.0) * tN) + (d - 1.0) * std::sqrt(1.0 - tN);
    return std::min(1.0, root * root / (static_cast<double>(d) * d));
}

/// Eve's SRM success minus Bob's post-CAD fidelity 1/(1 + (d-1) t^{2N});
/// non-negative when the attack breaks the protocol exactly where the
/// security condition fails.
inline double tightness_slack(int d, double t, int N) {
    const double tN = std::pow(t, N);
    return srm_attack_success_symmetric(d, t, N) - 1.0 / (1.0 + (d - 1.0) * tN * tN);
}

struct TightnessReport {
    bool holds = true;
    double min_slack = INFINITY;
    double argmin_t = 0.0;
    int argmin_N = 1;
    /// slack(t, N) = slack(t^N, 1) on every grid point, so N = 1 suffices.
    bool reduces_to_single_copy = true;
};

inline TightnessReport tightness_check_detailed(int d, std::span<const double> t_grid, int N_lo, int N_hi,
                                                double tolerance = 1e-12) {
    if (d < 2 || N_lo < 1 || N_hi < N_lo) throw Error(ErrorCode::OutOfRange, "need d >= 2 and 1 <= N_lo <= N_hi");
    TightnessReport out;
    for (double t : t_grid) {
        if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::OutOfRange, "t must lie in [0, 1]");
        for (int N = N_lo; N <= N_hi; ++N) {
            const double s = tightness_slack(d, t, N);
            if (s < out.min_slack) {
                out.min_slack = s;
                out.argmin_t = t;
                out.argmin_N = N;
            }
            if (s < -tolerance) out.holds = false;
            if (std::abs(s - tightness_slack(d, std::pow(t, N), 1)) > tolerance) out.reduces_to_single_copy = false;
        }
    }
    return out;
}

inline bool tightness_check(int d, std::span<const double> t_grid, int N_lo, int N_hi) {
    const auto r = tightness_check_detailed(d, t_grid, N_lo, N_hi);
    return r.holds && r.reduces_to_single_copy;
}

} // namespace cadsec
