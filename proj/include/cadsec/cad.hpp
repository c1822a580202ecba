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
 * Classical advantage distillation (CAD) statistics.
 *
 * Alice and Bob keep a block of N symbols only when all N Alice-Bob
 * differences coincide. The surviving block has difference j with
 * probability D_j^N / p_ok, where D_0 = F and p_ok = sum_j D_j^N.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace cadsec {

/// Alice-Bob error probability after CAD on N bits:
/// eps^N / (eps^N + (1 - eps)^N), evaluated as a logistic in log space.
inline double cad_error(double eps, int N) {
    if (!(eps >= 0.0 && eps < 1.0)) throw Error(ErrorCode::OutOfRange, "cad_error needs eps in [0, 1)");
    if (N < 1) throw Error(ErrorCode::OutOfRange, "block size must be >= 1");
    if (eps == 0.0) return 0.0;
    // eps_N = 1 / (1 + exp(r)), r = N log((1 - eps)/eps)
    const double r = N * (std::log1p(-eps) - std::log(eps));
    if (r > 0.0) {
        const double e = std::exp(-r);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(r));
}

struct CadStatistics {
    int N = 1;
    double p_ok = 1.0;     ///< acceptance probability per block
    double log_p_ok = 0.0; ///< natural log of p_ok; finite after p_ok underflows
    double fidelity_after = 1.0;
    std::vector<double> disturbances_after; ///< D'_j, j = 1..d-1
};

/// Post-CAD fidelity and disturbances of a d-ary difference process,
/// computed in log space.
inline CadStatistics cad_statistics_d(double F, std::span<const double> D, int N) {
    if (N < 1) throw Error(ErrorCode::OutOfRange, "block size must be >= 1");
    if (!(F >= 0.0 && F <= 1.0)) throw Error(ErrorCode::OutOfRange, "F must lie in [0, 1]");
    double total = F;
    for (double dj : D) {
        if (!(dj >= 0.0 && dj <= 1.0)) throw Error(ErrorCode::OutOfRange, "disturbances must lie in [0, 1]");
        total += dj;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::NotNormalized, "F + sum D_j = " + std::to_string(total));
    }
    if (F <= 0.0) throw Error(ErrorCode::DegenerateChannel, "CAD statistics need F > 0");

    // log (D_j/F)^N, normalized against the largest class with log-sum-exp.
    std::vector<double> logs(D.size());
    const double logF = std::log(F);
    double log_max = 0.0;
    for (std::size_t j = 0; j < D.size(); ++j) {
        logs[j] = D[j] > 0.0 ? N * (std::log(D[j]) - logF) : -INFINITY;
        log_max = std::max(log_max, logs[j]);
    }
    const double w0 = std::exp(-log_max);
    double sum = w0;
    for (double l : logs) sum += std::exp(l - log_max);
    CadStatistics out;
    out.N = N;
    out.log_p_ok = std::min(0.0, N * logF + log_max + std::log(sum));
    out.p_ok = std::exp(out.log_p_ok);
    out.fidelity_after = w0 / sum;
    out.disturbances_after.resize(D.size());
    for (std::size_t j = 0; j < D.size(); ++j) out.disturbances_after[j] = std::exp(logs[j] - log_max) / sum;
    return out;
}

/// Label of Eve's state |e_{alpha,beta}>: Alice holds alpha, Bob beta.
struct EveLabel {
    int alpha;
    int beta;
    friend bool operator==(const EveLabel &, const EveLabel &) = default;
    friend auto operator<=>(const EveLabel &, const EveLabel &) = default;
};

/// Eve's classical re-indexing after a CAD2 announcement X: each label is
/// shifted by X_i, |e_{a,b}> -> |e_{a+X_i, b+X_i}> (mod d). With
/// X_i = s - a_i the result is |e_{s, s-(a_i-b_i)}>, which no longer depends
/// on X.
inline std::vector<EveLabel> eve_relabel(std::span<const int> X, std::span<const EveLabel> labels, int d) {
    if (X.size() != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "announcement and label streams differ in length");
    }
    if (d < 2) throw Error(ErrorCode::OutOfRange, "dimension must be >= 2");
    auto mod = [d](int v) { return ((v % d) + d) % d; };
    std::vector<EveLabel> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out[i] = {mod(labels[i].alpha + X[i]), mod(labels[i].beta + X[i])};
    }
    return out;
}

} // namespace cadsec
