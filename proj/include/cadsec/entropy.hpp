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
 * Entropy primitives in bits. 0 log 0 = 0; terms below 1e-15 are dropped.
 *
 * Key rates near the security boundary are differences of quantities that
 * each approach 1 (or log2 d). The `*_deficit` helpers return the distance
 * from the maximum directly so that those differences keep full relative
 * precision at large block sizes.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "error.hpp"

namespace cadsec {

inline constexpr double kEntropyCutoff = 1e-15;

/// -p log2 p, with the small-argument cutoff.
inline double entropy_term(double p) {
    if (p <= kEntropyCutoff) return 0.0;
    return -p * std::log2(p);
}

/// h(p) = -p log2 p - (1-p) log2 (1-p).
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "binary entropy argument outside [0, 1]");
    }
    if (p <= kEntropyCutoff || p >= 1.0 - kEntropyCutoff) {
        // The complementary term is O(p) and must not be dropped.
        const double small = p < 0.5 ? p : 1.0 - p;
        if (small <= 0.0) return 0.0;
        return (-small * std::log(small) + small) / std::numbers::ln2;
    }
    return entropy_term(p) - (1.0 - p) * std::log1p(-p) / std::numbers::ln2;
}

/// Shannon entropy of a probability vector.
inline double shannon_entropy(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs) s += entropy_term(p);
    return s;
}

/// (1 + x) ln(1 + x) - x, non-negative for x >= -1, accurate near 0.
inline double xlogx_excess(double x) {
    if (x <= -1.0) return 1.0; // limit value at x = -1
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return x2 / 2.0 - x2 * x / 6.0 + x2 * x2 / 12.0 - x2 * x2 * x / 20.0;
    }
    return (1.0 + x) * std::log1p(x) - x;
}

/// 1 - h((1 - x)/2) for x in [-1, 1].
inline double binary_entropy_deficit(double x) {
    x = std::abs(x);
    if (x >= 1.0) return 1.0;
    return (xlogx_excess(x) + xlogx_excess(-x)) / (2.0 * std::numbers::ln2);
}

} // namespace cadsec
