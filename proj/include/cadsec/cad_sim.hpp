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
 * Seeded Monte Carlo simulation of CAD1 and CAD2 on classical symbol
 * streams.
 *
 * Every trial owns a std::mt19937_64 seeded with mix(seed, trial_index), so
 * the report is identical for any thread count or scheduling.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "error.hpp"

namespace cadsec {

enum class CadVariant { CAD1, CAD2 };

constexpr std::string_view to_string(CadVariant v) { return v == CadVariant::CAD1 ? "CAD1" : "CAD2"; }

inline CadVariant parse_variant(std::string_view name) {
    if (name == "CAD1" || name == "cad1") return CadVariant::CAD1;
    if (name == "CAD2" || name == "cad2") return CadVariant::CAD2;
    throw Error(ErrorCode::ParseError, "unknown CAD variant '" + std::string(name) + "'");
}

struct SimReport {
    CadVariant variant = CadVariant::CAD1;
    int d = 2;
    int N = 1;
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    /// error_counts[j]: accepted blocks whose common difference is j (j = 0: no error).
    std::vector<std::uint64_t> error_counts;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t trial) {
    return splitmix64(master ^ splitmix64(trial));
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int uniform_symbol(std::mt19937_64 &rng, int d) {
    return std::min(d - 1, static_cast<int>(unit_uniform(rng) * d));
}

inline int sample_class(std::mt19937_64 &rng, std::span<const double> cumulative) {
    const double u = unit_uniform(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                     static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

} // namespace detail

/// Thread count from CADSEC_THREADS, else the hardware concurrency.
inline unsigned default_thread_count() {
    if (const char *env = std::getenv("CADSEC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Simulates `trials` blocks of N i.i.d. Alice-Bob differences drawn from
/// (F, D_1, ..., D_{d-1}).
///
/// CAD1 conditions on Alice's block being constant, so only the differences
/// are drawn. CAD2 draws Alice's secret s and her block, announces
/// X_i = s - a_i, and Bob accepts iff all b_i + X_i coincide.
inline SimReport simulate_cad(double F, std::span<const double> D, int N, std::uint64_t trials,
                              CadVariant variant, std::uint64_t seed, unsigned threads = 0) {
    if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
    if (N < 1) throw Error(ErrorCode::OutOfRange, "block size must be >= 1");
    const int d = static_cast<int>(D.size()) + 1;
    std::vector<double> cumulative(static_cast<std::size_t>(d));
    double acc = F;
    if (!(F >= 0.0)) throw Error(ErrorCode::OutOfRange, "F must be non-negative");
    cumulative[0] = acc;
    for (int j = 1; j < d; ++j) {
        if (!(D[static_cast<std::size_t>(j - 1)] >= 0.0)) throw Error(ErrorCode::OutOfRange, "disturbances must be non-negative");
        acc += D[static_cast<std::size_t>(j - 1)];
        cumulative[static_cast<std::size_t>(j)] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) throw Error(ErrorCode::NotNormalized, "F + sum D_j must equal 1");
    for (double &c : cumulative) c /= acc;

    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

    auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t> &counts) {
        std::vector<int> derived(static_cast<std::size_t>(N));
        for (std::uint64_t t = begin; t < end; ++t) {
            std::mt19937_64 rng(detail::mix_seed(seed, t));
            if (variant == CadVariant::CAD1) {
                const int first = detail::sample_class(rng, cumulative);
                bool ok = true;
                for (int i = 1; i < N; ++i) ok &= detail::sample_class(rng, cumulative) == first;
                if (ok) ++counts[static_cast<std::size_t>(first)];
            } else {
                const int s = detail::uniform_symbol(rng, d);
                for (int i = 0; i < N; ++i) {
                    const int a = detail::uniform_symbol(rng, d);
                    const int delta = detail::sample_class(rng, cumulative);
                    const int b = (a + delta) % d;
                    const int x = ((s - a) % d + d) % d;
                    derived[static_cast<std::size_t>(i)] = (b + x) % d;
                }
                const bool ok = std::all_of(derived.begin(), derived.end(), [&](int v) { return v == derived[0]; });
                if (ok) ++counts[static_cast<std::size_t>(((derived[0] - s) % d + d) % d)];
            }
        }
    };

    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(static_cast<std::size_t>(d), 0));
    if (threads == 1) {
        run_range(0, trials, partial[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t begin = std::min<std::uint64_t>(trials, w * chunk);
            const std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
            pool.emplace_back(run_range, begin, end, std::ref(partial[w]));
        }
        for (auto &th : pool) th.join();
    }

    SimReport report;
    report.variant = variant;
    report.d = d;
    report.N = N;
    report.trials = trials;
    report.seed = seed;
    report.error_counts.assign(static_cast<std::size_t>(d), 0);
    for (const auto &counts : partial)
        for (int j = 0; j < d; ++j) report.error_counts[static_cast<std::size_t>(j)] += counts[static_cast<std::size_t>(j)];
    for (auto c : report.error_counts) report.accepted += c;
    return report;
}

struct ProportionEstimate {
    double estimate;
    double lower; ///< Wilson score interval
    double upper;
};

/// Wilson interval; z = 2.5758 gives 99 % coverage.
inline ProportionEstimate proportion_interval(std::uint64_t successes, std::uint64_t total, double z = 2.5758293035489) {
    if (total == 0) return {0.0, 0.0, 1.0};
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// (observed - expected) / binomial sigma; 0 when the variance vanishes and
/// the observation is exact.
inline double binomial_z(std::uint64_t successes, std::uint64_t total, double p) {
    p = std::clamp(p, 0.0, 1.0);
    const double n = static_cast<double>(total);
    const double sigma = std::sqrt(n * p * (1.0 - p));
    const double diff = static_cast<double>(successes) - n * p;
    if (sigma == 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    return diff / sigma;
}

} // namespace cadsec
