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
 * Channel files and JSON serialization of the library's reports.
 *
 * Channel documents are either
 *   {"kind": "qubit", "lambdas": [l1, l2, l3, l4]}
 * or
 *   {"kind": "qudit", "d": d, "p": [[p_00, ..., p_0(d-1)], ...]}.
 * Validation errors name the offending field as a JSON path.
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cad.hpp"
#include "cad_sim.hpp"
#include "error.hpp"
#include "eve.hpp"
#include "keyrate.hpp"
#include "security.hpp"
#include "states.hpp"

namespace cadsec {

using Json = nlohmann::ordered_json;

/// Rounds to `digits` significant decimal digits; non-finite values pass.
inline double round_significant(double x, int digits = 9) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

/// JSON number at 9 significant digits; NaN and infinities become null.
inline Json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round_significant(x);
}

// ---------------------------------------------------------------------------
// Channel documents
// ---------------------------------------------------------------------------

using Channel = std::variant<BellDiagonalState, GeneralizedPauliChannel>;

namespace detail {

[[noreturn]] inline void field_error(ErrorCode code, const std::string &path, const std::string &message) {
    throw Error(code, path + ": " + message);
}

inline double read_number(const Json &node, const std::string &path) {
    if (!node.is_number()) field_error(ErrorCode::ParseError, path, "expected a number");
    const double v = node.get<double>();
    if (!std::isfinite(v)) field_error(ErrorCode::ParseError, path, "number is not finite");
    if (v < 0.0) field_error(ErrorCode::NegativeCoefficient, path, "coefficient is negative");
    return v;
}

template <class Build>
auto with_path(const std::string &path, Build &&build) {
    try {
        return build();
    } catch (const Error &e) {
        throw Error(e.code(), path + ": " + e.message());
    }
}

} // namespace detail

inline Channel parse_channel(const Json &doc) {
    if (!doc.is_object()) detail::field_error(ErrorCode::ParseError, "$", "expected an object");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        detail::field_error(ErrorCode::ParseError, "$.kind", "expected \"qubit\" or \"qudit\"");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "qubit") {
        if (!doc.contains("lambdas") || !doc["lambdas"].is_array())
            detail::field_error(ErrorCode::ParseError, "$.lambdas", "expected an array of 4 numbers");
        const Json &arr = doc["lambdas"];
        if (arr.size() != 4)
            detail::field_error(ErrorCode::LengthMismatch, "$.lambdas", "expected 4 entries, got " + std::to_string(arr.size()));
        BellDiagonalState::Coefficients l{};
        for (std::size_t i = 0; i < 4; ++i) l[i] = detail::read_number(arr[i], "$.lambdas[" + std::to_string(i) + "]");
        return detail::with_path("$.lambdas", [&] { return make_bell_diagonal(l); });
    }
    if (kind == "qudit") {
        if (!doc.contains("d") || !doc["d"].is_number_integer())
            detail::field_error(ErrorCode::ParseError, "$.d", "expected an integer");
        const long long d = doc["d"].get<long long>();
        if (d < 2 || d > 4096) detail::field_error(ErrorCode::OutOfRange, "$.d", "dimension must lie in [2, 4096]");
        if (!doc.contains("p") || !doc["p"].is_array())
            detail::field_error(ErrorCode::ParseError, "$.p", "expected a d x d array");
        const Json &rows = doc["p"];
        if (rows.size() != static_cast<std::size_t>(d))
            detail::field_error(ErrorCode::LengthMismatch, "$.p", "expected " + std::to_string(d) + " rows");
        std::vector<std::vector<double>> p(static_cast<std::size_t>(d));
        for (std::size_t m = 0; m < rows.size(); ++m) {
            const std::string row_path = "$.p[" + std::to_string(m) + "]";
            if (!rows[m].is_array() || rows[m].size() != static_cast<std::size_t>(d))
                detail::field_error(ErrorCode::LengthMismatch, row_path, "expected " + std::to_string(d) + " entries");
            for (std::size_t n = 0; n < rows[m].size(); ++n)
                p[m].push_back(detail::read_number(rows[m][n], row_path + "[" + std::to_string(n) + "]"));
        }
        return detail::with_path("$.p", [&] { return make_channel(p); });
    }
    detail::field_error(ErrorCode::ParseError, "$.kind", "unknown kind '" + kind + "'");
}

inline Channel load_channel(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    return parse_channel(doc);
}

inline GeneralizedPauliChannel as_qudit(const Channel &ch) {
    if (const auto *s = std::get_if<BellDiagonalState>(&ch)) return to_channel(*s);
    return std::get<GeneralizedPauliChannel>(ch);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline Json to_json(const BellDiagonalState &s) {
    Json arr = Json::array();
    for (double l : s.lambdas()) arr.push_back(num(l));
    return Json{{"kind", "qubit"}, {"lambdas", arr}};
}

inline Json to_json(const GeneralizedPauliChannel &ch) {
    Json rows = Json::array();
    for (int m = 0; m < ch.dim(); ++m) {
        Json row = Json::array();
        for (int n = 0; n < ch.dim(); ++n) row.push_back(num(ch.p(m, n)));
        rows.push_back(row);
    }
    return Json{{"kind", "qudit"}, {"d", ch.dim()}, {"p", rows}};
}

inline Json to_json(const Channel &ch) {
    return std::visit([](const auto &c) { return to_json(c); }, ch);
}

inline Json to_json(const BellPermutation &p) {
    Json arr = Json::array();
    for (int i : p.image()) arr.push_back(i + 1);
    return arr;
}

inline Json to_json(const SecurityVerdict &v) { return Json{{"secure", v.secure}, {"margin", num(v.margin)}}; }

inline Json to_json(const KeyRateReport &r) {
    Json j{{"N", r.N}, {"d", r.d}, {"i_ab", num(r.i_ab)}, {"i_ae", num(r.i_ae)}, {"rate", num(r.rate)},
           {"method", to_string(r.method)}};
    if (r.q) j["q"] = num(*r.q);
    return j;
}

inline Json to_json(const SpectrumReport &s) {
    Json eig = Json::array();
    for (double e : s.eigenvalues) eig.push_back(num(e));
    Json j{{"eigenvalues", eig}, {"entropy_bits", num(s.entropy_bits)}};
    if (!s.multiplicities.empty()) {
        Json mult = Json::array();
        for (double m : s.multiplicities) mult.push_back(num(m));
        j["multiplicities"] = mult;
    }
    if (std::isfinite(s.deficit_bits)) j["deficit_bits"] = num(s.deficit_bits);
    return j;
}

/// Verdict plus the first N at which Eve's error exceeds Bob's, if any.
inline Json attack_summary(const AttackReport &r) {
    Json j{{"verdict", to_string(r.verdict)}};
    if (!r.records.empty()) {
        j["N_range"] = Json::array({r.records.front().N, r.records.back().N});
        Json first = nullptr;
        for (const auto &rec : r.records) {
            if (rec.eps_eq > rec.eps_B) {
                first = Json{{"N", rec.N}, {"eps_B", num(rec.eps_B)}, {"eps_eq", num(rec.eps_eq)},
                             {"oneway_rate", num(rec.oneway_rate)}};
                break;
            }
        }
        j["first_undecided"] = first;
    }
    return j;
}

inline Json to_json(const AttackReport &r) {
    Json j = attack_summary(r);
    Json recs = Json::array();
    for (const auto &rec : r.records)
        recs.push_back(Json{{"N", rec.N}, {"eps_B", num(rec.eps_B)}, {"eps_eq", num(rec.eps_eq)},
                            {"oneway_rate", num(rec.oneway_rate)}});
    j["records"] = recs;
    return j;
}

inline Json to_json(const CriticalRateReport &r) {
    Json j{{"protocol", to_string(r.protocol)}, {"d", r.d}, {"mode", to_string(r.mode)},
           {"critical_rate", num(r.value)}, {"attack_parameter", num(r.argmin_parameter)},
           {"iterations", r.iterations}};
    if (r.closed_form) {
        j["closed_form"] = num(*r.closed_form);
        j["difference"] = num(r.value - *r.closed_form);
    } else {
        j["closed_form"] = nullptr;
        j["difference"] = nullptr;
    }
    return j;
}

inline Json to_json(const ProportionEstimate &p) {
    return Json{{"estimate", num(p.estimate)}, {"ci99", Json::array({num(p.lower), num(p.upper)})}};
}

inline Json to_json(const SimReport &r) {
    Json counts = Json::array();
    for (auto c : r.error_counts) counts.push_back(c);
    Json j{{"variant", to_string(r.variant)}, {"d", r.d},          {"N", r.N},
           {"trials", r.trials},              {"accepted", r.accepted}, {"error_counts", counts},
           {"seed", r.seed}};
    j["acceptance"] = to_json(proportion_interval(r.accepted, r.trials));
    Json fractions = Json::array();
    for (auto c : r.error_counts) fractions.push_back(to_json(proportion_interval(c, r.accepted)));
    j["class_fractions"] = fractions;
    return j;
}

} // namespace cadsec
