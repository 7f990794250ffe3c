/*
 * Copyright 2026 The metric_pairs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metric_pairs/chain_lab.hpp"
#include "metric_pairs/counting.hpp"
#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/error.hpp"
#include "metric_pairs/gh_solver.hpp"
#include "metric_pairs/hausdorff.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs::io {

using json = nlohmann::json;

/// Documents:
///   space    {labels, dist, tolerance?}  or CSV with a header row of labels
///   pair     {space, subset: [labels]}
///   tuple    {space, chain: [[labels], ...]}   innermost level first
///   gluing   {left, right, cross, pseudo}
///   chain    {pairs: [pair], glues: [{cross, pseudo}], eps_budget}
///   bracket  {lo, hi, resolution, lo_exclusive, certificate, witness, lower_reason}
///   profile  {kind, samples: [[eps, value]]}  or CSV "eps,<kind>"
/// Wherever a space is expected, a string is read as a path relative to the
/// enclosing document.

inline Error parse_error(const std::string& where, const std::string& what) {
    return Error(ErrorCode::ParseError, where + ": " + what);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << text;
}

inline json parse_json(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(where, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline json load_json(const std::filesystem::path& path) { return parse_json(read_text(path), path.string()); }

namespace detail {

/// Runs a conversion and rewrites nlohmann type errors as ParseError.
template <class F>
auto guarded(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw parse_error(where, e.what());
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

inline double parse_number(const std::string& cell, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw parse_error(where, "not a number: '" + cell + "'");
    }
}

}  // namespace detail

// ---- spaces ---------------------------------------------------------------

inline json to_json(const FiniteMetricSpace& s) {
    return json{{"labels", s.labels()}, {"dist", s.matrix()}, {"tolerance", s.tolerance()}};
}

/// Parses without validating: the raw matrix, labels and tolerance.
struct RawSpace {
    Matrix dist;
    std::vector<std::string> labels;
    std::optional<double> tolerance;
};

inline RawSpace raw_space_from_json(const json& j, const std::string& where) {
    return detail::guarded(where, [&] {
        RawSpace r;
        r.dist = j.at("dist").get<Matrix>();
        if (j.contains("labels")) r.labels = j.at("labels").get<std::vector<std::string>>();
        if (j.contains("tolerance") && !j.at("tolerance").is_null()) r.tolerance = j.at("tolerance").get<double>();
        return r;
    });
}

inline RawSpace raw_space_from_csv(const std::string& text, const std::string& where) {
    std::istringstream in(text);
    std::string line;
    RawSpace r;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = detail::split_csv_line(line);
        if (r.labels.empty()) {
            r.labels = std::move(cells);
            continue;
        }
        std::vector<double> values;
        for (std::size_t c = 0; c < cells.size(); ++c)
            values.push_back(detail::parse_number(cells[c], where + ":" + std::to_string(row) + ":" + std::to_string(c + 1)));
        r.dist.push_back(std::move(values));
    }
    if (r.labels.empty()) throw parse_error(where, "missing header row");
    return r;
}

inline FiniteMetricSpace space_from_raw(const RawSpace& r) {
    return FiniteMetricSpace::from_matrix(r.dist, r.labels, r.tolerance);
}

inline FiniteMetricSpace space_from_json(const json& j, const std::string& where = "<space>") {
    return space_from_raw(raw_space_from_json(j, where));
}

inline std::string space_to_csv(const FiniteMetricSpace& s) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s.label(i);
    out << "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) out << (j ? "," : "") << s(i, j);
        out << "\n";
    }
    return out.str();
}

inline bool is_csv(const std::filesystem::path& p) { return p.extension() == ".csv"; }

inline RawSpace load_raw_space(const std::filesystem::path& path) {
    if (is_csv(path)) return raw_space_from_csv(read_text(path), path.string());
    return raw_space_from_json(load_json(path), path.string());
}

inline FiniteMetricSpace load_space(const std::filesystem::path& path) { return space_from_raw(load_raw_space(path)); }

/// A space given inline or as a path relative to `base`.
inline FiniteMetricSpace space_ref(const json& j, const std::filesystem::path& base, const std::string& where) {
    if (j.is_string()) return load_space(base / j.get<std::string>());
    return space_from_json(j, where);
}

// ---- subsets, pairs, tuples -----------------------------------------------

inline json subset_to_json(const FiniteMetricSpace& s, const SubsetRef& a) {
    json out = json::array();
    for (std::size_t i : a) out.push_back(s.label(i));
    return out;
}

inline SubsetRef subset_from_json(const FiniteMetricSpace& s, const json& j, const std::string& where) {
    return detail::guarded(where, [&] {
        std::vector<std::size_t> idx;
        for (const auto& item : j) {
            auto label = item.get<std::string>();
            auto i = s.index_of(label);
            if (!i) throw Error(ErrorCode::InvalidSubset, where + ": unknown label '" + label + "'");
            idx.push_back(*i);
        }
        return SubsetRef(std::move(idx));
    });
}

inline json to_json(const MetricPair& p) {
    return json{{"space", to_json(p.space)}, {"subset", subset_to_json(p.space, p.subset)}};
}

inline MetricPair pair_from_json(const json& j, const std::filesystem::path& base = {},
                                 const std::string& where = "<pair>") {
    return detail::guarded(where, [&] {
        auto space = space_ref(j.at("space"), base, where);
        auto subset = subset_from_json(space, j.at("subset"), where);
        return MetricPair(std::move(space), std::move(subset));
    });
}

inline json to_json(const MetricTuple& t) {
    json chain = json::array();
    for (const auto& level : t.chain) chain.push_back(subset_to_json(t.space, level));
    return json{{"space", to_json(t.space)}, {"chain", chain}};
}

inline MetricTuple tuple_from_json(const json& j, const std::filesystem::path& base = {},
                                   const std::string& where = "<tuple>") {
    return detail::guarded(where, [&] {
        auto space = space_ref(j.at("space"), base, where);
        std::vector<SubsetRef> chain;
        for (const auto& level : j.at("chain")) chain.push_back(subset_from_json(space, level, where));
        return MetricTuple(std::move(space), std::move(chain));
    });
}

/// A pair document is also accepted where a tuple is expected.
inline MetricTuple load_tuple(const std::filesystem::path& path) {
    json j = load_json(path);
    auto base = path.parent_path();
    if (j.contains("chain")) return tuple_from_json(j, base, path.string());
    return MetricTuple(pair_from_json(j, base, path.string()));
}

inline MetricPair load_pair(const std::filesystem::path& path) {
    return pair_from_json(load_json(path), path.parent_path(), path.string());
}

// ---- gluings --------------------------------------------------------------

inline json to_json(const CrossMetric& g) {
    return json{{"left", to_json(g.left())}, {"right", to_json(g.right())}, {"cross", g.cross_matrix()},
                {"pseudo", g.pseudo()}};
}

inline CrossMetric gluing_from_json(const json& j, const std::filesystem::path& base = {},
                                    const std::string& where = "<gluing>") {
    return detail::guarded(where, [&] {
        return CrossMetric::make(space_ref(j.at("left"), base, where), space_ref(j.at("right"), base, where),
                                 j.at("cross").get<Matrix>(), j.value("pseudo", false));
    });
}

// ---- results --------------------------------------------------------------

inline json to_json(const ApproximationPair& a) { return json{{"f", a.f}, {"g", a.g}, {"eps", a.eps}}; }

inline ApproximationPair approximation_from_json(const json& j, const std::string& where = "<witness>") {
    return detail::guarded(where, [&] {
        return ApproximationPair{j.at("f").get<IndexMap>(), j.at("g").get<IndexMap>(), j.at("eps").get<double>()};
    });
}

inline json to_json(const DistanceBracket& b) {
    json out{{"lo", b.lo},
             {"hi", b.hi},
             {"resolution", b.resolution},
             {"lo_exclusive", b.lo_exclusive},
             {"certificate", nullptr},
             {"witness", nullptr},
             {"lower_reason", b.lower_reason}};
    if (b.certificate) out["certificate"] = to_json(*b.certificate);
    if (b.witness) out["witness"] = to_json(*b.witness);
    return out;
}

inline DistanceBracket bracket_from_json(const json& j, const std::string& where = "<bracket>") {
    return detail::guarded(where, [&] {
        DistanceBracket b;
        b.lo = j.at("lo").get<double>();
        b.hi = j.at("hi").get<double>();
        b.resolution = j.at("resolution").get<double>();
        b.lo_exclusive = j.value("lo_exclusive", false);
        b.lower_reason = j.value("lower_reason", std::string());
        if (j.contains("certificate") && !j.at("certificate").is_null())
            b.certificate = gluing_from_json(j.at("certificate"), {}, where);
        if (j.contains("witness") && !j.at("witness").is_null())
            b.witness = approximation_from_json(j.at("witness"), where);
        return b;
    });
}

inline json partial_map_to_json(const PartialMap& f) {
    json out = json::array();
    for (const auto& v : f) out.push_back(v ? json(*v) : json(nullptr));
    return out;
}

inline PartialMap partial_map_from_json(const json& j) {
    PartialMap f;
    for (const auto& v : j) f.push_back(v.is_null() ? std::nullopt : std::optional<std::size_t>(v.get<std::size_t>()));
    return f;
}

// ---- profiles -------------------------------------------------------------

inline CountKind kind_from_string(const std::string& s) {
    for (CountKind k : {CountKind::M, CountKind::N, CountKind::P, CountKind::S, CountKind::Pi, CountKind::Nu})
        if (s == to_string(k)) return k;
    throw Error(ErrorCode::ParseError, "unknown profile kind '" + s + "'");
}

inline json to_json(const CountingProfile& p) {
    json samples = json::array();
    for (const auto& [eps, v] : p.samples) samples.push_back(json::array({eps, v}));
    return json{{"kind", to_string(p.kind)}, {"samples", samples}};
}

inline CountingProfile profile_from_json(const json& j, const std::string& where = "<profile>") {
    return detail::guarded(where, [&] {
        CountingProfile p{kind_from_string(j.at("kind").get<std::string>()), {}};
        for (const auto& s : j.at("samples")) p.samples.emplace_back(s.at(0).get<double>(), s.at(1).get<std::uint64_t>());
        return p;
    });
}

inline std::string profile_to_csv(const CountingProfile& p) {
    std::ostringstream out;
    out.precision(17);
    out << "eps," << to_string(p.kind) << "\n";
    for (const auto& [eps, v] : p.samples) out << eps << "," << v << "\n";
    return out.str();
}

inline CountingProfile profile_from_csv(const std::string& text, const std::string& where = "<profile>") {
    std::istringstream in(text);
    std::string line;
    std::optional<CountingProfile> p;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = detail::split_csv_line(line);
        const std::string at = where + ":" + std::to_string(row);
        if (cells.size() != 2) throw parse_error(at, "expected two columns");
        if (!p) {
            if (cells[0] != "eps") throw parse_error(at, "header must start with 'eps'");
            p = CountingProfile{kind_from_string(cells[1]), {}};
            continue;
        }
        const double v = detail::parse_number(cells[1], at);
        if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) throw parse_error(at, "count must be a nonnegative integer");
        p->samples.emplace_back(detail::parse_number(cells[0], at), static_cast<std::uint64_t>(v));
    }
    if (!p) throw parse_error(where, "missing header row");
    return *p;
}

// ---- chains ---------------------------------------------------------------

inline json to_json(const ChainGluing& c) {
    json pairs = json::array(), glues = json::array();
    for (const auto& p : c.pairs()) pairs.push_back(to_json(p));
    for (const auto& g : c.glues()) glues.push_back(json{{"cross", g.cross_matrix()}, {"pseudo", g.pseudo()}});
    return json{{"pairs", pairs}, {"glues", glues}, {"eps_budget", c.eps_budget()}};
}

inline ChainGluing chain_from_json(const json& j, const std::filesystem::path& base = {},
                                   const std::string& where = "<chain>") {
    return detail::guarded(where, [&] {
        std::vector<MetricPair> pairs;
        for (const auto& p : j.at("pairs")) {
            if (p.is_string()) {
                pairs.push_back(load_pair(base / p.get<std::string>()));
            } else {
                pairs.push_back(pair_from_json(p, base, where));
            }
        }
        const auto& gj = j.at("glues");
        if (gj.size() + 1 != pairs.size()) {
            throw Error(ErrorCode::LengthMismatch, where + ": glue count does not match pair count");
        }
        std::vector<CrossMetric> glues;
        for (std::size_t i = 0; i < gj.size(); ++i) {
            // build_chain validates, naming a shortcut when that is the fault.
            glues.push_back(CrossMetric::unchecked(pairs[i].space, pairs[i + 1].space,
                                                   gj[i].at("cross").get<Matrix>(), gj[i].value("pseudo", false)));
        }
        return build_chain(std::move(pairs), std::move(glues), j.at("eps_budget").get<std::vector<double>>());
    });
}

}  // namespace metric_pairs::io
