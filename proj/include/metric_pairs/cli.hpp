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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metric_pairs.hpp"
#include "metric_pairs/io.hpp"

namespace metric_pairs::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kVerdictFalse = 1, kInputError = 2, kSizeLimit = 3 };

struct Request {
    std::string verb;
    std::vector<std::string> inputs;
    std::optional<double> resolution, eps, r, big_r;
    std::vector<double> grid;
    std::optional<std::uint64_t> budget;
    bool pseudo = false;
    std::string out;
    std::string format = "json";
};

/// Plain-language statement of what each verb computes; copied into reports.
inline const std::map<std::string, std::string>& definitions() {
    static const std::map<std::string, std::string> d = {
        {"validate", "finite metric: zero diagonal, positive symmetric off-diagonal entries, triangle inequality"},
        {"hausdorff", "max of the two directed max-min distances, per level and summed over the pair or tuple"},
        {"gh", "inf over admissible (pseudo-)gluings of d_H(X,Y) + sum over levels of d_H(A_k,B_k)"},
        {"gh-truncated", "min(1/2, inf of eps admitting an (eps; A, B)-admissible gluing)"},
        {"approx", "maps f: X->Y, g: Y->X with distortion, round trips and subset images all within eps"},
        {"rough-isom", "map from the closed R-ball of A with distortion, subset image and ball density within eps"},
        {"counts", "M, N: fewest open r-balls covering (centres free / in the set); P: most disjoint open "
                   "r-balls; S: largest r-separated subset"},
        {"certify-family", "pi(eps), nu(eps): max over the family of P(eps, .) and N(eps, .) on closed (1/eps)-balls"},
        {"check-lemma", "count transfer under an (eps; A, B)-admissible gluing: M(r+2eps, R-ball of B) <= N(r, R-ball "
                        "of A) for R <= 1/eps; P(r+2eps, (R-2eps)-ball of B) <= P(r, R-ball of A) for R+r <= 1/eps"},
        {"glue", "admissible cross distances on the disjoint union from constraints, approximations, rough "
                 "isometries or matched nets"},
        {"chain", "consecutive gluing of a chain of pairs, last member with reachable subset W as limit proxy"},
        {"isometry", "distance-preserving bijection carrying each distinguished level onto its counterpart"},
    };
    return d;
}

namespace detail {

inline double need(const std::optional<double>& v, const char* name) {
    if (!v) throw Error(ErrorCode::MissingParam, std::string("--") + name + " is required");
    if (!(*v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string("--") + name + " must be positive");
    return *v;
}

inline void need_inputs(const Request& req, std::size_t lo, std::size_t hi) {
    if (req.inputs.size() < lo || req.inputs.size() > hi) {
        throw Error(ErrorCode::MissingParam, req.verb + " takes " + std::to_string(lo) +
                                                 (lo == hi ? "" : " to " + std::to_string(hi)) + " input files");
    }
}

inline SolverOptions options(const Request& req) {
    SolverOptions o;
    if (const char* env = std::getenv("METRIC_PAIRS_BUDGET")) {
        try {
            o.budget = std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "METRIC_PAIRS_BUDGET is not an integer");
        }
    }
    if (req.budget) o.budget = *req.budget;
    return o;
}

inline json labelled_map(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const PartialMap& f) {
    json out = json::object();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i]) out[x.label(i)] = y.label(*f[i]);
    return out;
}

inline json labelled_map(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const IndexMap& f) {
    return labelled_map(x, y, PartialMap(f.begin(), f.end()));
}

inline IndexMap map_from_labels(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const json& j,
                                bool total) {
    PartialMap f(x.size());
    for (const auto& [k, v] : j.items()) {
        auto i = x.index_of(k);
        auto t = y.index_of(v.get<std::string>());
        if (!i || !t) throw Error(ErrorCode::ParseError, "map entry " + k + " uses an unknown label");
        f[*i] = *t;
    }
    IndexMap out(x.size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i] && total) throw Error(ErrorCode::ParseError, "map is missing label " + x.label(i));
        out[i] = f[i].value_or(0);
    }
    return out;
}

inline std::vector<std::size_t> labels_to_indices(const FiniteMetricSpace& s, const json& j) {
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        auto i = s.index_of(v.get<std::string>());
        if (!i) throw Error(ErrorCode::ParseError, "unknown label " + v.get<std::string>());
        out.push_back(*i);
    }
    return out;
}

inline json violation_json(const Violation& v, const std::vector<std::string>& labels) {
    json j{{"kind", std::string(to_string(v.kind))}, {"indices", {v.i, v.j, v.k}}, {"excess", v.excess},
           {"message", describe(v)}};
    json names = json::array();
    for (std::size_t idx : {v.i, v.j, v.k})
        if (idx < labels.size()) names.push_back(labels[idx]);
    j["labels"] = names;
    return j;
}

inline json bracket_json(const DistanceBracket& b) { return io::to_json(b); }

struct Outcome {
    json result;
    int code = kOk;
    std::string csv;  // used when --format csv and the verb has a tabular form
};

// ---- verbs ----------------------------------------------------------------

inline Outcome run_validate(const Request& req) {
    need_inputs(req, 1, 1);
    const auto raw = io::load_raw_space(req.inputs[0]);
    const auto tol = raw.tolerance.value_or(kDefaultRelativeTolerance * max_entry(raw.dist));
    auto v = validate_metric(raw.dist, tol, raw.labels);
    Outcome o;
    json list = json::array();
    for (const auto& item : v.violations) list.push_back(violation_json(item, raw.labels));
    o.result = json{{"ok", v.ok()}, {"points", raw.dist.size()}, {"tolerance", tol}, {"violations", list}};
    o.code = v.ok() ? kOk : kInputError;
    return o;
}

inline Outcome run_hausdorff(const Request& req) {
    need_inputs(req, 2, 3);
    const auto t = io::load_tuple(req.inputs[0]);
    const auto u = io::load_tuple(req.inputs[1]);
    Outcome o;
    if (req.inputs.size() == 2) {
        if (!(t.space == u.space)) {
            throw Error(ErrorCode::DifferentAmbient, "without a gluing both inputs must share one space");
        }
        if (t.levels() != u.levels()) throw Error(ErrorCode::ChainLengthMismatch, "level counts differ");
        json levels = json::array();
        double total = 0.0;
        for (std::size_t k = 0; k < t.levels(); ++k) {
            const double h = hausdorff(t.space, t.chain[k], u.chain[k]);
            levels.push_back(h);
            total += h;
        }
        o.result = json{{"levels", levels}, {"sum", total}};
        return o;
    }
    const auto glue = io::gluing_from_json(io::load_json(req.inputs[2]), fs::path(req.inputs[2]).parent_path(),
                                           req.inputs[2]);
    require_glue_joins(glue, t.space, u.space);
    json levels = json::array();
    for (std::size_t k = 0; k < t.levels(); ++k) levels.push_back(cross_hausdorff(glue, t.chain[k], u.chain[k]));
    o.result = json{{"spaces", cross_hausdorff(glue)}, {"levels", levels}, {"sum", tuple_hausdorff(glue, t, u)}};
    return o;
}

inline Outcome run_gh(const Request& req, bool truncated) {
    need_inputs(req, 2, 2);
    const auto t = io::load_tuple(req.inputs[0]);
    const auto u = io::load_tuple(req.inputs[1]);
    const double res = req.resolution.value_or(1e-3);
    Outcome o;
    o.result = bracket_json(truncated ? gh_truncated_tuple(t, u, res, options(req))
                                      : gh_compact_tuple(t, u, res, options(req)));
    return o;
}

inline Outcome run_approx(const Request& req) {
    need_inputs(req, 2, 2);
    const auto p = io::load_pair(req.inputs[0]);
    const auto q = io::load_pair(req.inputs[1]);
    Outcome o;
    if (!req.eps) {
        auto b = min_approx_eps(p, q, req.resolution.value_or(1e-3), options(req));
        o.result = bracket_json(b);
        o.result["maps"] = json{{"f", labelled_map(p.space, q.space, b.witness->f)},
                                {"g", labelled_map(q.space, p.space, b.witness->g)}};
        return o;
    }
    const double eps = need(req.eps, "eps");
    auto found = approx_search(p, q, eps, options(req));
    o.result = json{{"eps", eps}, {"found", found.has_value()}, {"witness", nullptr}};
    if (found) {
        o.result["witness"] = io::to_json(*found);
        o.result["maps"] = json{{"f", labelled_map(p.space, q.space, found->f)},
                                {"g", labelled_map(q.space, p.space, found->g)}};
        o.result["defect"] = approximation_defect(p, q, found->f, found->g);
    }
    o.code = found ? kOk : kVerdictFalse;
    return o;
}

inline Outcome run_rough(const Request& req) {
    need_inputs(req, 2, 2);
    const auto p = io::load_pair(req.inputs[0]);
    const auto q = io::load_pair(req.inputs[1]);
    const double eps = need(req.eps, "eps"), radius = need(req.big_r, "R");
    auto w = rough_isometry_search(p, q, radius, eps, options(req));
    Outcome o;
    o.result = json{{"eps", eps}, {"R", radius}, {"found", w.has_value()}, {"map", nullptr}};
    if (w) {
        o.result["map"] = labelled_map(p.space, q.space, w->f);
        o.result["indices"] = io::partial_map_to_json(w->f);
    }
    o.code = w ? kOk : kVerdictFalse;
    return o;
}

inline std::vector<double> radii(const Request& req) {
    if (!req.grid.empty()) {
        for (double g : req.grid)
            if (!(g > 0.0)) throw Error(ErrorCode::InvalidArgument, "--grid values must be positive");
        return req.grid;
    }
    return {need(req.r, "r")};
}

inline Outcome run_counts(const Request& req) {
    need_inputs(req, 1, 1);
    const fs::path path = req.inputs[0];
    std::optional<MetricPair> pair;
    if (io::is_csv(path)) {
        auto s = io::load_space(path);
        pair.emplace(s, SubsetRef::full(s.size()));
    } else {
        json j = io::load_json(path);
        if (j.contains("subset")) {
            pair.emplace(io::pair_from_json(j, path.parent_path(), path.string()));
        } else {
            auto s = io::space_from_json(j, path.string());
            pair.emplace(s, SubsetRef::full(s.size()));
        }
    }
    const auto grid = radii(req);
    Outcome o;
    json profiles = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "eps,M,N,P,S\n";
    std::vector<CountingProfile> all;
    for (CountKind k : {CountKind::M, CountKind::N, CountKind::P, CountKind::S}) {
        all.push_back(counting_profile(pair->space, pair->subset, k, grid));
        profiles.push_back(io::to_json(all.back()));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << grid[i];
        for (const auto& p : all) csv << "," << p.samples[i].second;
        csv << "\n";
    }
    o.result = json{{"profiles", profiles}, {"note", "S is reported as 0 when no separated subset exists"}};
    o.csv = csv.str();
    return o;
}

inline Outcome run_certify(const Request& req) {
    if (req.inputs.empty()) throw Error(ErrorCode::MissingParam, "certify-family needs at least one pair file");
    std::vector<MetricPair> family;
    for (const auto& f : req.inputs) family.push_back(io::load_pair(f));
    auto [pi, nu] = family_certificate(family, radii(req));
    Outcome o;
    o.result = json{{"pi", io::to_json(pi)}, {"nu", io::to_json(nu)}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "eps,pi,nu\n";
    for (std::size_t i = 0; i < pi.samples.size(); ++i)
        csv << pi.samples[i].first << "," << pi.samples[i].second << "," << nu.samples[i].second << "\n";
    o.csv = csv.str();
    return o;
}

inline Outcome run_check_lemma(const Request& req) {
    need_inputs(req, 3, 3);
    const auto p = io::load_pair(req.inputs[0]);
    const auto q = io::load_pair(req.inputs[1]);
    const auto glue = io::gluing_from_json(io::load_json(req.inputs[2]), fs::path(req.inputs[2]).parent_path(),
                                           req.inputs[2]);
    auto rep = check_count_transfer(p, q, glue, need(req.eps, "eps"), need(req.r, "r"), need(req.big_r, "R"));
    Outcome o;
    o.result = json{
        {"admissible", rep.admissibility.verdict},
        {"clause1", {{"applicable", rep.clause1_applicable}, {"M_right", rep.m_right}, {"N_left", rep.n_left},
                     {"holds", rep.clause1_holds}, {"M_right_shrunk", rep.m_right_shrunk},
                     {"shrunk_holds", rep.clause1_shrunk_holds}}},
        {"clause2", {{"applicable", rep.clause2_applicable}, {"P_right", rep.p_right}, {"P_left", rep.p_left},
                     {"holds", rep.clause2_holds}}},
        {"verdict", rep.verdict()}};
    o.code = rep.verdict() ? kOk : kVerdictFalse;
    return o;
}

inline Outcome run_glue(const Request& req) {
    need_inputs(req, 1, 1);
    const fs::path path = req.inputs[0];
    const json j = io::load_json(path);
    const auto base = path.parent_path();
    const std::string where = path.string();
    auto side = [&](const char* key) -> MetricPair {
        return io::detail::guarded(where, [&] {
            const json& s = j.at(key);
            if (s.is_string()) {
                const fs::path file = base / s.get<std::string>();
                if (io::is_csv(file)) {
                    auto sp = io::load_space(file);
                    return MetricPair(sp, SubsetRef::full(sp.size()));
                }
                json doc = io::load_json(file);
                if (doc.contains("subset")) return io::pair_from_json(doc, base, where);
                auto sp = io::space_from_json(doc, where);
                return MetricPair(sp, SubsetRef::full(sp.size()));
            }
            if (s.contains("subset")) return io::pair_from_json(s, base, where);
            auto sp = io::space_from_json(s, where);
            return MetricPair(sp, SubsetRef::full(sp.size()));
        });
    };
    const MetricPair left = side("left"), right = side("right");
    auto built = io::detail::guarded(where, [&]() -> std::pair<CrossMetric, std::string> {
        if (j.contains("edges")) {
            std::vector<CrossEdge> edges;
            for (const auto& e : j.at("edges")) {
                auto a = left.space.index_of(e.at(0).get<std::string>());
                auto b = right.space.index_of(e.at(1).get<std::string>());
                if (!a || !b) throw Error(ErrorCode::ParseError, where + ": edge uses an unknown label");
                edges.push_back({*a, *b, e.at(2).get<double>()});
            }
            return {glue_from_constraints(left.space, right.space, edges, req.pseudo || j.value("pseudo", false)),
                    "constraints"};
        }
        if (j.contains("cross")) {
            return {CrossMetric::make(left.space, right.space, j.at("cross").get<Matrix>(), j.value("pseudo", false)),
                    "validated"};
        }
        if (j.contains("net_left") || j.contains("net_right")) {
            return {glue_from_nets(left.space, right.space, labels_to_indices(left.space, j.at("net_left")),
                                   labels_to_indices(right.space, j.at("net_right")), need(req.eps, "eps")),
                    "nets"};
        }
        if (j.contains("map") && req.big_r) {
            PartialMap f(left.space.size());
            for (const auto& [k, v] : j.at("map").items()) {
                auto a = left.space.index_of(k);
                auto b = right.space.index_of(v.get<std::string>());
                if (!a || !b) throw Error(ErrorCode::ParseError, where + ": map uses an unknown label");
                f[*a] = *b;
            }
            return {glue_from_rough_isometry(left.space, right.space, f, left.subset, need(req.eps, "eps"), *req.big_r),
                    "rough_isometry"};
        }
        if (j.contains("map")) {
            return {glue_from_approximation(left.space, right.space,
                                            map_from_labels(left.space, right.space, j.at("map"), true),
                                            need(req.eps, "eps")),
                    "approximation"};
        }
        throw Error(ErrorCode::ParseError, where + ": expected one of edges, cross, map, net_left/net_right");
    });
    Outcome o;
    o.result = json{{"constructor", built.second},
                    {"gluing", io::to_json(built.first)},
                    {"pair_hausdorff", pair_hausdorff(built.first, left, right)}};
    if (req.eps) {
        auto adm = check_eps_admissible(built.first, left.subset, right.subset, *req.eps);
        o.result["eps_admissible"] = adm.verdict;
    }
    return o;
}

inline Outcome run_chain(const Request& req) {
    need_inputs(req, 1, 1);
    const fs::path path = req.inputs[0];
    const auto chain = io::chain_from_json(io::load_json(path), path.parent_path(), path.string());
    const auto proxy = limit_proxy(chain);
    const auto rep = chain_convergence_report(chain, proxy, req.resolution.value_or(1e-3), options(req));
    json members = json::array();
    for (const auto& m : rep.members) {
        members.push_back(json{{"index", m.index},
                               {"compact", {{"lo", m.compact.lo}, {"hi", m.compact.hi}}},
                               {"truncated", {{"lo", m.truncated.lo}, {"hi", m.truncated.hi}}},
                               {"tail_sum", m.tail_sum},
                               {"ambient_hausdorff", m.ambient_hausdorff},
                               {"dominated", m.dominated},
                               {"dominated_twice", m.dominated_twice}});
    }
    json paths = json::array();
    for (const auto& p : proxy.paths) paths.push_back(p);
    Outcome o;
    o.result = json{{"W", io::subset_to_json(proxy.z_pair.space, proxy.z_pair.subset)},
                    {"paths", paths},
                    {"members", members},
                    {"note", rep.surrogate_note}};
    return o;
}

inline Outcome run_isometry(const Request& req) {
    need_inputs(req, 2, 2);
    const auto t = io::load_tuple(req.inputs[0]);
    const auto u = io::load_tuple(req.inputs[1]);
    auto f = tuple_isometry_search(t, u, options(req));
    Outcome o;
    o.result = json{{"found", f.has_value()}, {"map", nullptr}};
    if (f) o.result["map"] = labelled_map(t.space, u.space, *f);
    o.code = f ? kOk : kVerdictFalse;
    return o;
}

inline Outcome dispatch(const Request& req) {
    if (req.verb == "validate") return run_validate(req);
    if (req.verb == "hausdorff") return run_hausdorff(req);
    if (req.verb == "gh") return run_gh(req, false);
    if (req.verb == "gh-truncated") return run_gh(req, true);
    if (req.verb == "approx") return run_approx(req);
    if (req.verb == "rough-isom") return run_rough(req);
    if (req.verb == "counts") return run_counts(req);
    if (req.verb == "certify-family") return run_certify(req);
    if (req.verb == "check-lemma") return run_check_lemma(req);
    if (req.verb == "glue") return run_glue(req);
    if (req.verb == "chain") return run_chain(req);
    if (req.verb == "isometry") return run_isometry(req);
    throw Error(ErrorCode::UnknownVerb, "'" + req.verb + "'");
}

inline json params_json(const Request& req) {
    json p = json::object();
    if (req.resolution) p["resolution"] = *req.resolution;
    if (req.eps) p["eps"] = *req.eps;
    if (req.r) p["r"] = *req.r;
    if (req.big_r) p["R"] = *req.big_r;
    if (!req.grid.empty()) p["grid"] = req.grid;
    if (req.budget) p["budget"] = *req.budget;
    if (req.pseudo) p["pseudo"] = true;
    p["inputs"] = req.inputs;
    return p;
}

inline int exit_code_for(ErrorCode c) {
    return c == ErrorCode::SizeLimitExceeded ? kSizeLimit : kInputError;
}

}  // namespace detail

/// Executes one request and writes the report to `out` (or to req.out).
/// Diagnostics for failures go to `err` as well as into the report.
inline int run(const Request& req, std::ostream& out, std::ostream& err) {
    json report{{"verb", req.verb}, {"params", detail::params_json(req)}};
    if (auto it = definitions().find(req.verb); it != definitions().end()) report["definition"] = it->second;
    int code = kOk;
    std::string csv;
    try {
        auto o = detail::dispatch(req);
        report["result"] = std::move(o.result);
        code = o.code;
        csv = std::move(o.csv);
    } catch (const Error& e) {
        report["error"] = json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"indices", e.indices()}};
        err << e.what() << "\n";
        code = detail::exit_code_for(e.code());
    } catch (const std::exception& e) {
        report["error"] = json{{"code", "InvalidArgument"}, {"message", e.what()}, {"indices", json::array()}};
        err << e.what() << "\n";
        code = kInputError;
    }
    const std::string text = (req.format == "csv" && !csv.empty() && !report.contains("error"))
                                 ? csv
                                 : report.dump(2) + "\n";
    if (req.out.empty()) {
        out << text;
    } else {
        io::write_text(req.out, text);
    }
    return code;
}

/// Parses argv with CLI11 and runs the request.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"metric_pairs: distances, approximations and counts for finite metric pairs"};
    Request req;
    double resolution = 0, eps = 0, r = 0, big_r = 0;
    std::uint64_t budget = 0;
    app.add_option("verb", req.verb, "validate | hausdorff | gh | gh-truncated | approx | rough-isom | counts | "
                                     "certify-family | check-lemma | glue | chain | isometry")
        ->required();
    app.add_option("inputs", req.inputs, "input documents");
    auto* o_res = app.add_option("--resolution", resolution, "bracket width for solvers");
    auto* o_eps = app.add_option("--eps", eps, "epsilon");
    auto* o_r = app.add_option("--r", r, "radius r");
    auto* o_big_r = app.add_option("--R", big_r, "radius R");
    app.add_option("--grid", req.grid, "comma separated radii")->delimiter(',');
    auto* o_budget = app.add_option("--budget", budget, "search node cap");
    app.add_flag("--pseudo", req.pseudo, "allow zero cross distances");
    app.add_option("--out", req.out, "write the report here instead of stdout");
    app.add_option("--format", req.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }
    if (o_res->count()) req.resolution = resolution;
    if (o_eps->count()) req.eps = eps;
    if (o_r->count()) req.r = r;
    if (o_big_r->count()) req.big_r = big_r;
    if (o_budget->count()) req.budget = budget;
    return run(req, out, err);
}

}  // namespace metric_pairs::cli
