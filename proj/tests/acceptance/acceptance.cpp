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
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// line fails. Every suite uses its own fixed seed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "metric_pairs.hpp"

using namespace metric_pairs;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kRes = 1e-3;

struct Line {
    std::string name;
    bool pass = true;
    std::string detail;
};

std::vector<Line> g_lines;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const std::string& name, bool pass, const std::string& detail) {
    g_lines.push_back({name, pass, detail});
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- generators ---------------------------------------------------------

/// Shortest-path closure of a complete graph with weights in [0.1, 10].
FiniteMetricSpace graph_metric(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, u(rng)});
    return shortest_path_closure(WeightedGraph(n, edges));
}

using Points = std::vector<std::pair<double, double>>;

Points random_points(std::mt19937_64& rng, std::size_t n, double side) {
    std::uniform_real_distribution<double> u(0.0, side);
    Points p(n);
    for (auto& q : p) q = {u(rng), u(rng)};
    return p;
}

Points jitter(std::mt19937_64& rng, const Points& p, double radius) {
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI), len(0.0, radius);
    Points out = p;
    for (auto& q : out) {
        const double a = ang(rng), l = len(rng);
        q.first += l * std::cos(a);
        q.second += l * std::sin(a);
    }
    return out;
}

FiniteMetricSpace euclid(const Points& p) {
    Matrix m(p.size(), std::vector<double>(p.size(), 0.0));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            m[i][j] = std::hypot(p[i].first - p[j].first, p[i].second - p[j].second);
    return FiniteMetricSpace::from_matrix(m);
}

SubsetRef random_subset(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (rng() % 2) idx.push_back(i);
    if (idx.empty()) idx.push_back(rng() % n);
    return SubsetRef(idx);
}

MetricPair random_pair(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    const std::size_t n = lo + rng() % (hi - lo + 1);
    return {graph_metric(rng, n), random_subset(rng, n)};
}

/// Copy of p with points renumbered by a random permutation.
MetricPair shuffled(std::mt19937_64& rng, const MetricPair& p) {
    const std::size_t n = p.space.size();
    std::vector<std::size_t> perm(n), inv(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;
    Matrix m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = p.space(perm[i], perm[j]);
    std::vector<std::size_t> a;
    for (std::size_t i : p.subset) a.push_back(inv[i]);
    return {FiniteMetricSpace::from_matrix(m), SubsetRef(a)};
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double tau_of(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return std::max(a.tolerance(), b.tolerance());
}

// ---- suites -------------------------------------------------------------

void metric_axioms() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    int sym_bad = 0, tri_bad = 0, triples = 0;
    for (; triples < 100; ++triples) {
        MetricPair p[3] = {random_pair(rng, 3, 5), random_pair(rng, 3, 5), random_pair(rng, 3, 5)};
        DistanceBracket d[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                d[i][j] = gh_compact_pair(p[i], p[j], kRes);
                d[j][i] = gh_compact_pair(p[j], p[i], kRes);
                if (d[i][j].lo != d[j][i].lo || d[i][j].hi != d[j][i].hi) ++sym_bad;
            }
        }
        double tau = std::max({p[0].space.tolerance(), p[1].space.tolerance(), p[2].space.tolerance()});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (i != j && j != k && i != k && d[i][k].lo > d[i][j].hi + d[j][k].hi + 2 * kRes + 2 * tau)
                        ++tri_bad;
    }
    int mismatch = 0, iso = 0;
    for (int t = 0; t < 50; ++t) {
        auto p = random_pair(rng, 3, 5);
        MetricPair q = p;
        switch (t % 3) {
            case 0: q = shuffled(rng, p); break;
            case 1: q = random_pair(rng, p.space.size(), p.space.size()); break;
            default: {
                // same points, subset picked independently
                q = shuffled(rng, MetricPair{p.space, random_subset(rng, p.space.size())});
            }
        }
        const bool zero = gh_compact_pair(p, q, kRes).contains_zero();
        const bool found = pair_isometry_search(p, q).has_value();
        iso += found;
        mismatch += zero != found;
    }
    const double secs = seconds_since(t0);
    report("metric-axioms", sym_bad == 0 && tri_bad == 0 && mismatch == 0 && secs <= 60.0,
           fmt("%d triples, symmetry violations %d, triangle violations %d; 50 planted (%d isometric), "
               "zero/isometry mismatches %d; %.1f s (limit 60)",
               triples, sym_bad, tri_bad, iso, mismatch, secs));
}

std::vector<std::tuple<MetricPair, MetricPair, ApproximationPair>> g_found_pairs;

void sandwich() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(202);
    int bad_search = 0, bad_bound = 0;
    for (int t = 0; t < 200; ++t) {
        auto p = random_pair(rng, 2, 4), q = random_pair(rng, 2, 4);
        const double e = gh_compact_pair(p, q, kRes).hi;
        auto w = approx_search(p, q, 2 * e + 1e-3);
        if (!w) {
            ++bad_search;
        } else {
            g_found_pairs.emplace_back(p, q, *w);
        }
        auto m = min_approx_eps(p, q, kRes);
        if (e > 4 * m.hi + 1e-3) ++bad_bound;
        if (m.witness && m.hi > 0.0) g_found_pairs.emplace_back(p, q, *m.witness);
    }
    const double secs = seconds_since(t0);
    report("sandwich", bad_search == 0 && bad_bound == 0 && secs <= 120.0,
           fmt("200 instances, approx_search(2e + 1e-3) failures %d, gh > 4 eps* + 1e-3 violations %d; %.1f s "
               "(limit 120)",
               bad_search, bad_bound, secs));
}

void gluing_constructors() {
    int invalid = 0, offset_bad = 0, bound_bad = 0, checked = 0;
    for (const auto& [p, q, a] : g_found_pairs) {
        if (!(a.eps > 0.0)) continue;
        ++checked;
        const double tau = tau_of(p.space, q.space);
        try {
            auto g = glue_from_approximation(p.space, q.space, a.f, a.eps);
            for (std::size_t x = 0; x < p.space.size(); ++x)
                if (g(x, a.f[x]) != a.eps / 2.0) ++offset_bad;
            if (pair_hausdorff(g, p, q) > 4 * a.eps + 4 * tau) ++bound_bad;
        } catch (const Error&) {
            ++invalid;
        }
    }
    report("gluing-constructors", checked > 0 && invalid == 0 && offset_bad == 0 && bound_bad == 0,
           fmt("%d approximation pairs from the sandwich suite; invalid gluings %d, delta(x, f x) != eps/2 %d, "
               "pair_hausdorff > 4 eps %d",
               checked, invalid, offset_bad, bound_bad));
}

/// Checks the seven net hypotheses with open eps-balls; the first k net
/// points serve the subset clauses.
bool net_hypotheses(const MetricPair& p, const MetricPair& q, const std::vector<std::size_t>& xs,
                    const std::vector<std::size_t>& ys, std::size_t k, double eps) {
    auto covered = [&](const FiniteMetricSpace& s, const SubsetRef& set, const std::vector<std::size_t>& net,
                       std::size_t upto) {
        for (std::size_t x : set) {
            bool hit = false;
            for (std::size_t i = 0; i < upto && !hit; ++i) hit = s(x, net[i]) < eps;
            if (!hit) return false;
        }
        return true;
    };
    auto touches = [&](const FiniteMetricSpace& s, const SubsetRef& set, const std::vector<std::size_t>& net) {
        for (std::size_t i = 0; i < k; ++i)
            if (s.distance_to(net[i], set) >= eps) return false;
        return true;
    };
    if (!covered(p.space, *ball(p.space, p.subset, 1.0 / (2 * eps), BallKind::Open), xs, xs.size())) return false;
    if (!covered(q.space, *ball(q.space, q.subset, 1.0 / (2 * eps), BallKind::Open), ys, ys.size())) return false;
    if (!covered(p.space, p.subset, xs, k) || !touches(p.space, p.subset, xs)) return false;
    if (!covered(q.space, q.subset, ys, k) || !touches(q.space, q.subset, ys)) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (std::abs(p.space(xs[i], xs[j]) - q.space(ys[i], ys[j])) > eps) return false;
    return true;
}

void net_lemma() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(303);
    int built = 0, bad = 0, attempts = 0;
    double worst = -1.0;
    while (built < 50 && attempts < 5000) {
        ++attempts;
        const double eps = uniform(rng, 0.05, 0.15);
        const std::size_t n = 3 + rng() % 3;
        auto pts = random_points(rng, n, 2.0);
        auto moved = jitter(rng, pts, eps / 4);
        auto a = random_subset(rng, n);
        MetricPair p{euclid(pts), a}, q{euclid(moved), a};
        // greedy open eps-net: points of A first, then the rest of X
        std::vector<std::size_t> xs;
        auto greedy = [&](const std::vector<std::size_t>& pool) {
            for (std::size_t x : pool) {
                bool hit = false;
                for (std::size_t c : xs) hit = hit || p.space(x, c) < eps;
                if (!hit) xs.push_back(x);
            }
        };
        greedy(a.indices());
        const std::size_t k = xs.size();
        greedy(SubsetRef::full(n).indices());
        if (!net_hypotheses(p, q, xs, xs, k, eps)) continue;
        ++built;
        auto b = gh_truncated_pair(p, q, kRes);
        worst = std::max(worst, b.hi - 3 * eps);
        if (b.hi > 3 * eps + kRes) ++bad;
    }
    report("net-lemma", built == 50 && bad == 0,
           fmt("%d instances meeting all seven hypotheses (%d drawn), hi > 3 eps + res: %d, max(hi - 3 eps) = %.4g; "
               "%.1f s",
               built, attempts, bad, worst, seconds_since(t0)));
}

void rough_isometry() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(404);
    int found = 0, bad = 0, attempts = 0;
    while (found < 50 && attempts < 2000) {
        ++attempts;
        const double eps = uniform(rng, 0.05, 0.15), radius = eps + uniform(rng, 2.0, 6.0);
        const std::size_t n = 3 + rng() % 3;
        auto pts = random_points(rng, n, 4.0);
        auto a = random_subset(rng, n);
        MetricPair p{euclid(pts), a}, q{euclid(jitter(rng, pts, eps / 3)), a};
        auto w = rough_isometry_search(p, q, radius, eps);
        if (!w) continue;
        ++found;
        auto b = gh_truncated_pair(p, q, kRes);
        if (!(b.hi < std::max(3 * eps, 1.0 / (radius - eps)) + kRes)) ++bad;
    }
    report("rough-isometry", found == 50 && bad == 0,
           fmt("%d witnesses (%d draws), gh_truncated hi >= max(3 eps, 1/(R - eps)) + res: %d; %.1f s", found,
               attempts, bad, seconds_since(t0)));
}

void comparison() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(505);
    int mono_bad = 0, transfer_bad = 0;
    for (int t = 0; t < 100; ++t) {
        auto p = random_pair(rng, 2, 4), q = random_pair(rng, 2, 4);
        MetricPair pf{p.space, SubsetRef::full(p.space.size())}, qf{q.space, SubsetRef::full(q.space.size())};
        auto plain2 = gh_compact_pair(pf, qf, kRes);
        const double plain_lo = plain2.lo / 2, plain_hi = plain2.hi / 2;
        auto pair = gh_compact_pair(p, q, kRes);
        if (plain_lo > pair.hi + kRes) ++mono_bad;
        for (int n : {1, 2, 5, 10}) {
            auto bn = transfer_subset(*plain2.certificate, p.subset, n);
            auto moved = gh_compact_pair(p, MetricPair{q.space, bn}, kRes);
            if (moved.hi > 2 * plain_hi + 2.0 / n + kRes) ++transfer_bad;
        }
    }
    report("comparison", mono_bad == 0 && transfer_bad == 0,
           fmt("100 instances, plain > pair + res: %d, transfer violations over n in {1,2,5,10}: %d; %.1f s",
               mono_bad, transfer_bad, seconds_since(t0)));
}

void counting() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(606);
    int np_bad = 0, mn_bad = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng() % 11;
        auto s = euclid(random_points(rng, n, 4.0));
        auto a = random_subset(rng, n);
        const double eps = uniform(rng, 0.1, 1.5);
        auto b = closed_ball(s, a, 1.0 / eps);
        if (covering_inner(s, b, eps) > packing(s, b, eps / 2)) ++np_bad;
    }
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng() % 11;
        auto s = euclid(random_points(rng, n, 4.0));
        auto a = random_subset(rng, n);
        const double r = uniform(rng, 0.1, 3.0);
        if (covering_outer(s, a, r) > covering_inner(s, a, r)) ++mn_bad;
    }
    int glued = 0, draws = 0, c1_bad = 0, c2_bad = 0, c1_shrunk_bad = 0, c1_applied = 0, c2_applied = 0;
    while (glued < 100 && draws < 5000) {
        ++draws;
        const std::size_t n = 3 + rng() % 4;
        auto pts = random_points(rng, n, 3.0);
        auto moved = jitter(rng, pts, 0.05);
        auto a = random_subset(rng, n);
        MetricPair p{euclid(pts), a}, q{euclid(moved), a};
        IndexMap id(n);
        std::iota(id.begin(), id.end(), 0);
        const double eps0 = std::max(distortion(p.space, q.space, id), 1e-3);
        auto g = glue_from_approximation(p.space, q.space, id, eps0);
        const double eps = uniform(rng, eps0, 0.45);
        if (!check_eps_admissible(g, p.subset, q.subset, eps).verdict) continue;
        const double r = uniform(rng, 0.05, 1.0), radius = uniform(rng, 0.5, 1.0 / eps);
        auto rep = check_count_transfer(p, q, g, eps, r, radius);
        ++glued;
        c1_applied += rep.clause1_applicable;
        c2_applied += rep.clause2_applicable;
        c1_bad += !rep.clause1_holds;
        c1_shrunk_bad += !rep.clause1_shrunk_holds;
        c2_bad += !rep.clause2_holds;
    }
    const double secs = seconds_since(t0);
    report("counting", np_bad == 0 && mn_bad == 0 && glued == 100 && c1_bad == 0 && c2_bad == 0 && secs <= 60.0,
           fmt("N(eps) > P(eps/2) on closed 1/eps-balls: %d/500; M > N: %d/500; count transfer on %d admissible "
               "gluings: covering clause fails %d/%d (with the right ball shrunk to R - 2 eps: %d), packing clause "
               "fails %d/%d; %.1f s (limit 60)",
               np_bad, mn_bad, glued, c1_bad, c1_applied, c1_shrunk_bad, c2_bad, c2_applied, secs));
}

void ball_lemma() {
    std::mt19937_64 rng(707);
    int comp_bad = 0, haus_bad = 0, cases = 0;
    for (double h : {0.1, 0.01}) {
        const std::size_t n = static_cast<std::size_t>(std::lround(3.0 / h)) + 1;  // [0, 3]
        auto s = shortest_path_closure(WeightedGraph::path(n, h));
        for (int t = 0; t < 40; ++t) {
            ++cases;
            std::vector<std::size_t> ai, bi;
            for (int k = 0; k < 3; ++k) ai.push_back(rng() % n), bi.push_back(rng() % n);
            SubsetRef a(ai), b(bi);
            const double r = uniform(rng, 0.05, 1.0), q = uniform(rng, 0.05, 1.0);
            auto inner = *ball(s, a, q, BallKind::Open);
            auto composed = *ball(s, inner, r, BallKind::Open);
            auto direct = *ball(s, a, r + q, BallKind::Open);
            for (std::size_t x = 0; x < n; ++x) {
                if (composed.contains(x) != direct.contains(x) &&
                    std::abs(s.distance_to(x, a) - (r + q)) > h + 1e-9)
                    ++comp_bad;
            }
            const double lhs = hausdorff(s, *ball(s, a, r, BallKind::Open), *ball(s, b, q, BallKind::Open));
            if (lhs > hausdorff(s, a, b) + std::abs(r - q) + h + 1e-9) ++haus_bad;
        }
    }
    report("ball-lemma", comp_bad == 0 && haus_bad == 0,
           fmt("%d cases on path graphs of [0,3] (h = 0.1, 0.01): composition mismatches beyond one step %d, "
               "Hausdorff bound violations %d",
               cases, comp_bad, haus_bad));
}

void chain_lab() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(808);
    auto pts = random_points(rng, 4, 3.0);
    MetricPair member{euclid(pts), SubsetRef({0, 2})};
    std::vector<MetricPair> pairs(6, member);
    std::vector<CrossMetric> glues;
    std::vector<double> budgets;
    for (std::size_t i = 1; i < 6; ++i) {
        const double c = std::pow(2.0, -double(i));
        Matrix m(4, std::vector<double>(4));
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = 0; y < 4; ++y) m[x][y] = member.space(x, y) + c;
        glues.push_back(CrossMetric::make(member.space, member.space, m));
        budgets.push_back(c);
    }
    auto chain = build_chain(pairs, glues, budgets);
    auto proxy = limit_proxy(chain);
    const bool iso = pair_isometry_search(member, proxy.z_pair).has_value();
    auto rep = chain_convergence_report(chain, proxy, kRes);
    int undominated = 0;
    for (const auto& m : rep.members)
        if (m.compact.hi > 2 * std::pow(2.0, -double(m.index)) + kRes) ++undominated;
    int rejected = 0, planted = 0;
    for (int t = 0; t < 10; ++t) {
        std::vector<MetricPair> ps;
        for (int i = 0; i < 4; ++i) {
            const std::size_t n = 3 + rng() % 3;
            ps.push_back({euclid(random_points(rng, n, 3.0)), SubsetRef::single(0)});
        }
        std::vector<CrossMetric> gs;
        for (int i = 0; i < 3; ++i) gs.push_back(glue_from_nets(ps[i].space, ps[i + 1].space, {0}, {0}, 0.2));
        // plant one short edge from the farthest pair of member j to one point of member j+1
        const int j = static_cast<int>(rng() % 3);
        const auto& sj = ps[j].space;
        std::size_t fa = 0, fb = 1;
        for (std::size_t x = 0; x < sj.size(); ++x)
            for (std::size_t y = 0; y < sj.size(); ++y)
                if (sj(x, y) > sj(fa, fb)) fa = x, fb = y;
        Matrix cross = gs[j].cross_matrix();
        cross[fa][0] = cross[fb][0] = sj(fa, fb) / 4;
        gs[j] = CrossMetric::unchecked(ps[j].space, ps[j + 1].space, cross);
        ++planted;
        try {
            build_chain(ps, gs, {1.0, 1.0, 1.0});
        } catch (const Error& e) {
            rejected += e.code() == ErrorCode::ShortcutDetected;
        }
    }
    report("chain-lab", iso && undominated == 0 && rejected == planted,
           fmt("6 identical pairs, budgets 2^-i: proxy isometric to member %s, members above 2*2^-i + res %d; "
               "shortcut chains rejected %d/%d; %.1f s",
               iso ? "yes" : "no", undominated, rejected, planted, seconds_since(t0)));
}

json load_fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    return json::parse(in);
}

FiniteMetricSpace from_json(const json& j) { return FiniteMetricSpace::from_matrix(j.get<Matrix>()); }
SubsetRef subset(const json& j) { return SubsetRef(j.get<std::vector<std::size_t>>()); }

void fixture_gate() {
    const double tol = 1e-6;  // fixtures are rounded to six decimals
    int total = 0, bad = 0;
    auto expect = [&](bool ok) {
        ++total;
        bad += !ok;
    };
    auto h = load_fixture("hausdorff.json");
    for (const auto& c : h["hausdorff"])
        expect(std::abs(hausdorff(from_json(c["dist"]), subset(c["a"]), subset(c["b"])) - c["expected"].get<double>()) <= tol);
    for (const auto& c : h["diameter"]) expect(std::abs(diam(from_json(c["dist"])) - c["expected"].get<double>()) <= tol);
    for (const auto& c : load_fixture("counting.json")["cases"]) {
        auto s = from_json(c["dist"]);
        auto a = subset(c["a"]);
        const double r = c["r"].get<double>();
        auto sep = separation(s, a, r);
        expect(covering_outer(s, a, r) == c["M"].get<std::size_t>() &&
               covering_inner(s, a, r) == c["N"].get<std::size_t>() && packing(s, a, r) == c["P"].get<std::size_t>() &&
               (c["S"].is_null() ? !sep.has_value() : sep == c["S"].get<std::size_t>()));
    }
    for (const auto& c : load_fixture("glue_constraints.json")["cases"]) {
        auto l = from_json(c["left"]), r = from_json(c["right"]);
        std::vector<CrossEdge> edges;
        for (const auto& e : c["edges"]) edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
        auto g = glue_from_constraints(l, r, edges, false);
        auto want = c["expected"].get<Matrix>();
        bool ok = true;
        for (std::size_t i = 0; i < l.size(); ++i)
            for (std::size_t j = 0; j < r.size(); ++j) ok = ok && std::abs(g(i, j) - want[i][j]) <= tol;
        expect(ok);
    }
    auto gh = load_fixture("gh_compact.json");
    auto in_bracket = [&](const DistanceBracket& b, double v) { return b.lo <= v + tol && v - tol <= b.hi; };
    const auto& two = gh["two_point"];
    auto b2 = gh_compact_pair({from_json(two["left"]), subset(two["left_subset"])},
                              {from_json(two["right"]), subset(two["right_subset"])}, kRes);
    expect(in_bracket(b2, 2.0) && std::abs(b2.hi - 2.0) <= kRes && std::abs(b2.lo - 2.0) <= kRes);
    for (const auto& c : gh["pairs"])
        expect(in_bracket(gh_compact_pair({from_json(c["left"]), subset(c["left_subset"])},
                                          {from_json(c["right"]), subset(c["right_subset"])}, kRes),
                          c["expected"].get<double>()));
    for (const auto& c : gh["tuples"]) {
        std::vector<SubsetRef> lc, rc;
        for (const auto& l : c["left_chain"]) lc.push_back(subset(l));
        for (const auto& l : c["right_chain"]) rc.push_back(subset(l));
        expect(in_bracket(gh_compact_tuple({from_json(c["left"]), lc}, {from_json(c["right"]), rc}, kRes),
                          c["expected"].get<double>()));
    }
    for (const auto& c : load_fixture("gh_truncated.json")["cases"]) {
        MetricPair p{from_json(c["left"]), subset(c["left_subset"])}, q{from_json(c["right"]), subset(c["right_subset"])};
        auto b = gh_truncated_pair(p, q, kRes);
        const double first = c["first_feasible"].get<double>(), step = c["grid_step"].get<double>();
        expect(b.lo <= first + tol && b.hi >= first - step - tol);
    }
    for (const auto& c : load_fixture("min_approx.json")["cases"]) {
        MetricPair p{from_json(c["left"]), subset(c["left_subset"])}, q{from_json(c["right"]), subset(c["right_subset"])};
        expect(std::abs(min_approx_eps(p, q, kRes).hi - c["expected"].get<double>()) <= tol);
    }
    for (const auto& c : load_fixture("chain.json")["cases"]) {
        std::vector<MetricPair> pairs;
        for (std::size_t i = 0; i < c["spaces"].size(); ++i) pairs.push_back({from_json(c["spaces"][i]), subset(c["subsets"][i])});
        std::vector<CrossMetric> glues;
        for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
            glues.push_back(CrossMetric::make(pairs[i].space, pairs[i + 1].space, c["glues"][i].get<Matrix>()));
        auto chain = build_chain(pairs, glues, c["budgets"].get<std::vector<double>>());
        auto want = c["expected_w"].get<std::vector<std::size_t>>();
        try {
            expect(!want.empty() && limit_proxy(chain).z_pair.subset.indices() == want);
        } catch (const Error& e) {
            expect(want.empty() && e.code() == ErrorCode::EmptyLimit);
        }
    }
    report("fixture-gate", bad == 0,
           fmt("%d frozen oracle values reproduced, %d mismatches (two-point example bracket [%.6f, %.6f])", total,
               bad, b2.lo, b2.hi));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    const std::vector<std::pair<const char*, std::function<void()>>> suites = {
        {"fixture-gate", fixture_gate}, {"metric-axioms", metric_axioms}, {"sandwich", sandwich},
        {"gluing-constructors", gluing_constructors}, {"net-lemma", net_lemma}, {"rough-isometry", rough_isometry},
        {"comparison", comparison}, {"counting", counting}, {"ball-lemma", ball_lemma}, {"chain-lab", chain_lab},
    };
    for (const auto& [name, run] : suites) {
        try {
            run();
        } catch (const std::exception& e) {
            report(name, false, std::string("aborted: ") + e.what());
        }
    }
    const double secs = seconds_since(t0);
    report("runtime", secs < 300.0, fmt("acceptance run took %.1f s (limit 300)", secs));
    int failed = 0;
    for (const auto& l : g_lines) failed += !l.pass;
    std::printf("%d of %zu criteria passed\n", int(g_lines.size()) - failed, g_lines.size());
    return failed == 0 ? 0 : 1;
}
