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

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/error.hpp"
#include "metric_pairs/gluing.hpp"
#include "metric_pairs/hausdorff.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

/// Counting routines use 64-bit masks over the target set.
inline constexpr std::size_t kMaxCountingSet = 64;

enum class CountKind { M, N, P, S, Pi, Nu };

inline const char* to_string(CountKind k) {
    switch (k) {
        case CountKind::M: return "M";
        case CountKind::N: return "N";
        case CountKind::P: return "P";
        case CountKind::S: return "S";
        case CountKind::Pi: return "pi";
        case CountKind::Nu: return "nu";
    }
    return "?";
}

struct CountingProfile {
    CountKind kind = CountKind::M;
    std::vector<std::pair<double, std::uint64_t>> samples;

    friend bool operator==(const CountingProfile&, const CountingProfile&) = default;
};

namespace detail {

using Mask = std::uint64_t;

inline void check_count_args(const FiniteMetricSpace& space, const SubsetRef& a, double r) {
    space.check(a);
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    if (a.size() > kMaxCountingSet) {
        throw Error(ErrorCode::SizeLimitExceeded,
                    "counting sets are limited to " + std::to_string(kMaxCountingSet) + " points");
    }
}

inline Mask full_mask(std::size_t n) { return n == 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

/// Exact minimum set cover of `universe` by `sets` (branch on the lowest
/// uncovered element, bound by the largest remaining set).
class SetCover {
public:
    SetCover(std::vector<Mask> sets, Mask universe) : universe_(universe) {
        std::sort(sets.begin(), sets.end(),
                  [](Mask a, Mask b) { return std::popcount(a) > std::popcount(b) || (std::popcount(a) == std::popcount(b) && a < b); });
        sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
        // drop sets contained in another one
        for (std::size_t i = 0; i < sets.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < sets.size() && !dominated; ++j)
                dominated = j != i && (sets[i] & ~sets[j]) == 0 && (sets[i] != sets[j] || j < i);
            if (!dominated && sets[i] != 0) sets_.push_back(sets[i]);
        }
        for (Mask s : sets_) largest_ = std::max(largest_, std::popcount(s));
    }

    std::size_t solve() {
        best_ = greedy();
        search(0, 0);
        return best_;
    }

private:
    std::size_t greedy() const {
        Mask covered = 0;
        std::size_t used = 0;
        while (covered != universe_) {
            Mask pick = 0;
            for (Mask s : sets_)
                if (std::popcount(s & ~covered) > std::popcount(pick & ~covered)) pick = s;
            if ((pick & ~covered) == 0) throw Error(ErrorCode::InvalidArgument, "set cover has no solution");
            covered |= pick;
            ++used;
        }
        return used;
    }

    void search(Mask covered, std::size_t used) {
        if (covered == universe_) {
            best_ = std::min(best_, used);
            return;
        }
        const int left = std::popcount(universe_ & ~covered);
        const std::size_t bound = used + static_cast<std::size_t>((left + largest_ - 1) / largest_);
        if (bound >= best_) return;
        const Mask element = (universe_ & ~covered) & (~(universe_ & ~covered) + 1);
        for (Mask s : sets_)
            if (s & element) search(covered | s, used + 1);
    }

    Mask universe_;
    std::vector<Mask> sets_;
    int largest_ = 1;
    std::size_t best_ = 0;
};

/// Maximum clique in a graph on at most 64 vertices given by adjacency masks.
inline std::size_t max_clique(const std::vector<Mask>& adj) {
    std::size_t best = 0;
    auto expand = [&](auto&& self, Mask candidates, std::size_t size) -> void {
        if (candidates == 0) {
            best = std::max(best, size);
            return;
        }
        while (candidates != 0) {
            if (size + static_cast<std::size_t>(std::popcount(candidates)) <= best) return;
            const int v = std::countr_zero(candidates);
            candidates &= candidates - 1;
            self(self, candidates & adj[static_cast<std::size_t>(v)], size + 1);
        }
    };
    expand(expand, full_mask(adj.size()), 0);
    return best;
}

/// Mask over positions of `a` of the points within the open r-ball of `center`.
inline Mask open_ball_mask(const FiniteMetricSpace& space, const SubsetRef& a, std::size_t center, double r) {
    Mask m = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (space(center, a[k]) < r) m |= Mask{1} << k;
    return m;
}

inline std::size_t covering(const FiniteMetricSpace& space, const SubsetRef& a, double r,
                            const std::vector<std::size_t>& centers) {
    check_count_args(space, a, r);
    std::vector<Mask> sets;
    for (std::size_t c : centers) sets.push_back(open_ball_mask(space, a, c, r));
    return SetCover(std::move(sets), full_mask(a.size())).solve();
}

}  // namespace detail

/// M(r, A): fewest open r-balls, centred anywhere in the space, covering A.
inline std::size_t covering_outer(const FiniteMetricSpace& space, const SubsetRef& a, double r) {
    return detail::covering(space, a, r, SubsetRef::full(space.size()).indices());
}

/// N(r, A): as M with centres restricted to A.
inline std::size_t covering_inner(const FiniteMetricSpace& space, const SubsetRef& a, double r) {
    return detail::covering(space, a, r, a.indices());
}

/// P(r, A): most points of A whose open r-balls in the ambient space are
/// pairwise disjoint.
inline std::size_t packing(const FiniteMetricSpace& space, const SubsetRef& a, double r) {
    detail::check_count_args(space, a, r);
    std::vector<detail::Mask> adj(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            bool meet = false;
            for (std::size_t x = 0; x < space.size() && !meet; ++x)
                meet = space(x, a[i]) < r && space(x, a[j]) < r;
            if (!meet) {
                adj[i] |= detail::Mask{1} << j;
                adj[j] |= detail::Mask{1} << i;
            }
        }
    }
    return detail::max_clique(adj);
}

/// S(r, A): largest r-separated subset of A (pairwise distance >= r, read
/// with tolerance). Separated sets have at least two points by definition,
/// so nullopt stands for "no such subset".
inline std::optional<std::size_t> separation(const FiniteMetricSpace& space, const SubsetRef& a, double r) {
    detail::check_count_args(space, a, r);
    std::vector<detail::Mask> adj(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (space(a[i], a[j]) >= r - space.tolerance()) {
                adj[i] |= detail::Mask{1} << j;
                adj[j] |= detail::Mask{1} << i;
            }
        }
    }
    const std::size_t best = detail::max_clique(adj);
    if (best < 2) return std::nullopt;
    return best;
}

/// Uniform bounds over a family on the closed (1/eps)-balls around the
/// distinguished subsets: pi(eps) = max P(eps, .), nu(eps) = max N(eps, .).
inline std::pair<CountingProfile, CountingProfile> family_certificate(const std::vector<MetricPair>& family,
                                                                      const std::vector<double>& eps_grid) {
    if (family.empty()) throw Error(ErrorCode::InvalidArgument, "family is empty");
    if (eps_grid.empty()) throw Error(ErrorCode::InvalidArgument, "eps grid is empty");
    CountingProfile pi{CountKind::Pi, {}}, nu{CountKind::Nu, {}};
    for (double eps : eps_grid) {
        if (!(eps > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "grid values must be positive");
        std::uint64_t p = 0, n = 0;
        for (const auto& member : family) {
            const SubsetRef ball = closed_ball(member.space, member.subset, 1.0 / eps);
            p = std::max<std::uint64_t>(p, packing(member.space, ball, eps));
            n = std::max<std::uint64_t>(n, covering_inner(member.space, ball, eps));
        }
        pi.samples.emplace_back(eps, p);
        nu.samples.emplace_back(eps, n);
    }
    return {pi, nu};
}

/// Tabulates one count function of a single set over a grid of radii. S
/// values below two are recorded as 0.
inline CountingProfile counting_profile(const FiniteMetricSpace& space, const SubsetRef& a, CountKind kind,
                                        const std::vector<double>& grid) {
    CountingProfile out{kind, {}};
    for (double r : grid) {
        std::uint64_t v = 0;
        switch (kind) {
            case CountKind::M: v = covering_outer(space, a, r); break;
            case CountKind::N: v = covering_inner(space, a, r); break;
            case CountKind::P: v = packing(space, a, r); break;
            case CountKind::S: v = separation(space, a, r).value_or(0); break;
            default: throw Error(ErrorCode::InvalidArgument, "pi and nu are family profiles");
        }
        out.samples.emplace_back(r, v);
    }
    return out;
}

struct CountTransferReport {
    double eps = 0.0, r = 0.0, radius = 0.0;
    EpsAdmissibilityReport admissibility;

    /// Clause 1, applicable when R <= 1/eps:
    ///   M(r + 2 eps, closed R-ball of B) <= N(r, closed R-ball of A).
    bool clause1_applicable = false;
    std::size_t m_right = 0;
    std::size_t n_left = 0;
    bool clause1_holds = true;
    /// Same count with the right ball shrunk to radius R - 2 eps (0 when
    /// that ball is empty). Reported alongside clause 1 as a diagnostic.
    std::size_t m_right_shrunk = 0;
    bool clause1_shrunk_holds = true;

    /// Clause 2, applicable when R + r <= 1/eps:
    ///   P(r + 2 eps, closed (R - 2 eps)-ball of B) <= P(r, closed R-ball of A).
    bool clause2_applicable = false;
    std::size_t p_right = 0;
    std::size_t p_left = 0;
    bool clause2_holds = true;

    bool verdict() const { return clause1_holds && clause2_holds; }
};

namespace detail {

/// Closed ball that may be empty (negative radius means empty).
inline std::optional<SubsetRef> closed_ball_or_empty(const FiniteMetricSpace& space, const SubsetRef& c, double r) {
    if (r < 0.0) return std::nullopt;
    return closed_ball(space, c, r);
}

}  // namespace detail

/// Evaluates both count-transfer inequalities for a glued pair of pairs. The
/// counts are intrinsic to each space; the gluing only has to satisfy the
/// (eps; A, B) conditions, otherwise PreconditionViolated.
inline CountTransferReport check_count_transfer(const MetricPair& p, const MetricPair& q, const CrossMetric& glue,
                                                double eps, double r, double radius) {
    require_glue_joins(glue, p.space, q.space);
    detail::require_positive(eps, "eps");
    if (!(r > 0.0) || !(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "r and R must be positive");
    if (!(eps < 0.5)) throw Error(ErrorCode::PreconditionViolated, "eps must be below 1/2");
    CountTransferReport rep;
    rep.eps = eps;
    rep.r = r;
    rep.radius = radius;
    rep.admissibility = check_eps_admissible(glue, p.subset, q.subset, eps);
    if (!rep.admissibility.verdict) {
        throw Error(ErrorCode::PreconditionViolated, "gluing is not (eps; A, B)-admissible");
    }
    const double tau = glue.tolerance();
    const SubsetRef left_ball = closed_ball(p.space, p.subset, radius);
    const auto right_shrunk = detail::closed_ball_or_empty(q.space, q.subset, radius - 2.0 * eps);

    rep.clause1_applicable = radius <= 1.0 / eps + tau;
    if (rep.clause1_applicable) {
        rep.m_right = covering_outer(q.space, closed_ball(q.space, q.subset, radius), r + 2.0 * eps);
        rep.n_left = covering_inner(p.space, left_ball, r);
        rep.clause1_holds = rep.m_right <= rep.n_left;
        rep.m_right_shrunk = right_shrunk ? covering_outer(q.space, *right_shrunk, r + 2.0 * eps) : 0;
        rep.clause1_shrunk_holds = rep.m_right_shrunk <= rep.n_left;
    }
    rep.clause2_applicable = radius + r <= 1.0 / eps + tau;
    if (rep.clause2_applicable) {
        rep.p_right = right_shrunk ? packing(q.space, *right_shrunk, r + 2.0 * eps) : 0;
        rep.p_left = packing(p.space, left_ball, r);
        rep.clause2_holds = rep.p_right <= rep.p_left;
    }
    return rep;
}

}  // namespace metric_pairs
