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
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/constraint_search.hpp"
#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/error.hpp"
#include "metric_pairs/hausdorff.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

/// Total map from left indices to right indices.
using IndexMap = std::vector<std::size_t>;

/// Map defined on part of the left space; unset entries are outside the domain.
using PartialMap = std::vector<std::optional<std::size_t>>;

struct CrossEdge {
    std::size_t left;
    std::size_t right;
    double cap;
};

namespace detail {

inline void require_positive(double eps, const char* what) {
    if (!(eps > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, std::string(what) + " must be > 0");
}

inline void check_map(const IndexMap& f, std::size_t domain, std::size_t codomain) {
    if (f.size() != domain) {
        throw Error(ErrorCode::InvalidArgument, "map has " + std::to_string(f.size()) +
                                                    " entries, expected " + std::to_string(domain));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= codomain) throw Error(ErrorCode::InvalidArgument, "map value out of range", {i, f[i]});
    }
}

inline CrossMetric cross_from_closure(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                      const std::vector<double>& closure, bool pseudo) {
    const std::size_t n = left.size(), m = right.size(), total = n + m;
    std::vector<double> cross(n * m);
    bool zero = false;
    const double tau = std::max(left.tolerance(), right.tolerance());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cross[i * m + j] = closure[i * total + n + j];
            zero = zero || cross[i * m + j] <= tau;
        }
    }
    return CrossMetric::unchecked(left, right, std::move(cross), pseudo || zero);
}

}  // namespace detail

/// Smallest gluing in which every listed cross edge has length at most its
/// cap: the shortest-path closure of both spaces plus the edges. Throws
/// Infeasible with the first within-space pair the closure would shorten.
inline CrossMetric glue_from_constraints(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                         const std::vector<CrossEdge>& edges, bool pseudo) {
    if (edges.empty()) throw Error(ErrorCode::EmptyConstraintSet, "no cross edge, no finite gluing");
    const double tau = std::max(left.tolerance(), right.tolerance());
    detail::GluingSearch engine(left, right, tau);
    std::vector<double> d = engine.base();
    const std::size_t n = left.size();
    for (const auto& e : edges) {
        if (e.left >= n || e.right >= right.size()) {
            throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range", {e.left, e.right});
        }
        if (e.cap < 0.0 || (!pseudo && !(e.cap > 0.0))) {
            throw Error(ErrorCode::InvalidArgument,
                        pseudo ? "caps must be >= 0" : "caps must be > 0 without the pseudo flag",
                        {e.left, e.right});
        }
        engine.add(d, e.left, n + e.right, e.cap);
    }
    if (auto bad = engine.shortcut(d)) {
        auto [i, j] = *bad;
        bool left_side = i < n;
        std::size_t a = left_side ? i : i - n, b = left_side ? j : j - n;
        throw Error(ErrorCode::Infeasible,
                    std::string(left_side ? "left" : "right") + " distance (" + std::to_string(a) + "," +
                        std::to_string(b) + ") would be shortened",
                    {a, b});
    }
    return detail::cross_from_closure(left, right, d, pseudo);
}

/// Gluing built from a map f with distortion at most eps:
///   cross[x][y] = eps/2 + min over x' of ( dL(x, x') + dR(f(x'), y) ).
inline CrossMetric glue_from_approximation(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                           const IndexMap& f, double eps) {
    detail::require_positive(eps, "eps");
    detail::check_map(f, left.size(), right.size());
    const std::size_t n = left.size(), m = right.size();
    std::vector<double> cross(n * m);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
            double best = kInfinity;
            for (std::size_t x2 = 0; x2 < n; ++x2) best = std::min(best, left(x, x2) + right(f[x2], y));
            cross[x * m + y] = eps / 2.0 + best;
        }
    }
    return CrossMetric::make(left, right, std::move(cross), false);
}

/// Gluing built from a rough isometry f defined on the closed R-ball around A:
///   cross[x][y] = min over u in the ball and v with dR(v, f(u)) <= eps of
///                 dL(x, u) + 3 eps / 2 + dR(y, v).
inline CrossMetric glue_from_rough_isometry(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                            const PartialMap& f, const SubsetRef& a, double eps,
                                            double radius) {
    detail::require_positive(eps, "eps");
    if (!(eps < radius)) throw Error(ErrorCode::InvalidArgument, "need eps < R");
    if (f.size() != left.size()) throw Error(ErrorCode::InvalidArgument, "map size must equal |left|");
    const SubsetRef domain = closed_ball(left, a, radius);
    for (std::size_t u : domain) {
        if (!f[u]) throw Error(ErrorCode::DomainTooSmall, "map undefined on ball point " + std::to_string(u), {u});
        if (*f[u] >= right.size()) throw Error(ErrorCode::InvalidArgument, "map value out of range", {u});
    }
    const double tau = std::max(left.tolerance(), right.tolerance());
    const std::size_t n = left.size(), m = right.size();
    // Pairs (u, v) allowed in the infimum.
    std::vector<std::pair<std::size_t, std::size_t>> anchors;
    for (std::size_t u : domain)
        for (std::size_t v = 0; v < m; ++v)
            if (right(v, *f[u]) <= eps + tau) anchors.emplace_back(u, v);
    std::vector<double> cross(n * m);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
            double best = kInfinity;
            for (auto [u, v] : anchors) best = std::min(best, left(x, u) + right(y, v));
            cross[x * m + y] = best + 1.5 * eps;
        }
    }
    return CrossMetric::make(left, right, std::move(cross), false);
}

/// Gluing through paired nets: cross[x][y] = min_i ( dL(x, netL[i]) + dR(y, netR[i]) ) + eps.
inline CrossMetric glue_from_nets(const FiniteMetricSpace& left, const FiniteMetricSpace& right,
                                  const std::vector<std::size_t>& net_left,
                                  const std::vector<std::size_t>& net_right, double eps) {
    detail::require_positive(eps, "eps");
    if (net_left.size() != net_right.size() || net_left.empty()) {
        throw Error(ErrorCode::NetLengthMismatch, std::to_string(net_left.size()) + " vs " +
                                                      std::to_string(net_right.size()) + " net points");
    }
    for (std::size_t k = 0; k < net_left.size(); ++k) {
        if (net_left[k] >= left.size() || net_right[k] >= right.size()) {
            throw Error(ErrorCode::InvalidArgument, "net index out of range", {k});
        }
    }
    const std::size_t n = left.size(), m = right.size();
    std::vector<double> cross(n * m);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
            double best = kInfinity;
            for (std::size_t k = 0; k < net_left.size(); ++k)
                best = std::min(best, left(x, net_left[k]) + right(y, net_right[k]));
            cross[x * m + y] = best + eps;
        }
    }
    return CrossMetric::make(left, right, std::move(cross), false);
}

struct EpsAdmissibilityReport {
    double eps = 0.0;
    double hausdorff_ab = 0.0;
    bool covering_left = false;
    bool covering_right = false;
    bool verdict = false;
    /// Largest distance from a point of the left (1/eps)-ball to the right
    /// space, and vice versa; the coverings hold when these are <= eps.
    double left_gap = 0.0;
    double right_gap = 0.0;
};

/// Evaluates the (eps; A, B) conditions for a gluing, with every strict
/// inequality read as "<= eps + tau". For tuples, every level enters the
/// Hausdorff clause and the balls are taken around the outermost level.
inline EpsAdmissibilityReport check_eps_admissible(const CrossMetric& glue,
                                                   const std::vector<SubsetRef>& left_chain,
                                                   const std::vector<SubsetRef>& right_chain, double eps) {
    detail::require_positive(eps, "eps");
    if (left_chain.size() != right_chain.size() || left_chain.empty()) {
        throw Error(ErrorCode::ChainLengthMismatch, "chains must have equal nonzero length");
    }
    const double tau = glue.tolerance();
    EpsAdmissibilityReport rep;
    rep.eps = eps;
    for (std::size_t k = 0; k < left_chain.size(); ++k) {
        rep.hausdorff_ab = std::max(rep.hausdorff_ab, cross_hausdorff(glue, left_chain[k], right_chain[k]));
    }
    const SubsetRef all_right = SubsetRef::full(glue.right_size());
    const SubsetRef all_left = SubsetRef::full(glue.left_size());
    for (std::size_t x : closed_ball(glue.left(), left_chain.back(), 1.0 / eps))
        rep.left_gap = std::max(rep.left_gap, glue.left_to(x, all_right));
    for (std::size_t y : closed_ball(glue.right(), right_chain.back(), 1.0 / eps))
        rep.right_gap = std::max(rep.right_gap, glue.right_to(y, all_left));
    rep.covering_left = rep.left_gap <= eps + tau;
    rep.covering_right = rep.right_gap <= eps + tau;
    rep.verdict = rep.hausdorff_ab <= eps + tau && rep.covering_left && rep.covering_right;
    return rep;
}

inline EpsAdmissibilityReport check_eps_admissible(const CrossMetric& glue, const SubsetRef& a,
                                                   const SubsetRef& b, double eps) {
    return check_eps_admissible(glue, std::vector<SubsetRef>{a}, std::vector<SubsetRef>{b}, eps);
}

/// For each a in A the nearest right point through the gluing (lowest index
/// on ties). The result does not depend on n; n is the index of the
/// approximating gluing it was built from and must be positive.
inline SubsetRef transfer_subset(const CrossMetric& glue, const SubsetRef& a, int n) {
    if (n <= 0) throw Error(ErrorCode::InvalidArgument, "n must be a positive integer");
    glue.left().check(a);
    std::vector<std::size_t> image;
    for (std::size_t x : a) {
        std::size_t best = 0;
        for (std::size_t y = 1; y < glue.right_size(); ++y)
            if (glue(x, y) < glue(x, best)) best = y;
        image.push_back(best);
    }
    return SubsetRef(std::move(image));
}

}  // namespace metric_pairs
