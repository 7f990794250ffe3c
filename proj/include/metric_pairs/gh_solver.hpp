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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/constraint_search.hpp"
#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/error.hpp"
#include "metric_pairs/gluing.hpp"
#include "metric_pairs/hausdorff.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

struct SolverOptions {
    /// Cap on search nodes per exhaustive search; exceeding it throws
    /// SizeLimitExceeded instead of degrading silently.
    std::uint64_t budget = kDefaultBudget;
};

/// (f, g) with parameter eps. Membership in Appr_eps is checked by
/// approximation_defect(), never assumed.
struct ApproximationPair {
    IndexMap f;
    IndexMap g;
    double eps = 0.0;

    friend bool operator==(const ApproximationPair&, const ApproximationPair&) = default;
};

/// lo <= true value <= hi, with hi carried by an explicit gluing where one
/// exists. When lo_exclusive is set the true value is strictly above lo
/// (an infeasibility was proved exactly at lo).
struct DistanceBracket {
    double lo = 0.0;
    double hi = 0.0;
    double resolution = 0.0;
    bool lo_exclusive = false;
    std::optional<CrossMetric> certificate;
    std::optional<ApproximationPair> witness;
    std::string lower_reason;

    bool contains(double v) const { return (lo_exclusive ? v > lo : v >= lo) && v <= hi; }
    bool contains_zero() const { return contains(0.0); }
    double width() const { return hi - lo; }
};

struct RoughIsometryWitness {
    PartialMap f;
    double eps = 0.0;
    double radius = 0.0;
};

/// Finite prefix of a pair-convergence schedule: eps strictly decreasing,
/// radii strictly increasing, both positive.
class ConvergenceSchedule {
public:
    ConvergenceSchedule(std::vector<double> eps_seq, std::vector<double> radius_seq)
        : eps_(std::move(eps_seq)), radius_(std::move(radius_seq)) {
        if (eps_.size() != radius_.size()) {
            throw Error(ErrorCode::LengthMismatch, "eps and radius sequences differ in length");
        }
        for (std::size_t i = 0; i < eps_.size(); ++i) {
            if (!(eps_[i] > 0.0) || !(radius_[i] > 0.0)) {
                throw Error(ErrorCode::InvalidArgument, "schedule entries must be positive", {i});
            }
            if (i > 0 && !(eps_[i] < eps_[i - 1])) {
                throw Error(ErrorCode::InvalidArgument, "eps must strictly decrease", {i});
            }
            if (i > 0 && !(radius_[i] > radius_[i - 1])) {
                throw Error(ErrorCode::InvalidArgument, "radii must strictly increase", {i});
            }
        }
    }
    std::size_t size() const noexcept { return eps_.size(); }
    const std::vector<double>& eps() const noexcept { return eps_; }
    const std::vector<double>& radii() const noexcept { return radius_; }

private:
    std::vector<double> eps_;
    std::vector<double> radius_;
};

namespace detail {

inline double joint_tolerance(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return std::max(a.tolerance(), b.tolerance());
}

inline std::vector<std::size_t> shifted(const SubsetRef& s, std::size_t offset) {
    std::vector<std::size_t> out;
    out.reserve(s.size());
    for (std::size_t i : s) out.push_back(i + offset);
    return out;
}

/// Requirements "every point of L within cap of R and vice versa" for a
/// left subset L and right subset R, in union indexing.
inline void mutual_cover(std::vector<Requirement>& reqs, const SubsetRef& left_set,
                         const SubsetRef& right_set, std::size_t n_left, double cap) {
    auto right_ids = shifted(right_set, n_left);
    for (std::size_t x : left_set) reqs.push_back({x, right_ids, cap});
    for (std::size_t y : right_ids) reqs.push_back({y, left_set.indices(), cap});
}

/// Strict total order used to put the arguments of symmetric solvers into a
/// canonical orientation, which makes the results exactly symmetric.
inline bool canonical_less(const MetricTuple& t, const MetricTuple& u) {
    if (t.space.size() != u.space.size()) return t.space.size() < u.space.size();
    if (t.levels() != u.levels()) return t.levels() < u.levels();
    for (std::size_t i = 0; i < t.space.size(); ++i)
        for (std::size_t j = 0; j < t.space.size(); ++j)
            if (t.space(i, j) != u.space(i, j)) return t.space(i, j) < u.space(i, j);
    for (std::size_t k = 0; k < t.levels(); ++k)
        if (t.chain[k] != u.chain[k]) return t.chain[k] < u.chain[k];
    if (t.space.labels() != u.space.labels()) return t.space.labels() < u.space.labels();
    return t.space.tolerance() < u.space.tolerance();
}

inline void check_resolution(double resolution, double scale) {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
    }
    if (scale > 0.0 && resolution > scale) {
        throw Error(ErrorCode::ResolutionTooCoarse,
                    "resolution " + std::to_string(resolution) + " exceeds the diameter scale " +
                        std::to_string(scale));
    }
}

/// Branch-and-bound for the compact tuple distance
///   inf over gluings of  d_H(X,Y) + sum_k d_H(X^k, Y^k).
///
/// Write t0 for the whole-space budget and t = (t_1..t_N) for the level
/// budgets. For fixed t the least feasible t0, t0min(t), is found by
/// bisection with the gluing search as oracle; t0min is non-increasing in
/// every t_k. Boxes [a, b] of level budgets are bounded below by
/// sum(a) + t0min(b) and every evaluated point is an upper bound, so
/// refining boxes with the smallest lower bound closes the gap.
class CompactTupleSolver {
public:
    CompactTupleSolver(const MetricTuple& t, const MetricTuple& u, double resolution,
                       const SolverOptions& opts)
        : t_(t), u_(u), res_(resolution), opts_(opts),
          tau_(joint_tolerance(t.space, u.space)),
          levels_(t.levels()),
          scale_(std::max(diam(t.space), diam(u.space))) {}

    DistanceBracket run() {
        DistanceBracket out;
        out.resolution = res_;
        const std::vector<double> zeros(levels_, 0.0);
        if (auto c = feasible(0.0, zeros)) {
            out.lo = out.hi = 0.0;
            out.certificate = certificate(*c);
            out.lower_reason = "distance is nonnegative";
            return out;
        }
        out.lo_exclusive = true;
        bisect_tol_ = res_ / 4.0;

        // Level caps of `scale` are always feasible (constant cross distance).
        const std::vector<double> top(levels_, scale_);
        const Eval& top_eval = evaluate(top, 0.0, kInfinity);
        best_ = total(top) + top_eval.hi;
        best_closure_ = top_eval.closure;

        const std::vector<double> domain_hi(levels_, best_);
        const Eval& lo_corner = evaluate(zeros, 0.0, kInfinity);
        const Eval& hi_corner = evaluate(domain_hi, 0.0, top_eval.hi);
        consider(zeros, lo_corner);
        consider(domain_hi, hi_corner);

        std::priority_queue<Box, std::vector<Box>, std::greater<>> open;
        double dropped_lb = kInfinity;
        auto push = [&](Box box) {
            box.lb = total(box.lo) + evals_.at(box.hi).lo;
            if (box.lb >= best_ - res_) {
                dropped_lb = std::min(dropped_lb, box.lb);
            } else {
                open.push(std::move(box));
            }
        };
        push(Box{0.0, zeros, domain_hi});

        std::size_t iterations = 0;
        while (!open.empty()) {
            if (open.top().lb >= best_ - res_) break;
            if (++iterations > opts_.budget) {
                throw Error(ErrorCode::SizeLimitExceeded, "box refinement exceeded the budget");
            }
            Box box = open.top();
            open.pop();
            std::size_t dim = 0;
            for (std::size_t k = 1; k < levels_; ++k)
                if (box.hi[k] - box.lo[k] > box.hi[dim] - box.lo[dim]) dim = k;
            const double mid = 0.5 * (box.lo[dim] + box.hi[dim]);
            const Eval& at_lo = evals_.at(box.lo);
            const Eval& at_hi = evals_.at(box.hi);
            // Anything between the corners has t0min in [t0min(hi), t0min(lo)].
            const double bound_lo = at_hi.lo, bound_hi = at_lo.hi;

            std::vector<double> upper = box.hi;
            upper[dim] = mid;
            std::vector<double> lower = box.lo;
            lower[dim] = mid;
            consider(upper, evaluate(upper, bound_lo, bound_hi));
            consider(lower, evaluate(lower, bound_lo, bound_hi));
            push(Box{0.0, box.lo, upper});
            push(Box{0.0, lower, box.hi});
        }
        double lb = dropped_lb;
        if (!open.empty()) lb = std::min(lb, open.top().lb);
        out.certificate = certificate(best_closure_);
        out.hi = tuple_hausdorff(*out.certificate, t_, u_);
        out.lo = std::max(0.0, std::min(lb, out.hi));
        out.lower_reason =
            "every level-budget box has sum(lower corner) + (least infeasible whole-space budget at its "
            "upper corner) >= lo; zero budgets are infeasible";
        return out;
    }

private:
    struct Eval {
        double lo = 0.0;         // t0min(t) > lo, or >= 0 when nothing was refuted
        double hi = kInfinity;   // t0min(t) <= hi
        std::vector<double> closure;
    };

    struct Box {
        double lb;
        std::vector<double> lo;
        std::vector<double> hi;
        friend bool operator>(const Box& a, const Box& b) {
            if (a.lb != b.lb) return a.lb > b.lb;
            return a.lo > b.lo;
        }
    };

    static double total(const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }

    std::vector<Requirement> requirements(double t0, const std::vector<double>& t) const {
        std::vector<Requirement> reqs;
        const std::size_t n = t_.space.size();
        for (std::size_t k = 0; k < levels_; ++k) mutual_cover(reqs, t_.chain[k], u_.chain[k], n, t[k]);
        if (std::isfinite(t0)) {
            mutual_cover(reqs, SubsetRef::full(n), SubsetRef::full(u_.space.size()), n, t0);
        }
        return reqs;
    }

    std::optional<std::vector<double>> feasible(double t0, const std::vector<double>& t) {
        GluingSearch engine(t_.space, u_.space, tau_, opts_.budget);
        return engine.solve(requirements(t0, t));
    }

    double whole_space_gap(const std::vector<double>& closure) const {
        const std::size_t n = t_.space.size(), total = n + u_.space.size();
        double h = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            double best = kInfinity;
            for (std::size_t j = 0; j < total; ++j)
                if ((i < n) != (j < n)) best = std::min(best, closure[i * total + j]);
            h = std::max(h, best);
        }
        return h;
    }

    const Eval& evaluate(const std::vector<double>& t, double lo, double hi) {
        if (auto it = evals_.find(t); it != evals_.end()) return it->second;
        Eval e;
        e.lo = std::max(lo, 0.0);
        if (!std::isfinite(hi)) {
            auto c = feasible(kInfinity, t);
            if (!c) {
                e.lo = e.hi = kInfinity;
                return evals_.emplace(t, std::move(e)).first->second;
            }
            e.hi = whole_space_gap(*c);
            e.closure = std::move(*c);
        } else {
            auto c = feasible(hi, t);
            if (!c) throw Error(ErrorCode::InvalidArgument, "inconsistent monotone bound");
            e.hi = std::min(hi, whole_space_gap(*c));
            e.closure = std::move(*c);
        }
        while (e.hi - e.lo > bisect_tol_) {
            const double mid = 0.5 * (e.lo + e.hi);
            if (auto c = feasible(mid, t)) {
                e.hi = std::min(mid, whole_space_gap(*c));
                e.closure = std::move(*c);
            } else {
                e.lo = mid;
            }
        }
        return evals_.emplace(t, std::move(e)).first->second;
    }

    void consider(const std::vector<double>& t, const Eval& e) {
        if (!std::isfinite(e.hi)) return;
        const double value = total(t) + e.hi;
        if (value < best_) {
            best_ = value;
            best_closure_ = e.closure;
        }
    }

    CrossMetric certificate(const std::vector<double>& closure) const {
        return cross_from_closure(t_.space, u_.space, closure, true);
    }

    const MetricTuple& t_;
    const MetricTuple& u_;
    double res_;
    SolverOptions opts_;
    double tau_;
    std::size_t levels_;
    double scale_;
    double bisect_tol_ = 0.0;
    double best_ = kInfinity;
    std::vector<double> best_closure_;
    std::map<std::vector<double>, Eval> evals_;
};

inline DistanceBracket mirror(DistanceBracket b) {
    if (b.certificate) b.certificate = b.certificate->mirrored();
    if (b.witness) std::swap(b.witness->f, b.witness->g);
    return b;
}

}  // namespace detail

/// Compact Gromov-Hausdorff distance of tuples,
///   inf over admissible (pseudo-)gluings of d_H(X,Y) + sum_k d_H(X^k,Y^k),
/// as a bracket of width at most `resolution`.
inline DistanceBracket gh_compact_tuple(const MetricTuple& t, const MetricTuple& u, double resolution,
                                        const SolverOptions& opts = {}) {
    if (t.levels() != u.levels()) {
        throw Error(ErrorCode::ChainLengthMismatch,
                    std::to_string(t.levels()) + " vs " + std::to_string(u.levels()) + " levels");
    }
    detail::check_resolution(resolution, std::max(diam(t.space), diam(u.space)));
    if (detail::canonical_less(u, t)) {
        return detail::mirror(detail::CompactTupleSolver(u, t, resolution, opts).run());
    }
    return detail::CompactTupleSolver(t, u, resolution, opts).run();
}

/// Compact Gromov-Hausdorff distance of pairs: inf over gluings of
/// d_H(X,Y) + d_H(A,B).
inline DistanceBracket gh_compact_pair(const MetricPair& p, const MetricPair& q, double resolution,
                                       const SolverOptions& opts = {}) {
    return gh_compact_tuple(MetricTuple(p), MetricTuple(q), resolution, opts);
}

namespace detail {

/// Requirements for an (eps; ...)-admissible gluing of two tuples.
inline std::vector<Requirement> truncated_requirements(const MetricTuple& t, const MetricTuple& u,
                                                       double eps) {
    std::vector<Requirement> reqs;
    const std::size_t n = t.space.size();
    for (std::size_t k = 0; k < t.levels(); ++k) mutual_cover(reqs, t.chain[k], u.chain[k], n, eps);
    const double radius = eps > 0.0 ? 1.0 / eps : kInfinity;
    const SubsetRef left_ball = closed_ball(t.space, t.outermost(), radius);
    const SubsetRef right_ball = closed_ball(u.space, u.outermost(), radius);
    auto all_right = shifted(SubsetRef::full(u.space.size()), n);
    auto all_left = SubsetRef::full(n).indices();
    for (std::size_t x : left_ball) reqs.push_back({x, all_right, eps});
    for (std::size_t y : right_ball) reqs.push_back({y + n, all_left, eps});
    return reqs;
}

inline DistanceBracket truncated_solve(const MetricTuple& t, const MetricTuple& u, double resolution,
                                       const SolverOptions& opts) {
    const double tau = joint_tolerance(t.space, u.space);
    auto feasible = [&](double eps) {
        GluingSearch engine(t.space, u.space, tau, opts.budget);
        return engine.solve(truncated_requirements(t, u, eps));
    };
    DistanceBracket out;
    out.resolution = resolution;
    if (auto c = feasible(0.0)) {
        out.certificate = cross_from_closure(t.space, u.space, *c, true);
        out.lower_reason = "distance is nonnegative";
        return out;
    }
    auto top = feasible(0.5);
    if (!top) {
        out.lo = out.hi = 0.5;
        out.lower_reason = "no admissible gluing at eps = 1/2, so the truncation applies";
        return out;
    }
    double lo = 0.0, hi = 0.5;
    std::vector<double> best = std::move(*top);
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (auto c = feasible(mid)) {
            hi = mid;
            best = std::move(*c);
        } else {
            lo = mid;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.lo_exclusive = true;
    out.certificate = cross_from_closure(t.space, u.space, best, true);
    out.lower_reason = "no admissible gluing exists at eps = lo";
    return out;
}

}  // namespace detail

/// Truncated distance min{1/2, inf eps admitting an (eps; ...)-admissible
/// (pseudo-)gluing}, for tuples.
inline DistanceBracket gh_truncated_tuple(const MetricTuple& t, const MetricTuple& u, double resolution,
                                          const SolverOptions& opts = {}) {
    if (t.levels() != u.levels()) {
        throw Error(ErrorCode::ChainLengthMismatch,
                    std::to_string(t.levels()) + " vs " + std::to_string(u.levels()) + " levels");
    }
    detail::check_resolution(resolution, 0.5);
    if (detail::canonical_less(u, t)) return detail::mirror(detail::truncated_solve(u, t, resolution, opts));
    return detail::truncated_solve(t, u, resolution, opts);
}

inline DistanceBracket gh_truncated_pair(const MetricPair& p, const MetricPair& q, double resolution,
                                         const SolverOptions& opts = {}) {
    return gh_truncated_tuple(MetricTuple(p), MetricTuple(q), resolution, opts);
}

/// Largest |dY(f x, f x') - dX(x, x')| over pairs of the (partial) domain.
inline double distortion(const FiniteMetricSpace& x_space, const FiniteMetricSpace& y_space,
                         const PartialMap& f) {
    double worst = 0.0;
    for (std::size_t a = 0; a < f.size(); ++a) {
        if (!f[a]) continue;
        for (std::size_t b = a + 1; b < f.size(); ++b) {
            if (!f[b]) continue;
            worst = std::max(worst, std::abs(y_space(*f[a], *f[b]) - x_space(a, b)));
        }
    }
    return worst;
}

inline double distortion(const FiniteMetricSpace& x_space, const FiniteMetricSpace& y_space,
                         const IndexMap& f) {
    PartialMap p(f.begin(), f.end());
    return distortion(x_space, y_space, p);
}

/// Hausdorff distance between the image f(S) and a subset T of the codomain.
inline double image_hausdorff(const FiniteMetricSpace& y_space, const IndexMap& f, const SubsetRef& s,
                              const SubsetRef& target) {
    std::vector<std::size_t> img;
    for (std::size_t i : s) img.push_back(f.at(i));
    return hausdorff(y_space, SubsetRef(std::move(img)), target);
}

/// Smallest eps for which (f, g) satisfies every Appr_eps clause of the two
/// pairs (read non-strictly): the maximum of both distortions, both
/// round-trip displacements and both subset Hausdorff distances.
inline double approximation_defect(const MetricPair& p, const MetricPair& q, const IndexMap& f,
                                   const IndexMap& g) {
    detail::check_map(f, p.space.size(), q.space.size());
    detail::check_map(g, q.space.size(), p.space.size());
    double worst = std::max(distortion(p.space, q.space, f), distortion(q.space, p.space, g));
    for (std::size_t x = 0; x < f.size(); ++x) worst = std::max(worst, p.space(g[f[x]], x));
    for (std::size_t y = 0; y < g.size(); ++y) worst = std::max(worst, q.space(f[g[y]], y));
    worst = std::max(worst, image_hausdorff(q.space, f, p.subset, q.subset));
    worst = std::max(worst, image_hausdorff(p.space, g, q.subset, p.subset));
    return worst;
}

inline bool is_approximation(const MetricPair& p, const MetricPair& q, const ApproximationPair& a,
                             double slack = 0.0) {
    const double tau = detail::joint_tolerance(p.space, q.space);
    return approximation_defect(p, q, a.f, a.g) <= a.eps + tau + slack;
}

namespace detail {

/// Depth-first enumeration of (f, g) in lexicographic order with clause
/// checks as soon as the entries they mention are assigned.
class ApproxSearch {
public:
    ApproxSearch(const MetricPair& p, const MetricPair& q, double eps, std::uint64_t budget)
        : p_(p), q_(q), limit_(eps + joint_tolerance(p.space, q.space)), budget_(budget),
          n_(p.space.size()), m_(q.space.size()), f_(n_), g_(m_) {}

    std::optional<ApproximationPair> run(double eps) {
        if (assign_f(0)) return ApproximationPair{f_, g_, eps};
        return std::nullopt;
    }

private:
    void tick() {
        if (++nodes_ > budget_) {
            throw Error(ErrorCode::SizeLimitExceeded,
                        "approximation search exceeded " + std::to_string(budget_) + " nodes");
        }
    }

    bool assign_f(std::size_t x) {
        tick();
        if (x == n_) {
            // every b within reach of f(A)
            for (std::size_t b : q_.subset) {
                double best = kInfinity;
                for (std::size_t a : p_.subset) best = std::min(best, q_.space(b, f_[a]));
                if (best > limit_) return false;
            }
            return assign_g(0);
        }
        const bool in_a = p_.subset.contains(x);
        for (std::size_t y = 0; y < m_; ++y) {
            if (in_a && q_.space.distance_to(y, q_.subset) > limit_) continue;
            bool ok = true;
            for (std::size_t x2 = 0; x2 < x && ok; ++x2)
                ok = std::abs(q_.space(y, f_[x2]) - p_.space(x, x2)) <= limit_;
            if (!ok) continue;
            f_[x] = y;
            if (assign_f(x + 1)) return true;
        }
        return false;
    }

    bool assign_g(std::size_t y) {
        tick();
        if (y == m_) {
            for (std::size_t a : p_.subset) {
                double best = kInfinity;
                for (std::size_t b : q_.subset) best = std::min(best, p_.space(a, g_[b]));
                if (best > limit_) return false;
            }
            return true;
        }
        const bool in_b = q_.subset.contains(y);
        for (std::size_t x = 0; x < n_; ++x) {
            if (in_b && p_.space.distance_to(x, p_.subset) > limit_) continue;
            if (q_.space(f_[x], y) > limit_) continue;  // f(g(y)) near y
            bool ok = true;
            for (std::size_t x2 = 0; x2 < n_ && ok; ++x2)  // g(f(x2)) near x2
                if (f_[x2] == y) ok = p_.space(x, x2) <= limit_;
            for (std::size_t y2 = 0; y2 < y && ok; ++y2)
                ok = std::abs(p_.space(x, g_[y2]) - q_.space(y, y2)) <= limit_;
            if (!ok) continue;
            g_[y] = x;
            if (assign_g(y + 1)) return true;
        }
        return false;
    }

    const MetricPair& p_;
    const MetricPair& q_;
    double limit_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::size_t n_, m_;
    IndexMap f_, g_;
};

/// Sorted distinct values that any clause quantity of a map between the two
/// spaces can take: distances of either space and differences of distances.
inline std::vector<double> clause_values(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    std::vector<double> dx, dy, out{0.0};
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) dx.push_back(x(i, j));
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) dy.push_back(y(i, j));
    out.insert(out.end(), dx.begin(), dx.end());
    out.insert(out.end(), dy.begin(), dy.end());
    dx.push_back(0.0);
    dy.push_back(0.0);
    for (double a : dx)
        for (double b : dy) out.push_back(std::abs(a - b));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// First (f, g) in lexicographic order lying in Appr_eps of the pairs, with
/// strict inequalities read as "<= eps + tau".
inline std::optional<ApproximationPair> approx_search(const MetricPair& p, const MetricPair& q, double eps,
                                                      const SolverOptions& opts = {}) {
    detail::require_positive(eps, "eps");
    return detail::ApproxSearch(p, q, eps, opts.budget).run(eps);
}

/// Least eps with Appr_eps nonempty. Every clause quantity is one of finitely
/// many distance values, so bisection over that sorted list finds the value
/// exactly; the bracket therefore has zero width.
inline DistanceBracket min_approx_eps(const MetricPair& p, const MetricPair& q, double resolution,
                                      const SolverOptions& opts = {}) {
    detail::check_resolution(resolution, std::max(diam(p.space), diam(q.space)));
    auto values = detail::clause_values(p.space, q.space);
    auto try_at = [&](double eps) {
        return detail::ApproxSearch(p, q, eps, opts.budget).run(eps);
    };
    // Largest clause value always admits the constant-free identity-like search.
    std::size_t lo = 0, hi = values.size() - 1;
    auto found = try_at(values[hi]);
    if (!found) throw Error(ErrorCode::InvalidArgument, "no approximation at the largest clause value");
    if (auto z = try_at(values[0])) {
        hi = 0;
        found = std::move(z);
    } else {
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (auto w = try_at(values[mid])) {
                hi = mid;
                found = std::move(w);
            } else {
                lo = mid;
            }
        }
    }
    DistanceBracket out;
    out.resolution = resolution;
    out.lo = out.hi = values[hi];
    out.witness = std::move(found);
    out.lower_reason = hi == 0 ? "distance is nonnegative"
                               : "no pair of maps meets every clause at the next smaller candidate value";
    return out;
}

/// Extends a map f of distortion < eps, whose image is eps-dense and whose
/// subset image is eps-close to B, to an approximation pair (f, h) with
/// parameter 3 eps. g picks the lowest-index preimage on f(X); h sends other
/// points through their nearest point of f(X) (lowest index on ties).
inline ApproximationPair complete_distortion_map(const MetricPair& p, const MetricPair& q, const IndexMap& f,
                                                 double eps) {
    detail::require_positive(eps, "eps");
    detail::check_map(f, p.space.size(), q.space.size());
    const double tau = detail::joint_tolerance(p.space, q.space);
    const std::size_t n = p.space.size(), m = q.space.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (std::abs(q.space(f[a], f[b]) - p.space(a, b)) > eps + tau) {
                throw Error(ErrorCode::PreconditionViolated, "distortion of f exceeds eps", {a, b});
            }
        }
    }
    std::vector<std::optional<std::size_t>> preimage(m);
    for (std::size_t x = 0; x < n; ++x)
        if (!preimage[f[x]]) preimage[f[x]] = x;
    IndexMap h(m);
    for (std::size_t y = 0; y < m; ++y) {
        if (preimage[y]) {
            h[y] = *preimage[y];
            continue;
        }
        std::optional<std::size_t> nearest;
        for (std::size_t y2 = 0; y2 < m; ++y2) {
            if (!preimage[y2]) continue;
            if (!nearest || q.space(y, y2) < q.space(y, *nearest)) nearest = y2;
        }
        if (q.space(y, *nearest) > eps + tau) {
            throw Error(ErrorCode::PreconditionViolated, "image of f is not eps-dense", {y});
        }
        h[y] = *preimage[*nearest];
    }
    if (image_hausdorff(q.space, f, p.subset, q.subset) > eps + tau) {
        throw Error(ErrorCode::PreconditionViolated, "f(A) is not eps-close to B");
    }
    return ApproximationPair{f, std::move(h), 3.0 * eps};
}

namespace detail {

/// Maps from a domain of left points into the right space, searched in
/// lexicographic order with distortion pruning. The acceptance test for a
/// full assignment is supplied by the caller.
template <class Accept, class Admit>
class MapSearch {
public:
    MapSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::vector<std::size_t> domain,
              double limit, std::uint64_t budget, Admit admit, Accept accept)
        : x_(x), y_(y), domain_(std::move(domain)), limit_(limit), budget_(budget),
          admit_(std::move(admit)), accept_(std::move(accept)), f_(x.size()) {}

    std::optional<PartialMap> run() {
        if (step(0)) return f_;
        return std::nullopt;
    }

private:
    bool step(std::size_t k) {
        if (++nodes_ > budget_) {
            throw Error(ErrorCode::SizeLimitExceeded, "map search exceeded " + std::to_string(budget_) + " nodes");
        }
        if (k == domain_.size()) return accept_(f_);
        const std::size_t u = domain_[k];
        for (std::size_t v = 0; v < y_.size(); ++v) {
            if (!admit_(u, v)) continue;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                const std::size_t w = domain_[j];
                ok = std::abs(y_(v, *f_[w]) - x_(u, w)) <= limit_;
            }
            if (!ok) continue;
            f_[u] = v;
            if (step(k + 1)) return true;
            f_[u].reset();
        }
        return false;
    }

    const FiniteMetricSpace& x_;
    const FiniteMetricSpace& y_;
    std::vector<std::size_t> domain_;
    double limit_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    Admit admit_;
    Accept accept_;
    PartialMap f_;
};

template <class Accept, class Admit>
std::optional<PartialMap> search_maps(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                      std::vector<std::size_t> domain, double limit, std::uint64_t budget,
                                      Admit admit, Accept accept) {
    return MapSearch<Accept, Admit>(x, y, std::move(domain), limit, budget, std::move(admit),
                                    std::move(accept))
        .run();
}

/// Largest distance from a target point to the image of f.
inline double cover_gap(const FiniteMetricSpace& y, const PartialMap& f, const SubsetRef& target) {
    double worst = 0.0;
    for (std::size_t t : target) {
        double best = kInfinity;
        for (const auto& v : f)
            if (v) best = std::min(best, y(t, *v));
        worst = std::max(worst, best);
    }
    return worst;
}

inline double subset_image_gap(const FiniteMetricSpace& y, const PartialMap& f, const SubsetRef& a,
                               const SubsetRef& b) {
    std::vector<std::size_t> img;
    for (std::size_t i : a) img.push_back(*f[i]);
    return hausdorff(y, SubsetRef(std::move(img)), b);
}

}  // namespace detail

/// First map (lexicographic) from the closed R-ball of A into the right
/// space that is an eps-rough isometry onto the closed (R - eps)-ball of B:
/// distortion < eps, d_H(f(A), B) < eps, and the target ball inside the
/// eps-neighbourhood of the image (all read as "<= eps + tau").
inline std::optional<RoughIsometryWitness> rough_isometry_search(const MetricPair& p, const MetricPair& q,
                                                                 double radius, double eps,
                                                                 const SolverOptions& opts = {}) {
    detail::require_positive(eps, "eps");
    if (!(radius > eps)) throw Error(ErrorCode::InvalidArgument, "need R > eps");
    const double limit = eps + detail::joint_tolerance(p.space, q.space);
    const SubsetRef domain = closed_ball(p.space, p.subset, radius);
    const SubsetRef target = closed_ball(q.space, q.subset, radius - eps);
    auto admit = [&](std::size_t u, std::size_t v) {
        return !p.subset.contains(u) || q.space.distance_to(v, q.subset) <= limit;
    };
    auto accept = [&](const PartialMap& f) {
        return detail::subset_image_gap(q.space, f, p.subset, q.subset) <= limit &&
               detail::cover_gap(q.space, f, target) <= limit;
    };
    auto f = detail::search_maps(p.space, q.space, domain.indices(), limit, opts.budget, admit, accept);
    if (!f) return std::nullopt;
    return RoughIsometryWitness{std::move(*f), eps, radius};
}

/// Distance-preserving bijection (within tau) carrying every chain level onto
/// the corresponding level, first in lexicographic order.
inline std::optional<IndexMap> tuple_isometry_search(const MetricTuple& t, const MetricTuple& u,
                                                     const SolverOptions& opts = {}) {
    const std::size_t n = t.space.size();
    if (n != u.space.size() || t.levels() != u.levels()) return std::nullopt;
    for (std::size_t k = 0; k < t.levels(); ++k)
        if (t.chain[k].size() != u.chain[k].size()) return std::nullopt;
    const double tau = detail::joint_tolerance(t.space, u.space);
    std::vector<bool> used(n, false);
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    auto admit = [&](std::size_t x, std::size_t y) {
        if (used[y]) return false;
        for (std::size_t k = 0; k < t.levels(); ++k)
            if (t.chain[k].contains(x) != u.chain[k].contains(y)) return false;
        return true;
    };
    // Injectivity is tracked through `used`, kept in sync by a wrapping admit.
    std::optional<IndexMap> result;
    std::uint64_t nodes = 0;
    IndexMap f(n);
    auto rec = [&](auto&& self, std::size_t x) -> bool {
        if (++nodes > opts.budget) {
            throw Error(ErrorCode::SizeLimitExceeded, "isometry search exceeded the budget");
        }
        if (x == n) return true;
        for (std::size_t y = 0; y < n; ++y) {
            if (!admit(x, y)) continue;
            bool ok = true;
            for (std::size_t x2 = 0; x2 < x && ok; ++x2)
                ok = std::abs(u.space(y, f[x2]) - t.space(x, x2)) <= tau;
            if (!ok) continue;
            f[x] = y;
            used[y] = true;
            if (self(self, x + 1)) return true;
            used[y] = false;
        }
        return false;
    };
    if (rec(rec, 0)) result = f;
    return result;
}

inline std::optional<IndexMap> pair_isometry_search(const MetricPair& p, const MetricPair& q,
                                                    const SolverOptions& opts = {}) {
    return tuple_isometry_search(MetricTuple(p), MetricTuple(q), opts);
}

enum class ConvergenceClause { None, Distortion, SubsetHausdorff, BallCovering };

inline const char* to_string(ConvergenceClause c) {
    switch (c) {
        case ConvergenceClause::None: return "none";
        case ConvergenceClause::Distortion: return "distortion";
        case ConvergenceClause::SubsetHausdorff: return "subset_hausdorff";
        case ConvergenceClause::BallCovering: return "ball_covering";
    }
    return "unknown";
}

struct ConvergenceEntry {
    std::size_t index = 0;
    double eps = 0.0;
    double radius = 0.0;
    bool passed = false;
    ConvergenceClause failing_clause = ConvergenceClause::None;
    double min_feasible_eps = 0.0;
    PartialMap map;
};

struct ConvergenceReport {
    std::vector<ConvergenceEntry> entries;
    bool all_passed() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
    }
};

namespace detail {

/// Map phi from the closed R-ball of A_i into the target space with the
/// three clauses of pair convergence at eps; `clauses` selects how many of
/// them are enforced (1, 2 or 3) so a failure can be attributed.
inline std::optional<PartialMap> convergence_map(const MetricPair& member, const MetricPair& target,
                                                 double eps, double radius, int clauses,
                                                 std::uint64_t budget) {
    const double limit = eps + joint_tolerance(member.space, target.space);
    const SubsetRef domain = closed_ball(member.space, member.subset, radius);
    const SubsetRef covered = closed_ball(target.space, target.subset, radius);
    auto admit = [&](std::size_t u, std::size_t v) {
        return clauses < 2 || !member.subset.contains(u) ||
               target.space.distance_to(v, target.subset) <= limit;
    };
    auto accept = [&](const PartialMap& f) {
        if (clauses >= 2 && subset_image_gap(target.space, f, member.subset, target.subset) > limit) return false;
        if (clauses >= 3 && cover_gap(target.space, f, covered) > limit) return false;
        return true;
    };
    return search_maps(member.space, target.space, domain.indices(), limit, budget, admit, accept);
}

}  // namespace detail

/// Checks each sequence member against the target at its scheduled (eps_i,
/// R_i), and reports the least eps at which the three clauses hold with R_i
/// fixed (found exactly over the finite set of candidate values).
inline ConvergenceReport verify_convergence(const std::vector<MetricPair>& seq, const MetricPair& target,
                                            const ConvergenceSchedule& sched, const SolverOptions& opts = {}) {
    if (seq.size() != sched.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(seq.size()) + " pairs vs " +
                                                   std::to_string(sched.size()) + " schedule entries");
    }
    ConvergenceReport rep;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        ConvergenceEntry e;
        e.index = i;
        e.eps = sched.eps()[i];
        e.radius = sched.radii()[i];
        auto phi = detail::convergence_map(seq[i], target, e.eps, e.radius, 3, opts.budget);
        e.passed = phi.has_value();
        if (phi) {
            e.map = std::move(*phi);
        } else if (!detail::convergence_map(seq[i], target, e.eps, e.radius, 1, opts.budget)) {
            e.failing_clause = ConvergenceClause::Distortion;
        } else if (!detail::convergence_map(seq[i], target, e.eps, e.radius, 2, opts.budget)) {
            e.failing_clause = ConvergenceClause::SubsetHausdorff;
        } else {
            e.failing_clause = ConvergenceClause::BallCovering;
        }
        auto values = detail::clause_values(seq[i].space, target.space);
        std::size_t lo = 0, hi = values.size() - 1;
        auto ok = [&](std::size_t k) {
            return detail::convergence_map(seq[i], target, values[k], e.radius, 3, opts.budget).has_value();
        };
        if (ok(0)) {
            hi = 0;
        } else {
            while (hi - lo > 1) {
                std::size_t mid = (lo + hi) / 2;
                (ok(mid) ? hi : lo) = mid;
            }
        }
        e.min_feasible_eps = values[hi];
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace metric_pairs
