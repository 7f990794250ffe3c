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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/error.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

/// Default cap on search nodes for every exhaustive search in the library.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

namespace detail {

/// "Point `node` must end up within `cap` of at least one of `partners`."
/// Indices live in the disjoint union: left points first, then right points.
struct Requirement {
    std::size_t node;
    std::vector<std::size_t> partners;
    double cap;
};

/// Decides whether some (pseudo-)gluing of two spaces meets a list of
/// requirements, and produces the smallest such gluing when one exists.
///
/// Each requirement is met by a single cross edge of length `cap` to one of
/// its partners; the candidate gluing is the shortest-path closure of both
/// spaces plus the chosen edges. Adding edges only shortens paths, so a
/// partial choice that already shortcuts a within-space distance can be
/// abandoned, and a requirement the current closure already meets never
/// needs an edge of its own. Both rules are exact, so the search is
/// complete: any admissible gluing meeting the requirements dominates the
/// closure of its own nearest-partner edges, which the search visits.
class GluingSearch {
public:
    GluingSearch(const FiniteMetricSpace& left, const FiniteMetricSpace& right, double tolerance,
                 std::uint64_t budget = kDefaultBudget)
        : n_left_(left.size()), n_(left.size() + right.size()), tol_(tolerance), budget_(budget) {
        base_.assign(n_ * n_, kInfinity);
        for (std::size_t i = 0; i < n_left_; ++i)
            for (std::size_t j = 0; j < n_left_; ++j) base_[i * n_ + j] = left(i, j);
        for (std::size_t i = 0; i < right.size(); ++i)
            for (std::size_t j = 0; j < right.size(); ++j)
                base_[(n_left_ + i) * n_ + n_left_ + j] = right(i, j);
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t left_size() const noexcept { return n_left_; }
    std::uint64_t nodes() const noexcept { return nodes_; }

    /// Closure matrix of a gluing meeting every requirement, or nullopt.
    /// Throws SizeLimitExceeded when the node budget runs out.
    std::optional<std::vector<double>> solve(const std::vector<Requirement>& reqs) {
        std::vector<double> d = base_;
        if (recurse(d, reqs)) return d;
        return std::nullopt;
    }

    bool same_side(std::size_t i, std::size_t j) const noexcept {
        return (i < n_left_) == (j < n_left_);
    }

    /// Whether an edge (u, v, w) keeps every within-space distance intact.
    /// A shortcut through the new edge would run i ~> u -> v ~> j with i, j
    /// on one side; since d restricted to a side is that side's metric, the
    /// worst i is u itself (or j is v itself), which leaves O(n) checks.
    bool can_add(const std::vector<double>& d, std::size_t u, std::size_t v, double w) const {
        const std::size_t lo_u = u < n_left_ ? 0 : n_left_, hi_u = u < n_left_ ? n_left_ : n_;
        for (std::size_t j = lo_u; j < hi_u; ++j)
            if (w + d[v * n_ + j] < base_[u * n_ + j] - tol_) return false;
        const std::size_t lo_v = v < n_left_ ? 0 : n_left_, hi_v = v < n_left_ ? n_left_ : n_;
        for (std::size_t i = lo_v; i < hi_v; ++i)
            if (d[i * n_ + u] + w < base_[i * n_ + v] - tol_) return false;
        return true;
    }

    /// Inserts edge (u, v, w) into an all-pairs closure in O(n^2).
    void add(std::vector<double>& d, std::size_t u, std::size_t v, double w) const {
        std::vector<double> du(n_), dv(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            du[i] = d[i * n_ + u];
            dv[i] = d[i * n_ + v];
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                double& dij = d[i * n_ + j];
                dij = std::min(dij, std::min(du[i] + w + dv[j], dv[i] + w + du[j]));
            }
        }
    }

    /// First within-space pair shortened by the closure, if any.
    std::optional<std::pair<std::size_t, std::size_t>> shortcut(const std::vector<double>& d) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (same_side(i, j) && d[i * n_ + j] < base_[i * n_ + j] - tol_) return {{i, j}};
        return std::nullopt;
    }

    std::vector<double> base() const { return base_; }

private:
    bool met(const std::vector<double>& d, const Requirement& r) const {
        for (std::size_t p : r.partners)
            if (d[r.node * n_ + p] <= r.cap + tol_) return true;
        return false;
    }

    bool recurse(std::vector<double>& d, const std::vector<Requirement>& reqs) {
        if (++nodes_ > budget_) {
            throw Error(ErrorCode::SizeLimitExceeded,
                        "gluing search exceeded " + std::to_string(budget_) + " nodes");
        }
        const Requirement* pick = nullptr;
        std::vector<std::size_t> pick_options;
        std::vector<std::size_t> options;
        for (const auto& r : reqs) {
            if (met(d, r)) continue;
            options.clear();
            for (std::size_t p : r.partners)
                if (can_add(d, r.node, p, r.cap)) options.push_back(p);
            if (options.empty()) return false;
            if (pick == nullptr || options.size() < pick_options.size()) {
                pick = &r;
                pick_options = options;
            }
        }
        if (pick == nullptr) return true;
        for (std::size_t p : pick_options) {
            std::vector<double> next = d;
            add(next, pick->node, p, pick->cap);
            if (recurse(next, reqs)) {
                d = std::move(next);
                return true;
            }
        }
        return false;
    }

    std::size_t n_left_;
    std::size_t n_;
    double tol_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<double> base_;
};

}  // namespace detail
}  // namespace metric_pairs
