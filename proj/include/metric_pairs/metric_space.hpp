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
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/error.hpp"

namespace metric_pairs {

using Matrix = std::vector<std::vector<double>>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative tolerance used when a space is built without an explicit one.
inline constexpr double kDefaultRelativeTolerance = 1e-9;

/// Canonical (sorted, duplicate-free, nonempty) set of point indices into some
/// parent space. Range checks happen against the space at the point of use.
class SubsetRef {
public:
    explicit SubsetRef(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
        if (indices_.empty()) {
            throw Error(ErrorCode::InvalidSubset, "subset must be nonempty");
        }
    }

    static SubsetRef full(std::size_t n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return SubsetRef(std::move(all));
    }
    static SubsetRef single(std::size_t i) { return SubsetRef({i}); }

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t operator[](std::size_t k) const { return indices_[k]; }
    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }
    std::size_t back() const { return indices_.back(); }

    bool contains(std::size_t i) const {
        return std::binary_search(indices_.begin(), indices_.end(), i);
    }
    bool is_subset_of(const SubsetRef& other) const {
        return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                             indices_.end());
    }

    friend bool operator==(const SubsetRef&, const SubsetRef&) = default;
    friend auto operator<=>(const SubsetRef&, const SubsetRef&) = default;

private:
    std::vector<std::size_t> indices_;
};

/// One failed metric axiom. For TriangleViolation the offending inequality is
/// d(i,k) <= d(i,j) + d(j,k); other kinds use (i, j) and leave k unset.
struct Violation {
    ErrorCode kind;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    double excess = 0.0;
};

struct MetricValidation;

MetricValidation validate_metric(const Matrix& matrix, double tolerance,
                                 std::vector<std::string> labels = {});

/// A labelled finite metric space with a validated, exactly symmetric distance
/// matrix. Immutable once built; every threshold comparison in the library
/// uses tolerance().
class FiniteMetricSpace {
public:
    /// Validates and throws the first violation. Without an explicit tolerance
    /// the space uses kDefaultRelativeTolerance times its diameter.
    static FiniteMetricSpace from_matrix(const Matrix& matrix, std::vector<std::string> labels = {},
                                         std::optional<double> tolerance = std::nullopt);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
    double tolerance() const noexcept { return tolerance_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::optional<std::size_t> index_of(const std::string& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - labels_.begin());
    }

    Matrix matrix() const {
        Matrix m(n_, std::vector<double>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m[i][j] = (*this)(i, j);
        return m;
    }

    /// min over members; attained because the subset is finite.
    double distance_to(std::size_t i, const SubsetRef& subset) const {
        double best = kInfinity;
        for (std::size_t a : subset) best = std::min(best, (*this)(i, a));
        return best;
    }

    void check(const SubsetRef& subset) const {
        if (subset.back() >= n_) {
            throw Error(ErrorCode::InvalidSubset,
                        "index " + std::to_string(subset.back()) + " out of range for a " +
                            std::to_string(n_) + "-point space",
                        {subset.back()});
        }
    }

    friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
        return a.n_ == b.n_ && a.dist_ == b.dist_ && a.labels_ == b.labels_ &&
               a.tolerance_ == b.tolerance_;
    }

private:
    friend MetricValidation validate_metric(const Matrix&, double, std::vector<std::string>);
    FiniteMetricSpace() = default;

    std::size_t n_ = 0;
    std::vector<double> dist_;
    std::vector<std::string> labels_;
    double tolerance_ = 0.0;
};

struct MetricValidation {
    std::optional<FiniteMetricSpace> space;
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

inline std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return labels;
}

inline double max_entry(const Matrix& matrix) {
    double m = 0.0;
    for (const auto& row : matrix)
        for (double v : row)
            if (std::isfinite(v)) m = std::max(m, v);
    return m;
}

inline MetricValidation validate_metric(const Matrix& matrix, double tolerance,
                                        std::vector<std::string> labels) {
    const std::size_t n = matrix.size();
    if (n == 0) throw Error(ErrorCode::NotSquare, "matrix is empty");
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n) {
            throw Error(ErrorCode::NotSquare,
                        "row " + std::to_string(i) + " has " + std::to_string(matrix[i].size()) +
                            " entries, expected " + std::to_string(n),
                        {i});
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(matrix[i][j])) {
                throw Error(ErrorCode::NonFinite,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ")", {i, j});
            }
        }
    }
    if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance must be finite and nonnegative");
    }
    if (labels.empty()) labels = default_labels(n);
    if (labels.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "label count does not match matrix size");
    }

    MetricValidation out;
    auto& bad = out.violations;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(matrix[i][i]) > tolerance) {
            bad.push_back({ErrorCode::NonZeroDiagonal, i, i, 0, std::abs(matrix[i][i])});
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (matrix[i][j] < 0.0) bad.push_back({ErrorCode::NegativeEntry, i, j, 0, -matrix[i][j]});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double gap = std::abs(matrix[i][j] - matrix[j][i]);
            if (gap > tolerance) bad.push_back({ErrorCode::AsymmetricMatrix, i, j, 0, gap});
            if (matrix[i][j] <= tolerance && matrix[i][j] >= 0.0) {
                bad.push_back({ErrorCode::ZeroOffDiagonal, i, j, 0, matrix[i][j]});
            }
        }
    }
    // Upper triangle is canonical.
    auto d = [&](std::size_t a, std::size_t b) {
        if (a == b) return 0.0;
        return a < b ? matrix[a][b] : matrix[b][a];
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                double excess = d(i, k) - (d(i, j) + d(j, k));
                if (excess > tolerance) bad.push_back({ErrorCode::TriangleViolation, i, j, k, excess});
            }
        }
    }
    if (!bad.empty()) return out;

    FiniteMetricSpace space;
    space.n_ = n;
    space.dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) space.dist_[i * n + j] = d(i, j);
    space.labels_ = std::move(labels);
    space.tolerance_ = tolerance;
    out.space = std::move(space);
    return out;
}

inline std::string describe(const Violation& v) {
    std::string s(to_string(v.kind));
    s += "(" + std::to_string(v.i) + "," + std::to_string(v.j);
    if (v.kind == ErrorCode::TriangleViolation) s += "," + std::to_string(v.k);
    return s + ")";
}

inline FiniteMetricSpace FiniteMetricSpace::from_matrix(const Matrix& matrix,
                                                        std::vector<std::string> labels,
                                                        std::optional<double> tolerance) {
    double tau = tolerance.value_or(kDefaultRelativeTolerance * max_entry(matrix));
    auto result = validate_metric(matrix, tau, std::move(labels));
    if (!result.ok()) {
        const Violation& v = result.violations.front();
        std::vector<std::size_t> where{v.i, v.j};
        if (v.kind == ErrorCode::TriangleViolation) where.push_back(v.k);
        throw Error(v.kind, describe(v) + " and " + std::to_string(result.violations.size() - 1) +
                                " further violation(s)",
                    where);
    }
    return std::move(*result.space);
}

enum class BallKind { Open, Closed };

/// Points within r of the subset: d < r for open balls, d <= r + tau for
/// closed ones. nullopt is the (only possible) empty result: an open ball of
/// radius zero.
inline std::optional<SubsetRef> ball(const FiniteMetricSpace& space, const SubsetRef& center,
                                     double r, BallKind kind) {
    if (r < 0.0) throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(r));
    space.check(center);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < space.size(); ++i) {
        double d = space.distance_to(i, center);
        bool inside = kind == BallKind::Open ? d < r : d <= r + space.tolerance();
        if (inside) members.push_back(i);
    }
    if (members.empty()) return std::nullopt;
    return SubsetRef(std::move(members));
}

/// Closed balls are never empty, so this variant skips the optional.
inline SubsetRef closed_ball(const FiniteMetricSpace& space, const SubsetRef& center, double r) {
    return *ball(space, center, r, BallKind::Closed);
}

inline double diam(const FiniteMetricSpace& space, const SubsetRef& subset) {
    space.check(subset);
    double best = 0.0;
    for (std::size_t a : subset)
        for (std::size_t b : subset) best = std::max(best, space(a, b));
    return best;
}

inline double diam(const FiniteMetricSpace& space) { return diam(space, SubsetRef::full(space.size())); }

inline FiniteMetricSpace restrict(const FiniteMetricSpace& space, const SubsetRef& subset) {
    space.check(subset);
    const std::size_t m = subset.size();
    Matrix sub(m, std::vector<double>(m));
    std::vector<std::string> labels(m);
    for (std::size_t a = 0; a < m; ++a) {
        labels[a] = space.label(subset[a]);
        for (std::size_t b = 0; b < m; ++b) sub[a][b] = space(subset[a], subset[b]);
    }
    return FiniteMetricSpace::from_matrix(sub, std::move(labels), space.tolerance());
}

struct WeightedEdge {
    std::size_t u;
    std::size_t v;
    double weight;
};

/// Undirected graph with positive edge weights. Connectivity is checked when
/// the metric closure is taken.
class WeightedGraph {
public:
    WeightedGraph(std::size_t vertices, std::vector<WeightedEdge> edges)
        : vertices_(vertices), edges_(std::move(edges)) {
        if (vertices_ == 0) throw Error(ErrorCode::InvalidArgument, "graph needs a vertex");
        for (const auto& e : edges_) {
            if (e.u >= vertices_ || e.v >= vertices_) {
                throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range", {e.u, e.v});
            }
            if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
                throw Error(ErrorCode::InvalidArgument, "edge weights must be positive", {e.u, e.v});
            }
        }
    }

    std::size_t vertices() const noexcept { return vertices_; }
    const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

    /// Path graph 0 - 1 - ... - (n-1) with a common step.
    static WeightedGraph path(std::size_t n, double step) {
        std::vector<WeightedEdge> edges;
        for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, step});
        return WeightedGraph(n, std::move(edges));
    }

private:
    std::size_t vertices_;
    std::vector<WeightedEdge> edges_;
};

namespace detail {

/// Floyd-Warshall on a flat n x n matrix, repeated until a sweep changes
/// nothing so the result satisfies the triangle inequality exactly in
/// floating point.
inline void floyd_warshall(std::vector<double>& d, std::size_t n) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const double dik = d[i * n + k];
                if (dik == kInfinity) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    const double via = dik + d[k * n + j];
                    if (via < d[i * n + j]) {
                        d[i * n + j] = via;
                        changed = true;
                    }
                }
            }
        }
    }
}

}  // namespace detail

inline FiniteMetricSpace shortest_path_closure(const WeightedGraph& g,
                                               std::vector<std::string> labels = {}) {
    const std::size_t n = g.vertices();
    std::vector<double> d(n * n, kInfinity);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (const auto& e : g.edges()) {
        if (e.u == e.v) continue;
        d[e.u * n + e.v] = std::min(d[e.u * n + e.v], e.weight);
        d[e.v * n + e.u] = std::min(d[e.v * n + e.u], e.weight);
    }
    detail::floyd_warshall(d, n);
    Matrix m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i * n + j] == kInfinity) {
                throw Error(ErrorCode::DisconnectedGraph,
                            "no path between " + std::to_string(i) + " and " + std::to_string(j),
                            {i, j});
            }
            m[i][j] = d[i * n + j];
        }
    }
    return FiniteMetricSpace::from_matrix(m, std::move(labels));
}

}  // namespace metric_pairs
