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
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/error.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

/// A finite space with one distinguished nonempty subset, (X, A).
struct MetricPair {
    MetricPair(FiniteMetricSpace s, SubsetRef a) : space(std::move(s)), subset(std::move(a)) {
        space.check(subset);
    }

    FiniteMetricSpace space;
    SubsetRef subset;

    friend bool operator==(const MetricPair&, const MetricPair&) = default;
};

/// A finite space with a nested chain of nonempty subsets, stored innermost
/// first: chain[0] is the smallest set and chain.back() the largest.
struct MetricTuple {
    MetricTuple(FiniteMetricSpace s, std::vector<SubsetRef> levels)
        : space(std::move(s)), chain(std::move(levels)) {
        if (chain.empty()) throw Error(ErrorCode::InvalidSubset, "tuple chain must be nonempty");
        for (std::size_t k = 0; k < chain.size(); ++k) {
            space.check(chain[k]);
            if (k > 0 && !chain[k - 1].is_subset_of(chain[k])) {
                throw Error(ErrorCode::InvalidSubset,
                            "chain level " + std::to_string(k - 1) + " is not contained in level " +
                                std::to_string(k),
                            {k - 1, k});
            }
        }
    }

    explicit MetricTuple(const MetricPair& pair) : MetricTuple(pair.space, {pair.subset}) {}

    std::size_t levels() const noexcept { return chain.size(); }
    const SubsetRef& outermost() const { return chain.back(); }

    FiniteMetricSpace space;
    std::vector<SubsetRef> chain;

    friend bool operator==(const MetricTuple&, const MetricTuple&) = default;
};

/// max of the two directed max-min distances between subsets of one space.
inline double hausdorff(const FiniteMetricSpace& space, const SubsetRef& a, const SubsetRef& b) {
    space.check(a);
    space.check(b);
    double h = 0.0;
    for (std::size_t x : a) h = std::max(h, space.distance_to(x, b));
    for (std::size_t y : b) h = std::max(h, space.distance_to(y, a));
    return h;
}

/// Same, for two pairs that must share their ambient space.
inline double hausdorff(const MetricPair& p, const MetricPair& q) {
    if (!(p.space == q.space)) throw Error(ErrorCode::DifferentAmbient, "pairs live in different spaces");
    return hausdorff(p.space, p.subset, q.subset);
}

/// Hausdorff distance between a left subset and a right subset measured
/// through the gluing.
inline double cross_hausdorff(const CrossMetric& glue, const SubsetRef& left_subset,
                              const SubsetRef& right_subset) {
    glue.left().check(left_subset);
    glue.right().check(right_subset);
    double h = 0.0;
    for (std::size_t i : left_subset) h = std::max(h, glue.left_to(i, right_subset));
    for (std::size_t j : right_subset) h = std::max(h, glue.right_to(j, left_subset));
    return h;
}

inline double cross_hausdorff(const CrossMetric& glue) {
    return cross_hausdorff(glue, SubsetRef::full(glue.left_size()), SubsetRef::full(glue.right_size()));
}

inline void require_glue_joins(const CrossMetric& glue, const FiniteMetricSpace& left,
                               const FiniteMetricSpace& right) {
    if (!(glue.left() == left) || !(glue.right() == right)) {
        throw Error(ErrorCode::GlueMismatch, "gluing does not join the given spaces");
    }
}

/// d_H(X, Y) + d_H(A, B) inside the glued space.
inline double pair_hausdorff(const CrossMetric& glue, const MetricPair& p, const MetricPair& q) {
    require_glue_joins(glue, p.space, q.space);
    return cross_hausdorff(glue) + cross_hausdorff(glue, p.subset, q.subset);
}

/// d_H(X, Y) plus the Hausdorff distance of every chain level.
inline double tuple_hausdorff(const CrossMetric& glue, const MetricTuple& t, const MetricTuple& u) {
    if (t.levels() != u.levels()) {
        throw Error(ErrorCode::ChainLengthMismatch,
                    std::to_string(t.levels()) + " vs " + std::to_string(u.levels()) + " levels");
    }
    require_glue_joins(glue, t.space, u.space);
    double total = cross_hausdorff(glue);
    for (std::size_t k = 0; k < t.levels(); ++k) total += cross_hausdorff(glue, t.chain[k], u.chain[k]);
    return total;
}

}  // namespace metric_pairs
