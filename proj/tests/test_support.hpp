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

#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "metric_pairs.hpp"

namespace mp_test {

using namespace metric_pairs;
using json = nlohmann::json;

inline FiniteMetricSpace line(std::size_t n, double step = 1.0) {
    Matrix m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = step * std::abs(double(i) - double(j));
    return FiniteMetricSpace::from_matrix(m);
}

inline FiniteMetricSpace point() { return FiniteMetricSpace::from_matrix({{0.0}}); }

inline FiniteMetricSpace two_points(double d) { return FiniteMetricSpace::from_matrix({{0.0, d}, {d, 0.0}}); }

/// Euclidean distances of uniform points in a square.
inline FiniteMetricSpace plane(std::mt19937_64& rng, std::size_t n, double side = 3.0) {
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<std::pair<double, double>> p(n);
    for (auto& q : p) q = {u(rng), u(rng)};
    Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = std::hypot(p[i].first - p[j].first, p[i].second - p[j].second);
    return FiniteMetricSpace::from_matrix(m);
}

/// Shortest-path closure of a complete graph with weights in [lo, hi].
inline FiniteMetricSpace graph_metric(std::mt19937_64& rng, std::size_t n, double lo = 0.1, double hi = 10.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, u(rng)});
    return shortest_path_closure(WeightedGraph(n, edges));
}

inline SubsetRef random_subset(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (rng() % 2) idx.push_back(i);
    if (idx.empty()) idx.push_back(rng() % n);
    return SubsetRef(idx);
}

inline FiniteMetricSpace from_json_matrix(const json& j) { return FiniteMetricSpace::from_matrix(j.get<Matrix>()); }

inline SubsetRef subset_of(const json& j) { return SubsetRef(j.get<std::vector<std::size_t>>()); }

inline json load_fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    return json::parse(in);
}

/// Same space with points renumbered by perm (new index i is old perm[i]).
inline FiniteMetricSpace permuted(const FiniteMetricSpace& s, const std::vector<std::size_t>& perm) {
    Matrix m(s.size(), std::vector<double>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) m[i][j] = s(perm[i], perm[j]);
    return FiniteMetricSpace::from_matrix(m);
}

}  // namespace mp_test
