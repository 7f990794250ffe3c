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

#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/error.hpp"
#include "metric_pairs/gh_solver.hpp"
#include "metric_pairs/hausdorff.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

/// A finite chain of pairs glued consecutively, with the shortest-path
/// (pseudo-)metric on the disjoint union of all members. Points are
/// addressed as (member, index); the flat ambient index puts the members
/// one after another.
class ChainGluing {
public:
    const std::vector<MetricPair>& pairs() const noexcept { return pairs_; }
    const std::vector<CrossMetric>& glues() const noexcept { return glues_; }
    const std::vector<double>& eps_budget() const noexcept { return budget_; }
    std::size_t members() const noexcept { return pairs_.size(); }
    std::size_t ambient_size() const noexcept { return total_; }
    std::size_t offset(std::size_t member) const { return offsets_.at(member); }
    double tolerance() const noexcept { return tau_; }

    double ambient(std::size_t i, std::size_t a, std::size_t j, std::size_t b) const {
        return d_[(offsets_.at(i) + a) * total_ + offsets_.at(j) + b];
    }

    /// Hausdorff distance inside the ambient between subsets of two members.
    double ambient_hausdorff(std::size_t i, const SubsetRef& s, std::size_t j, const SubsetRef& t) const {
        auto one_way = [&](std::size_t m1, const SubsetRef& a, std::size_t m2, const SubsetRef& b) {
            double worst = 0.0;
            for (std::size_t x : a) {
                double best = kInfinity;
                for (std::size_t y : b) best = std::min(best, ambient(m1, x, m2, y));
                worst = std::max(worst, best);
            }
            return worst;
        };
        return std::max(one_way(i, s, j, t), one_way(j, t, i, s));
    }

    friend ChainGluing build_chain(std::vector<MetricPair> pairs, std::vector<CrossMetric> glues,
                                   std::vector<double> eps_budget);

private:
    ChainGluing() = default;

    std::vector<MetricPair> pairs_;
    std::vector<CrossMetric> glues_;
    std::vector<double> budget_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
    double tau_ = 0.0;
    std::vector<double> d_;
};

/// Glues the members along the given cross metrics and closes under
/// shortest paths. A path through other members that shortens a distance
/// inside a member raises ShortcutDetected with indices {member, i, j}.
inline ChainGluing build_chain(std::vector<MetricPair> pairs, std::vector<CrossMetric> glues,
                               std::vector<double> eps_budget) {
    if (pairs.size() < 2) throw Error(ErrorCode::LengthMismatch, "a chain needs at least two pairs");
    if (glues.size() + 1 != pairs.size() || eps_budget.size() + 1 != pairs.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(pairs.size()) + " pairs need " +
                                                   std::to_string(pairs.size() - 1) + " glues and budgets");
    }
    for (std::size_t i = 0; i < glues.size(); ++i) {
        require_glue_joins(glues[i], pairs[i].space, pairs[i + 1].space);
        if (!(eps_budget[i] > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "budgets must be positive", {i});
    }
    ChainGluing c;
    for (const auto& p : pairs) {
        c.offsets_.push_back(c.total_);
        c.total_ += p.space.size();
        c.tau_ = std::max(c.tau_, p.space.tolerance());
    }
    const std::size_t n = c.total_;
    c.d_.assign(n * n, kInfinity);
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        const auto& s = pairs[m].space;
        const std::size_t o = c.offsets_[m];
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b) c.d_[(o + a) * n + o + b] = s(a, b);
    }
    for (std::size_t m = 0; m < glues.size(); ++m) {
        const std::size_t o1 = c.offsets_[m], o2 = c.offsets_[m + 1];
        for (std::size_t a = 0; a < glues[m].left_size(); ++a) {
            for (std::size_t b = 0; b < glues[m].right_size(); ++b) {
                c.d_[(o1 + a) * n + o2 + b] = glues[m](a, b);
                c.d_[(o2 + b) * n + o1 + a] = glues[m](a, b);
            }
        }
    }
    detail::floyd_warshall(c.d_, n);
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        const auto& s = pairs[m].space;
        const std::size_t o = c.offsets_[m];
        for (std::size_t a = 0; a < s.size(); ++a) {
            for (std::size_t b = a + 1; b < s.size(); ++b) {
                if (c.d_[(o + a) * n + o + b] < s(a, b) - c.tau_) {
                    throw Error(ErrorCode::ShortcutDetected,
                                "member " + std::to_string(m) + ": points " + std::to_string(a) + " and " +
                                    std::to_string(b) + " are joined by a shorter path through the chain",
                                {m, a, b});
                }
            }
        }
    }
    // Shortcuts are reported first since they name the member that breaks;
    // any other inconsistency of a glue is caught here.
    for (std::size_t i = 0; i < glues.size(); ++i) {
        auto bad = glues[i].violations(1);
        if (!bad.empty()) {
            throw Error(ErrorCode::InvalidGlue, "glue " + std::to_string(i) + " is not admissible",
                        {i, bad.front().a, bad.front().b, bad.front().c});
        }
    }
    c.pairs_ = std::move(pairs);
    c.glues_ = std::move(glues);
    c.budget_ = std::move(eps_budget);
    return c;
}

/// Finite stand-in for the limit: the last member's space with W, the points
/// of its subset reached by a chain a_1, ..., a_k with a_i in A_i and
/// ambient d(a_i, a_{i+1}) <= budget_i + tau. `paths[w]` is the
/// lexicographically first such chain ending at W[w].
struct LimitProxy {
    MetricPair z_pair;
    std::vector<std::vector<std::size_t>> paths;
};

inline LimitProxy limit_proxy(const ChainGluing& chain) {
    const std::size_t k = chain.members();
    // pred[i][a]: chosen predecessor in member i-1 of point a of member i
    std::vector<std::vector<std::optional<std::size_t>>> pred(k);
    std::vector<std::vector<bool>> reach(k);
    for (std::size_t i = 0; i < k; ++i) {
        pred[i].assign(chain.pairs()[i].space.size(), std::nullopt);
        reach[i].assign(chain.pairs()[i].space.size(), false);
    }
    for (std::size_t a : chain.pairs()[0].subset) reach[0][a] = true;
    for (std::size_t i = 1; i < k; ++i) {
        const double limit = chain.eps_budget()[i - 1] + chain.tolerance();
        for (std::size_t a : chain.pairs()[i].subset) {
            for (std::size_t b : chain.pairs()[i - 1].subset) {
                if (reach[i - 1][b] && chain.ambient(i - 1, b, i, a) <= limit) {
                    reach[i][a] = true;
                    pred[i][a] = b;
                    break;
                }
            }
        }
    }
    std::vector<std::size_t> w;
    std::vector<std::vector<std::size_t>> paths;
    for (std::size_t a : chain.pairs()[k - 1].subset) {
        if (!reach[k - 1][a]) continue;
        w.push_back(a);
        std::vector<std::size_t> path(k);
        path[k - 1] = a;
        for (std::size_t i = k - 1; i > 0; --i) path[i - 1] = *pred[i][path[i]];
        paths.push_back(std::move(path));
    }
    if (w.empty()) throw Error(ErrorCode::EmptyLimit, "no budget-respecting chain reaches the last member");
    return LimitProxy{MetricPair{chain.pairs()[k - 1].space, SubsetRef(std::move(w))}, std::move(paths)};
}

struct ChainMemberReport {
    std::size_t index = 0;
    DistanceBracket compact;
    DistanceBracket truncated;
    /// sum of eps_budget[j] for j >= index
    double tail_sum = 0.0;
    /// ambient Hausdorff distance between A_index and W
    double ambient_hausdorff = 0.0;
    /// compact.hi <= tail_sum + resolution
    bool dominated = false;
    /// compact.hi <= 2 tail_sum + resolution
    bool dominated_twice = false;
};

struct ChainConvergenceReport {
    double resolution = 0.0;
    std::vector<ChainMemberReport> members;
    /// The proxy is the last member with W, not a completion of the union.
    std::string surrogate_note = "limit proxy is the last chain member paired with W";
};

inline ChainConvergenceReport chain_convergence_report(const ChainGluing& chain, const LimitProxy& proxy,
                                                       double resolution, const SolverOptions& opts = {}) {
    ChainConvergenceReport rep;
    rep.resolution = resolution;
    const std::size_t k = chain.members();
    for (std::size_t i = 0; i < k; ++i) {
        ChainMemberReport m;
        m.index = i;
        const auto& member = chain.pairs()[i];
        m.compact = gh_compact_pair(member, proxy.z_pair, resolution, opts);
        m.truncated = gh_truncated_pair(member, proxy.z_pair, std::min(resolution, 0.5), opts);
        for (std::size_t j = i; j + 1 < k; ++j) m.tail_sum += chain.eps_budget()[j];
        m.ambient_hausdorff = chain.ambient_hausdorff(i, member.subset, k - 1, proxy.z_pair.subset);
        m.dominated = m.compact.hi <= m.tail_sum + resolution;
        m.dominated_twice = m.compact.hi <= 2.0 * m.tail_sum + resolution;
        rep.members.push_back(std::move(m));
    }
    return rep;
}

}  // namespace metric_pairs
