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
#include <string>
#include <utility>
#include <vector>

#include "metric_pairs/error.hpp"
#include "metric_pairs/metric_space.hpp"

namespace metric_pairs {

/// A failed mixed triangle inequality of a gluing.
///   family 1: cross[a][c] <= dL(a,b) + cross[b][c]      (a, b left; c right)
///   family 2: cross[a][b] <= cross[a][c] + dR(c,b)      (a left; b, c right)
///   family 3: dL(a,b) <= cross[a][c] + cross[b][c]      (a, b left; c right)
///   family 4: dR(b,c) <= cross[a][b] + cross[a][c]      (a left; b, c right)
/// family 0 flags a bad entry (negative, non-finite, or zero without pseudo).
struct GlueViolation {
    int family = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t c = 0;
    double excess = 0.0;
};

/// An admissible (pseudo-)metric on the disjoint union of two spaces, stored
/// as the left x right block of cross distances. Within-space distances are
/// always read from the spaces themselves.
class CrossMetric {
public:
    /// Validating constructor; throws InvalidGlue naming the first violation.
    static CrossMetric make(FiniteMetricSpace left, FiniteMetricSpace right, std::vector<double> cross,
                            bool pseudo) {
        CrossMetric g = unchecked(std::move(left), std::move(right), std::move(cross), pseudo);
        auto bad = g.violations(1);
        if (!bad.empty()) {
            const auto& v = bad.front();
            throw Error(ErrorCode::InvalidGlue,
                        "family " + std::to_string(v.family) + " at (" + std::to_string(v.a) + "," +
                            std::to_string(v.b) + "," + std::to_string(v.c) + "), excess " +
                            std::to_string(v.excess),
                        {static_cast<std::size_t>(v.family), v.a, v.b, v.c});
        }
        return g;
    }

    static CrossMetric make(FiniteMetricSpace left, FiniteMetricSpace right, const Matrix& cross,
                            bool pseudo = false) {
        auto flat = flatten(left.size(), right.size(), cross);
        return make(std::move(left), std::move(right), std::move(flat), pseudo);
    }

    /// No validation. Used for imported certificates and for planting bad
    /// gluings in tests; call violations() before trusting the result.
    static CrossMetric unchecked(FiniteMetricSpace left, FiniteMetricSpace right,
                                 std::vector<double> cross, bool pseudo) {
        if (cross.size() != left.size() * right.size()) {
            throw Error(ErrorCode::GlueMismatch, "cross block has " + std::to_string(cross.size()) +
                                                     " entries, expected " +
                                                     std::to_string(left.size() * right.size()));
        }
        CrossMetric g;
        g.tolerance_ = std::max(left.tolerance(), right.tolerance());
        g.left_ = std::move(left);
        g.right_ = std::move(right);
        g.cross_ = std::move(cross);
        g.pseudo_ = pseudo;
        return g;
    }

    static CrossMetric unchecked(FiniteMetricSpace left, FiniteMetricSpace right, const Matrix& cross,
                                 bool pseudo = false) {
        auto flat = flatten(left.size(), right.size(), cross);
        return unchecked(std::move(left), std::move(right), std::move(flat), pseudo);
    }

    const FiniteMetricSpace& left() const noexcept { return left_; }
    const FiniteMetricSpace& right() const noexcept { return right_; }
    bool pseudo() const noexcept { return pseudo_; }
    double tolerance() const noexcept { return tolerance_; }
    std::size_t left_size() const noexcept { return left_.size(); }
    std::size_t right_size() const noexcept { return right_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return cross_[i * right_.size() + j];
    }
    const std::vector<double>& cross() const noexcept { return cross_; }

    Matrix cross_matrix() const {
        Matrix m(left_.size(), std::vector<double>(right_.size()));
        for (std::size_t i = 0; i < left_.size(); ++i)
            for (std::size_t j = 0; j < right_.size(); ++j) m[i][j] = (*this)(i, j);
        return m;
    }

    /// Distance on the disjoint union; indices [0, |left|) are left points,
    /// the rest are right points shifted by |left|.
    double ambient(std::size_t u, std::size_t v) const noexcept {
        const std::size_t n = left_.size();
        if (u < n && v < n) return left_(u, v);
        if (u >= n && v >= n) return right_(u - n, v - n);
        if (u < n) return (*this)(u, v - n);
        return (*this)(v, u - n);
    }

    /// Smallest cross distance from left point i to any member of a right subset.
    double left_to(std::size_t i, const SubsetRef& right_subset) const {
        double best = kInfinity;
        for (std::size_t j : right_subset) best = std::min(best, (*this)(i, j));
        return best;
    }
    double right_to(std::size_t j, const SubsetRef& left_subset) const {
        double best = kInfinity;
        for (std::size_t i : left_subset) best = std::min(best, (*this)(i, j));
        return best;
    }

    CrossMetric mirrored() const {
        std::vector<double> t(cross_.size());
        const std::size_t n = left_.size(), m = right_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) t[j * n + i] = cross_[i * m + j];
        return unchecked(right_, left_, std::move(t), pseudo_);
    }

    /// Exhaustive check of every mixed triangle inequality within tolerance().
    /// Stops after `limit` findings when limit > 0.
    std::vector<GlueViolation> violations(std::size_t limit = 0) const {
        std::vector<GlueViolation> out;
        const std::size_t n = left_.size(), m = right_.size();
        const double tau = tolerance_;
        auto full = [&] { return limit > 0 && out.size() >= limit; };
        for (std::size_t i = 0; i < n && !full(); ++i) {
            for (std::size_t j = 0; j < m && !full(); ++j) {
                double c = (*this)(i, j);
                if (!std::isfinite(c) || c < 0.0 || (!pseudo_ && c <= tau)) {
                    out.push_back({0, i, j, 0, std::isfinite(c) ? tau - c : kInfinity});
                }
            }
        }
        for (std::size_t i = 0; i < n && !full(); ++i) {
            for (std::size_t i2 = 0; i2 < n && !full(); ++i2) {
                for (std::size_t j = 0; j < m && !full(); ++j) {
                    double e1 = (*this)(i, j) - (left_(i, i2) + (*this)(i2, j));
                    if (e1 > tau) out.push_back({1, i, i2, j, e1});
                    double e3 = left_(i, i2) - ((*this)(i, j) + (*this)(i2, j));
                    if (i < i2 && e3 > tau) out.push_back({3, i, i2, j, e3});
                }
            }
        }
        for (std::size_t i = 0; i < n && !full(); ++i) {
            for (std::size_t j = 0; j < m && !full(); ++j) {
                for (std::size_t j2 = 0; j2 < m && !full(); ++j2) {
                    double e2 = (*this)(i, j) - ((*this)(i, j2) + right_(j2, j));
                    if (e2 > tau) out.push_back({2, i, j, j2, e2});
                    double e4 = right_(j, j2) - ((*this)(i, j) + (*this)(i, j2));
                    if (j < j2 && e4 > tau) out.push_back({4, i, j, j2, e4});
                }
            }
        }
        return out;
    }

    bool valid() const { return violations(1).empty(); }

    friend bool operator==(const CrossMetric& a, const CrossMetric& b) {
        return a.left_ == b.left_ && a.right_ == b.right_ && a.cross_ == b.cross_ &&
               a.pseudo_ == b.pseudo_;
    }

private:
    CrossMetric() : left_(FiniteMetricSpace::from_matrix({{0.0}})), right_(left_) {}

    static std::vector<double> flatten(std::size_t n, std::size_t m, const Matrix& cross) {
        if (cross.size() != n) throw Error(ErrorCode::GlueMismatch, "cross block row count");
        std::vector<double> flat;
        flat.reserve(n * m);
        for (const auto& row : cross) {
            if (row.size() != m) throw Error(ErrorCode::GlueMismatch, "cross block column count");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return flat;
    }

    FiniteMetricSpace left_;
    FiniteMetricSpace right_;
    std::vector<double> cross_;
    bool pseudo_ = false;
    double tolerance_ = 0.0;
};

}  // namespace metric_pairs
