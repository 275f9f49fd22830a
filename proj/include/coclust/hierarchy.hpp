// Copyright 2026-present the coclust project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "coclust/count_matrix.hpp"
#include "coclust/model.hpp"
#include "coclust/optimizer.hpp"

namespace coclust {

struct MergeStep {
    Axis axis = Axis::sources;
    /// Cluster ids in the model just before this step, a < b. The merged
    /// cluster keeps id a and ids above b shift down by one.
    std::int32_t a = 0;
    std::int32_t b = 0;
    double cost = 0.0;  // after the merge
    double tau = 0.0;
    std::int32_t row_clusters = 0;  // after the merge
    std::int32_t col_clusters = 0;
};

/// Greedy merge history from a fitted model (leaf) down to the null model.
struct MergeDendrogram {
    CoclusterModel leaf;
    double best_cost = 0.0;  // c(M*)
    double null_cost = 0.0;  // c(M0)
    std::vector<MergeStep> steps;

    /// Number of models in the history (steps + 1).
    std::size_t levels() const { return steps.size() + 1; }
    double cost_at(std::size_t level) const { return level == 0 ? best_cost : steps[level - 1].cost; }
    double tau_at(std::size_t level) const;
    std::int32_t row_clusters_at(std::size_t level) const;
    std::int32_t col_clusters_at(std::size_t level) const;

    /// Model after the first `level` merges.
    CoclusterModel replay(std::size_t level) const;
};

/// tau = (c(M) - c(M0)) / (c(M*) - c(M0)); 0 when c(M*) == c(M0).
double informativity_rate(double model_cost, double null_cost, double best_cost);

/// At every step applies the legal merge of least cost increase, over both
/// axes, until one cluster per axis is left.
MergeDendrogram coarsen(const FitResult& fit, const CountMatrix& matrix, unsigned threads = 1);

struct CutTarget {
    enum class Kind {
        tau,          // coarsest level with tau >= value
        sources,      // first level with value source clusters
        columns,      // first level with value destination clusters / segments
        each_axis,    // first level with at most value clusters on both axes
        biclusters,   // first level with value = k_S * k_C
    };
    Kind kind = Kind::tau;
    double value = 1.0;
};

/// Level selected by `target`. Throws Error for an unreachable count, naming
/// the nearest achievable one.
std::size_t cut_level(const MergeDendrogram& dendrogram, const CutTarget& target);
CoclusterModel cut(const MergeDendrogram& dendrogram, const CutTarget& target);

struct CurvePoint {
    std::int32_t clusters = 0;  // k_S * k_C
    std::int32_t row_clusters = 0;
    std::int32_t col_clusters = 0;
    double tau = 0.0;
    double cost = 0.0;
};

/// One point per level, from the leaf (tau 1) to the root (tau 0).
std::vector<CurvePoint> informativity_curve(const MergeDendrogram& dendrogram);

}  // namespace coclust
