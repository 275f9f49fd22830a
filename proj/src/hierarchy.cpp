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

#include "coclust/hierarchy.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "coclust/criterion.hpp"
#include "coclust/error.hpp"
#include "merge_engine.hpp"

namespace coclust {

double informativity_rate(double model_cost, double null_cost, double best_cost) {
    const double span = best_cost - null_cost;
    if (span == 0.0) return 0.0;
    // + 0.0 folds the -0 of a null-cost model into 0.
    return (model_cost - null_cost) / span + 0.0;
}

double MergeDendrogram::tau_at(std::size_t level) const {
    return informativity_rate(cost_at(level), null_cost, best_cost);
}

std::int32_t MergeDendrogram::row_clusters_at(std::size_t level) const {
    return level == 0 ? leaf.row_cluster_count() : steps[level - 1].row_clusters;
}

std::int32_t MergeDendrogram::col_clusters_at(std::size_t level) const {
    return level == 0 ? leaf.col_cluster_count() : steps[level - 1].col_clusters;
}

CoclusterModel MergeDendrogram::replay(std::size_t level) const {
    if (level > steps.size()) throw Error("dendrogram has only " + std::to_string(levels()) + " levels");
    CoclusterModel model = leaf;
    for (std::size_t i = 0; i < level; ++i) model.merge(steps[i].axis, steps[i].a, steps[i].b);
    return model;
}

MergeDendrogram coarsen(const FitResult& fit, const CountMatrix& matrix, unsigned threads) {
    const Criterion criterion(matrix);
    MergeDendrogram out;
    out.leaf = fit.model;
    out.best_cost = fit.cost;
    out.null_cost = fit.null_cost;

    auto engine = std::make_unique<detail::MergeEngine>(criterion, out.leaf, threads);
    std::int32_t cap_rows = out.leaf.row_cluster_count();
    std::int32_t cap_cols = out.leaf.col_cluster_count();
    const Axis col_axis = out.leaf.column_axis();
    double cost = fit.cost;
    for (;;) {
        const detail::MergeCandidate next = engine->best();
        if (!next.valid()) break;
        MergeStep step;
        step.axis = next.axis;
        step.a = engine->compact_id(next.axis, next.a);
        step.b = engine->compact_id(next.axis, next.b);
        engine->apply(next);
        cost += next.delta;
        step.cost = cost;
        step.row_clusters = engine->alive(Axis::sources);
        step.col_clusters = engine->alive(col_axis);
        out.steps.push_back(step);

        const bool shrink_rows = cap_rows > 64 && step.row_clusters * 2 <= cap_rows;
        const bool shrink_cols = cap_cols > 64 && step.col_clusters * 2 <= cap_cols;
        if (shrink_rows || shrink_cols) {
            const CoclusterModel current = engine->model();
            cap_rows = current.row_cluster_count();
            cap_cols = current.col_cluster_count();
            engine = std::make_unique<detail::MergeEngine>(criterion, current, threads);
        }
    }
    if (!out.steps.empty()) out.steps.back().cost = out.null_cost;
    for (std::size_t i = 0; i < out.steps.size(); ++i) out.steps[i].tau = out.tau_at(i + 1);
    return out;
}

std::size_t cut_level(const MergeDendrogram& d, const CutTarget& target) {
    const std::size_t n = d.levels();
    using Kind = CutTarget::Kind;
    if (target.kind == Kind::tau) {
        if (!(target.value <= 1.0)) throw Error("target tau must be <= 1");
        std::size_t level = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (d.tau_at(i) >= target.value) level = i;
        return level;
    }
    if (!(target.value >= 1.0) || target.value != std::floor(target.value))
        throw Error("target cluster count must be a positive integer");
    const auto want = static_cast<std::int64_t>(target.value);
    auto count = [&](std::size_t level) -> std::int64_t {
        const std::int64_t r = d.row_clusters_at(level), c = d.col_clusters_at(level);
        switch (target.kind) {
            case Kind::sources: return r;
            case Kind::columns: return c;
            case Kind::each_axis: return std::max(r, c);
            default: return r * c;
        }
    };
    std::int64_t nearest = count(0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t v = count(i);
        if (v == want || (target.kind == Kind::each_axis && v <= want)) return i;
        if (std::llabs(v - want) < std::llabs(nearest - want)) nearest = v;
    }
    throw Error("cluster count " + std::to_string(want) + " is not reached by the dendrogram; nearest achievable is " +
                std::to_string(nearest));
}

CoclusterModel cut(const MergeDendrogram& dendrogram, const CutTarget& target) {
    return dendrogram.replay(cut_level(dendrogram, target));
}

std::vector<CurvePoint> informativity_curve(const MergeDendrogram& d) {
    std::vector<CurvePoint> out;
    out.reserve(d.levels());
    for (std::size_t i = 0; i < d.levels(); ++i) {
        CurvePoint p;
        p.row_clusters = d.row_clusters_at(i);
        p.col_clusters = d.col_clusters_at(i);
        p.clusters = p.row_clusters * p.col_clusters;
        p.tau = d.tau_at(i);
        p.cost = d.cost_at(i);
        out.push_back(p);
    }
    return out;
}

}  // namespace coclust
