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
#include <functional>
#include <vector>

#include "coclust/corpus.hpp"
#include "coclust/count_matrix.hpp"
#include "coclust/model.hpp"

namespace coclust {

struct ProgressEvent {
    std::int32_t restart = 0;
    std::int64_t step = 0;
    double cost = 0.0;
    std::int32_t row_clusters = 0;
    std::int32_t col_clusters = 0;
};

/// Search-effort knobs; none of them changes the criterion being minimized.
struct OptimizerConfig {
    std::uint64_t seed = 0;
    std::int32_t restarts = 4;
    /// Cap on the initial cluster count per axis; 0 means max(64, ceil(sqrt(m))).
    std::int64_t max_preclusters = 0;
    /// Maximum move sweeps per post-optimization phase (0 disables moves).
    std::int32_t post_opt_passes = 2;
    double cost_tolerance = 1e-9;
    unsigned threads = 1;
    /// Called after every accepted merge/move round; may be empty.
    std::function<void(const ProgressEvent&)> progress;

    /// Throws Error when a bound is violated.
    void validate() const;
    std::int64_t effective_max_preclusters(std::int64_t total) const;
};

/// One accepted step of a restart's search.
struct TraceStep {
    std::int32_t restart = 0;
    std::int64_t step = 0;
    double cost = 0.0;
    std::int32_t row_clusters = 0;
    std::int32_t col_clusters = 0;
};

struct FitResult {
    CoclusterModel model;
    double cost = 0.0;       // c(M*)
    double null_cost = 0.0;  // c(M0)
    std::vector<double> restart_costs;
    std::vector<TraceStep> trace;
    double wall_seconds = 0.0;
};

FitResult fit(const CountMatrix& matrix, const OptimizerConfig& config);
/// Projects the corpus on (source, destination) and fits.
FitResult fit_spatial(const EventCorpus& corpus, const OptimizerConfig& config);
/// Projects the corpus on (source, day) and fits.
FitResult fit_temporal(const EventCorpus& corpus, const OptimizerConfig& config);

/// Initial grouping of the entities of one axis into at most `target_count`
/// groups. Destination/source axes: the `target_count` seed entities (the
/// heaviest ones for seed 0, a seeded draw among the heavier half otherwise)
/// absorb every other entity by cosine similarity of traffic profiles.
/// Segment axis: contiguous equal-mass runs of days. Ids are dense.
std::vector<std::int32_t> precluster(const CountMatrix& matrix, Axis axis, std::int64_t target_count,
                                     std::uint64_t seed);

}  // namespace coclust
