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

// Exact incremental bookkeeping of every legal merge delta of a model:
// all source-cluster pairs, all destination-cluster pairs (spatial) or all
// adjacent segment pairs (temporal). Used by the greedy optimizer and by the
// coarsening that builds the dendrogram.
//
// Clusters live in slots (the ids of the model the engine was built from);
// a merge keeps the smaller slot. Merging two rows only changes the data
// terms of column pairs whose entries in those two rows are nonzero, so the
// column-pair table is patched in place instead of recomputed.

#include <cstdint>
#include <limits>
#include <vector>

#include "coclust/criterion.hpp"
#include "coclust/kernels.hpp"
#include "coclust/model.hpp"

namespace coclust::detail {

struct MergeCandidate {
    Axis axis = Axis::sources;
    std::int32_t a = -1;  // slot ids, a < b
    std::int32_t b = -1;
    double delta = std::numeric_limits<double>::infinity();  // full cost change
    bool valid() const { return a >= 0; }
};

class MergeEngine {
public:
    /// Absolute tolerance under which two deltas count as tied.
    static constexpr double kTieTolerance = 1e-9;

    MergeEngine(const Criterion& criterion, const CoclusterModel& start, unsigned threads = 1);

    /// Best legal merge over both axes; invalid when no merge is left.
    MergeCandidate best() const;
    /// Best legal merge restricted to one axis.
    MergeCandidate best(Axis axis) const;
    void apply(const MergeCandidate& merge);

    std::int32_t alive(Axis axis) const { return is_row(axis) ? alive_rows_ : alive_cols_; }
    /// Id of `slot` in the compacted model (number of alive slots below it).
    std::int32_t compact_id(Axis axis, std::int32_t slot) const;
    /// Current model, compacted (slot order preserved).
    CoclusterModel model() const;

    /// Recomputes one merge delta from the block table (no cached terms).
    double recompute(Axis axis, std::int32_t a, std::int32_t b) const;

private:
    bool is_row(Axis axis) const { return axis == Axis::sources; }
    double structure_delta(bool row) const;
    double row_pair(std::int32_t a, std::int32_t b) const;
    double col_pair(std::int32_t a, std::int32_t b) const;
    void rescan_row(std::int32_t r);
    void rescan_col(std::int32_t c);
    std::int32_t next_alive_col(std::int32_t c) const;
    std::int32_t prev_alive_col(std::int32_t c) const;
    void refresh_adjacent(std::int32_t c);

    void merge_rows(std::int32_t keep, std::int32_t gone);
    void merge_cols(std::int32_t keep, std::int32_t gone);

    MergeCandidate best_in_table(const std::vector<double>& table, const std::vector<double>& best_value,
                                 const std::vector<char>& alive, std::size_t stride) const;

    const Criterion& criterion_;
    const kernels::KernelTable& k_;
    const double* lf_;
    CoclusterModel origin_;
    bool temporal_;
    std::size_t kr_, kc_;  // slot capacities
    std::vector<std::int64_t> rows_;  // kr_ x kc_, row-major
    std::vector<std::int64_t> cols_;  // kc_ x kr_, row-major (transpose)
    std::vector<std::int64_t> row_size_, row_total_, col_size_, col_total_;
    std::vector<char> row_alive_, col_alive_;
    std::int32_t alive_rows_, alive_cols_;

    std::vector<double> row_pairs_;  // kr_ x kr_ local deltas, +inf off-limits
    std::vector<double> row_best_;   // per row min of row_pairs_
    std::vector<double> col_pairs_;  // spatial: kc_ x kc_
    std::vector<double> col_best_;
    std::vector<double> adjacent_;   // temporal: delta of merging slot with the next alive slot

    // Slot -> original member lists are recovered through these maps.
    std::vector<std::int32_t> row_parent_, col_parent_;
};

}  // namespace coclust::detail
