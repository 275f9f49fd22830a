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
#include <mutex>
#include <optional>

#include "coclust/combinatorics.hpp"
#include "coclust/count_matrix.hpp"
#include "coclust/model.hpp"

namespace coclust {

/// Criterion value split into description-length parts (nats).
struct CostBreakdown {
    double prior = 0.0;       // model description length
    double likelihood = 0.0;  // data description length given the model; always >= 0
    double total() const { return prior + likelihood; }
};

struct MoveDelta {
    double delta = 0.0;
    /// The move leaves its source cluster empty; `delta` then includes the
    /// removal of that cluster.
    bool empties_source = false;
};

/// Evaluation context bound to one CountMatrix: caches ln-factorials and the
/// partition-count terms. Read-only after construction apart from the lazily
/// extended partition-count tables, which are guarded by a mutex.
///
/// Spatial cost:
///   ln nS + ln nC + ln B(nS,kS) + ln B(nC,kD) + ln C(m+k-1, k-1)
///   + sum_i ln C(M_i + n_i - 1, n_i - 1) + sum_j ln C(M_j + n_j - 1, n_j - 1)
///   + ln m! - sum_ij ln N_ij! + sum_j ln M_j! - sum_dest ln m_j!
///   + sum_i ln M_i! - sum_src ln m_i!
/// Temporal cost:
///   ln nS + ln m + ln B(nS,kS) + ln C(m+k-1, k-1) + sum_i ln C(M_i + n_i - 1, n_i - 1)
///   + ln m! - sum_it ln N_it! + sum_t ln M_t! + sum_i ln M_i! - sum_src ln m_i!
class Criterion {
public:
    /// `table_limit` caps the dense ln-factorial table (entries beyond use lgamma).
    explicit Criterion(const CountMatrix& matrix, std::int64_t table_limit = std::int64_t{1} << 26);

    const CountMatrix& matrix() const { return *matrix_; }
    const LogFactorialTable& log_factorials() const { return lf_; }
    ModelKind kind() const { return matrix_->kind(); }

    double log_partitions_rows(std::int64_t k) const;
    double log_partitions_cols(std::int64_t k) const;

    /// Terms that depend only on the cluster counts (partition priors and
    /// the block-multinomial prior).
    double structure_cost(std::int64_t row_clusters, std::int64_t col_clusters) const;
    /// Terms of one cluster on `axis` holding `size` entities and `mass` events.
    double cluster_term(bool row_axis, std::int64_t size, std::int64_t mass) const;
    /// Terms fixed by the data alone.
    double constant_cost() const { return constant_; }

    CostBreakdown breakdown(const CoclusterModel& model) const;
    double cost(const CoclusterModel& model) const { return breakdown(model).total(); }

    double merge_delta(const CoclusterModel& model, Axis axis, std::int32_t a, std::int32_t b) const;
    MoveDelta move_delta(const CoclusterModel& model, Axis axis, std::int32_t element, std::int32_t target) const;
    double boundary_shift_delta(const CoclusterModel& model, std::int32_t boundary, ShiftDirection direction) const;

private:
    void check_model(const CoclusterModel& model) const;

    const CountMatrix* matrix_;
    LogFactorialTable lf_;
    double constant_ = 0.0;         // ln nS + ln nC|ln m
    double data_constant_ = 0.0;    // ln m! - sum entity ln m!
    mutable std::mutex partition_mutex_;
    mutable std::optional<PartitionCountTable> row_partitions_;
    mutable std::optional<PartitionCountTable> col_partitions_;
};

// Free-function forms. Each builds a throwaway Criterion; prefer a Criterion
// instance for repeated evaluation.
double spatial_cost(const CoclusterModel& model, const CountMatrix& matrix);
double temporal_cost(const CoclusterModel& model, const CountMatrix& matrix);
double model_cost(const CoclusterModel& model, const CountMatrix& matrix);
double merge_delta(const CoclusterModel& model, const CountMatrix& matrix, Axis axis, std::int32_t a,
                   std::int32_t b);
MoveDelta move_delta(const CoclusterModel& model, const CountMatrix& matrix, Axis axis, std::int32_t element,
                     std::int32_t target);
double boundary_shift_delta(const CoclusterModel& model, const CountMatrix& matrix, std::int32_t boundary,
                            ShiftDirection direction);

}  // namespace coclust
