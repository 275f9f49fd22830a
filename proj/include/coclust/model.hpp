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
#include <string_view>
#include <vector>

#include "coclust/count_matrix.hpp"

namespace coclust {

enum class Axis { sources, destinations, segments };

const char* to_string(Axis axis);
Axis parse_axis(std::string_view text);

/// Which way a segment boundary moves by one observed day.
enum class ShiftDirection { earlier, later };

/// A co-clustering of a CountMatrix: a partition of the rows (source
/// clusters) and of the columns (destination clusters or contiguous time
/// segments), with the block-level sufficient statistics.
///
/// Cluster ids are dense in [0, k). Segment ids follow time order. Merges keep
/// the smaller id and shift the ids above the removed one down by one.
class CoclusterModel {
public:
    CoclusterModel() = default;

    /// Validates coverage, compactness and (temporal) contiguity; throws ModelError.
    static CoclusterModel from_partition(const CountMatrix& matrix, std::vector<std::int32_t> row_clusters,
                                         std::vector<std::int32_t> col_clusters);
    static CoclusterModel null_model(const CountMatrix& matrix);
    static CoclusterModel finest(const CountMatrix& matrix);

    ModelKind kind() const { return kind_; }
    Axis column_axis() const { return kind_ == ModelKind::spatial ? Axis::destinations : Axis::segments; }
    bool is_row_axis(Axis axis) const { return axis == Axis::sources; }
    /// Throws ModelError when `axis` does not belong to this model kind.
    void check_axis(Axis axis) const;

    std::int32_t row_cluster_count() const { return static_cast<std::int32_t>(row_size_.size()); }
    std::int32_t col_cluster_count() const { return static_cast<std::int32_t>(col_size_.size()); }
    std::int32_t cluster_count(Axis axis) const {
        return is_row_axis(axis) ? row_cluster_count() : col_cluster_count();
    }
    bool is_null() const { return row_cluster_count() == 1 && col_cluster_count() == 1; }

    const std::vector<std::int32_t>& row_partition() const { return row_of_; }
    const std::vector<std::int32_t>& col_partition() const { return col_of_; }
    const std::vector<std::int32_t>& partition(Axis axis) const {
        return is_row_axis(axis) ? row_of_ : col_of_;
    }

    std::int64_t block(std::int32_t r, std::int32_t c) const {
        return blocks_[static_cast<std::size_t>(r) * col_size_.size() + static_cast<std::size_t>(c)];
    }
    /// Row-major k_rows x k_cols block counts.
    const std::vector<std::int64_t>& blocks() const { return blocks_; }
    const std::vector<std::int64_t>& row_cluster_sizes() const { return row_size_; }
    const std::vector<std::int64_t>& col_cluster_sizes() const { return col_size_; }
    const std::vector<std::int64_t>& row_cluster_totals() const { return row_total_; }
    const std::vector<std::int64_t>& col_cluster_totals() const { return col_total_; }
    std::int64_t total() const { return total_; }

    /// Members of each cluster of `axis`, ascending.
    std::vector<std::vector<std::int32_t>> members(Axis axis) const;

    /// Merges clusters a and b of `axis` (segments must be adjacent).
    void merge(Axis axis, std::int32_t a, std::int32_t b);
    /// Reassigns one row/column entity; an emptied cluster is deleted.
    void move(const CountMatrix& matrix, Axis axis, std::int32_t element, std::int32_t target);
    /// Moves the boundary between segments `boundary` and `boundary + 1` by one day.
    void shift_boundary(const CountMatrix& matrix, std::int32_t boundary, ShiftDirection direction);

    /// Relabels row clusters (and spatial column clusters) by their smallest member.
    void canonicalize();

    friend bool operator==(const CoclusterModel&, const CoclusterModel&) = default;

private:
    void rebuild(const CountMatrix& matrix);
    void remove_cluster(Axis axis, std::int32_t id);

    ModelKind kind_ = ModelKind::spatial;
    std::vector<std::int32_t> row_of_;
    std::vector<std::int32_t> col_of_;
    std::vector<std::int64_t> row_size_;
    std::vector<std::int64_t> col_size_;
    std::vector<std::int64_t> row_total_;
    std::vector<std::int64_t> col_total_;
    std::vector<std::int64_t> blocks_;
    std::int64_t total_ = 0;
};

}  // namespace coclust
