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
#include <span>
#include <vector>

#include "coclust/corpus.hpp"

namespace coclust {

enum class ModelKind { spatial, temporal };

const char* to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/// Two-way count table the criterion is evaluated on: active sources in rows;
/// active destinations (spatial) or observed days in time order (temporal) in
/// columns. Entities with a zero marginal are left out. Stored twice, row-major
/// (CSR) and column-major (CSC).
class CountMatrix {
public:
    struct Entry {
        std::int32_t index;
        std::int64_t count;
    };

    static CountMatrix spatial(const EventCorpus& corpus);
    static CountMatrix temporal(const EventCorpus& corpus);
    /// Direct construction from (row, col, count) triplets; duplicates are summed.
    static CountMatrix from_triplets(ModelKind kind, std::int32_t rows, std::int32_t cols,
                                     std::span<const Cell> triplets);

    ModelKind kind() const { return kind_; }
    std::int32_t rows() const { return static_cast<std::int32_t>(row_sums_.size()); }
    std::int32_t cols() const { return static_cast<std::int32_t>(col_sums_.size()); }
    std::int64_t total() const { return total_; }
    std::size_t nonzeros() const { return row_entries_.size(); }

    std::span<const Entry> row(std::int32_t r) const {
        return {row_entries_.data() + row_ptr_[static_cast<std::size_t>(r)],
                row_entries_.data() + row_ptr_[static_cast<std::size_t>(r) + 1]};
    }
    std::span<const Entry> col(std::int32_t c) const {
        return {col_entries_.data() + col_ptr_[static_cast<std::size_t>(c)],
                col_entries_.data() + col_ptr_[static_cast<std::size_t>(c) + 1]};
    }
    const std::vector<std::int64_t>& row_sums() const { return row_sums_; }
    const std::vector<std::int64_t>& col_sums() const { return col_sums_; }

    /// Corpus index (source) of each row.
    const std::vector<std::int32_t>& row_entities() const { return row_entities_; }
    /// Corpus index of each column: destination (spatial) or day index (temporal).
    const std::vector<std::int32_t>& col_entities() const { return col_entities_; }

private:
    static CountMatrix build(ModelKind kind, std::int32_t n_rows, std::int32_t n_cols,
                             std::vector<Cell> triplets, bool drop_empty);

    ModelKind kind_ = ModelKind::spatial;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<Entry> row_entries_;
    std::vector<std::size_t> col_ptr_{0};
    std::vector<Entry> col_entries_;
    std::vector<std::int64_t> row_sums_;
    std::vector<std::int64_t> col_sums_;
    std::vector<std::int32_t> row_entities_;
    std::vector<std::int32_t> col_entities_;
    std::int64_t total_ = 0;
};

}  // namespace coclust
