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

#include "coclust/count_matrix.hpp"

#include <algorithm>
#include <tuple>

#include "coclust/error.hpp"

namespace coclust {

const char* to_string(ModelKind kind) {
    return kind == ModelKind::spatial ? "spatial" : "temporal";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "spatial") return ModelKind::spatial;
    if (text == "temporal") return ModelKind::temporal;
    throw Error("unknown model kind '" + std::string(text) + "'");
}

CountMatrix CountMatrix::spatial(const EventCorpus& corpus) {
    if (!corpus.has_destinations()) throw InputError("spatial model needs destinations");
    std::vector<Cell> triplets;
    triplets.reserve(corpus.cells().size());
    for (const Cell& c : corpus.cells()) triplets.push_back({c.source, c.destination, 0, c.count});
    return build(ModelKind::spatial, corpus.sources().size(), corpus.destinations().size(),
                 std::move(triplets), true);
}

CountMatrix CountMatrix::temporal(const EventCorpus& corpus) {
    if (!corpus.has_time()) throw InputError("temporal model needs timestamps");
    std::vector<Cell> triplets;
    triplets.reserve(corpus.cells().size());
    for (const Cell& c : corpus.cells()) triplets.push_back({c.source, c.time, 0, c.count});
    return build(ModelKind::temporal, corpus.sources().size(),
                 static_cast<std::int32_t>(corpus.days().size()), std::move(triplets), true);
}

CountMatrix CountMatrix::from_triplets(ModelKind kind, std::int32_t rows, std::int32_t cols,
                                       std::span<const Cell> triplets) {
    std::vector<Cell> copy(triplets.begin(), triplets.end());
    for (const Cell& c : copy) {
        if (c.source < 0 || c.source >= rows || c.destination < 0 || c.destination >= cols)
            throw ModelError("triplet outside the matrix shape");
        if (c.count < 0) throw ModelError("negative count");
    }
    return build(kind, rows, cols, std::move(copy), true);
}

CountMatrix CountMatrix::build(ModelKind kind, std::int32_t n_rows, std::int32_t n_cols,
                               std::vector<Cell> triplets, bool drop_empty) {
    std::sort(triplets.begin(), triplets.end(), [](const Cell& a, const Cell& b) {
        return std::tie(a.source, a.destination) < std::tie(b.source, b.destination);
    });
    std::vector<Cell> cells;
    cells.reserve(triplets.size());
    for (const Cell& c : triplets) {
        if (c.count == 0) continue;
        if (!cells.empty() && cells.back().source == c.source && cells.back().destination == c.destination)
            cells.back().count += c.count;
        else
            cells.push_back(c);
    }

    std::vector<std::int64_t> rsum(static_cast<std::size_t>(n_rows), 0);
    std::vector<std::int64_t> csum(static_cast<std::size_t>(n_cols), 0);
    for (const Cell& c : cells) {
        rsum[static_cast<std::size_t>(c.source)] += c.count;
        csum[static_cast<std::size_t>(c.destination)] += c.count;
    }

    CountMatrix m;
    m.kind_ = kind;
    std::vector<std::int32_t> row_map(rsum.size(), -1), col_map(csum.size(), -1);
    for (std::size_t i = 0; i < rsum.size(); ++i) {
        if (drop_empty && rsum[i] == 0) continue;
        row_map[i] = static_cast<std::int32_t>(m.row_entities_.size());
        m.row_entities_.push_back(static_cast<std::int32_t>(i));
        m.row_sums_.push_back(rsum[i]);
    }
    for (std::size_t j = 0; j < csum.size(); ++j) {
        if (drop_empty && csum[j] == 0) continue;
        col_map[j] = static_cast<std::int32_t>(m.col_entities_.size());
        m.col_entities_.push_back(static_cast<std::int32_t>(j));
        m.col_sums_.push_back(csum[j]);
    }

    m.row_ptr_.assign(m.row_sums_.size() + 1, 0);
    m.col_ptr_.assign(m.col_sums_.size() + 1, 0);
    for (const Cell& c : cells) {
        ++m.row_ptr_[static_cast<std::size_t>(row_map[static_cast<std::size_t>(c.source)]) + 1];
        ++m.col_ptr_[static_cast<std::size_t>(col_map[static_cast<std::size_t>(c.destination)]) + 1];
        m.total_ += c.count;
    }
    for (std::size_t i = 1; i < m.row_ptr_.size(); ++i) m.row_ptr_[i] += m.row_ptr_[i - 1];
    for (std::size_t j = 1; j < m.col_ptr_.size(); ++j) m.col_ptr_[j] += m.col_ptr_[j - 1];

    m.row_entries_.resize(cells.size());
    m.col_entries_.resize(cells.size());
    std::vector<std::size_t> rfill(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
    std::vector<std::size_t> cfill(m.col_ptr_.begin(), m.col_ptr_.end() - 1);
    // cells are sorted by (row, col): both layouts come out sorted by index.
    for (const Cell& c : cells) {
        auto r = row_map[static_cast<std::size_t>(c.source)];
        auto k = col_map[static_cast<std::size_t>(c.destination)];
        m.row_entries_[rfill[static_cast<std::size_t>(r)]++] = {k, c.count};
        m.col_entries_[cfill[static_cast<std::size_t>(k)]++] = {r, c.count};
    }
    return m;
}

}  // namespace coclust
