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

#include "coclust/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "coclust/error.hpp"

namespace coclust {

const char* to_string(Axis axis) {
    switch (axis) {
        case Axis::sources: return "sources";
        case Axis::destinations: return "destinations";
        case Axis::segments: return "segments";
    }
    return "?";
}

Axis parse_axis(std::string_view text) {
    if (text == "sources") return Axis::sources;
    if (text == "destinations") return Axis::destinations;
    if (text == "segments") return Axis::segments;
    throw Error("unknown axis '" + std::string(text) + "'");
}

namespace {

std::int32_t count_clusters(const std::vector<std::int32_t>& partition, const char* what) {
    std::int32_t k = 0;
    for (std::int32_t c : partition) {
        if (c < 0) throw ModelError(std::string("negative cluster id in ") + what);
        k = std::max(k, c + 1);
    }
    std::vector<char> used(static_cast<std::size_t>(k), 0);
    for (std::int32_t c : partition) used[static_cast<std::size_t>(c)] = 1;
    for (char u : used)
        if (!u) throw ModelError(std::string("empty cluster in ") + what);
    return k;
}

template <class T>
void erase_at(std::vector<T>& v, std::int32_t id) {
    v.erase(v.begin() + id);
}

}  // namespace

void CoclusterModel::check_axis(Axis axis) const {
    if (axis == Axis::sources) return;
    if (axis != column_axis())
        throw ModelError(std::string("axis '") + to_string(axis) + "' does not apply to a " +
                         coclust::to_string(kind_) + " model");
}

CoclusterModel CoclusterModel::from_partition(const CountMatrix& matrix, std::vector<std::int32_t> rows,
                                              std::vector<std::int32_t> cols) {
    if (matrix.total() < 1) throw InputError("empty corpus");
    if (static_cast<std::int32_t>(rows.size()) != matrix.rows())
        throw ModelError("source partition covers " + std::to_string(rows.size()) + " entities, matrix has " +
                         std::to_string(matrix.rows()));
    if (static_cast<std::int32_t>(cols.size()) != matrix.cols())
        throw ModelError("column partition covers " + std::to_string(cols.size()) + " entities, matrix has " +
                         std::to_string(matrix.cols()));
    count_clusters(rows, "source partition");
    count_clusters(cols, "column partition");
    if (matrix.kind() == ModelKind::temporal) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            std::int32_t expected_step = j == 0 ? cols[0] : cols[j] - cols[j - 1];
            if (expected_step != 0 && expected_step != 1)
                throw ModelError("time segments must be contiguous and ordered");
        }
    }
    CoclusterModel m;
    m.kind_ = matrix.kind();
    m.row_of_ = std::move(rows);
    m.col_of_ = std::move(cols);
    m.rebuild(matrix);
    return m;
}

CoclusterModel CoclusterModel::null_model(const CountMatrix& matrix) {
    return from_partition(matrix, std::vector<std::int32_t>(static_cast<std::size_t>(matrix.rows()), 0),
                          std::vector<std::int32_t>(static_cast<std::size_t>(matrix.cols()), 0));
}

CoclusterModel CoclusterModel::finest(const CountMatrix& matrix) {
    std::vector<std::int32_t> rows(static_cast<std::size_t>(matrix.rows()));
    std::vector<std::int32_t> cols(static_cast<std::size_t>(matrix.cols()));
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    return from_partition(matrix, std::move(rows), std::move(cols));
}

void CoclusterModel::rebuild(const CountMatrix& matrix) {
    auto kr = static_cast<std::size_t>(*std::max_element(row_of_.begin(), row_of_.end()) + 1);
    auto kc = static_cast<std::size_t>(*std::max_element(col_of_.begin(), col_of_.end()) + 1);
    row_size_.assign(kr, 0);
    col_size_.assign(kc, 0);
    row_total_.assign(kr, 0);
    col_total_.assign(kc, 0);
    blocks_.assign(kr * kc, 0);
    for (std::int32_t c : row_of_) ++row_size_[static_cast<std::size_t>(c)];
    for (std::int32_t c : col_of_) ++col_size_[static_cast<std::size_t>(c)];
    total_ = 0;
    for (std::int32_t r = 0; r < matrix.rows(); ++r) {
        auto rc = static_cast<std::size_t>(row_of_[static_cast<std::size_t>(r)]);
        for (const auto& e : matrix.row(r)) {
            auto cc = static_cast<std::size_t>(col_of_[static_cast<std::size_t>(e.index)]);
            blocks_[rc * kc + cc] += e.count;
            row_total_[rc] += e.count;
            col_total_[cc] += e.count;
            total_ += e.count;
        }
    }
}

std::vector<std::vector<std::int32_t>> CoclusterModel::members(Axis axis) const {
    check_axis(axis);
    const auto& part = partition(axis);
    std::vector<std::vector<std::int32_t>> out(static_cast<std::size_t>(cluster_count(axis)));
    for (std::size_t e = 0; e < part.size(); ++e)
        out[static_cast<std::size_t>(part[e])].push_back(static_cast<std::int32_t>(e));
    return out;
}

void CoclusterModel::remove_cluster(Axis axis, std::int32_t id) {
    const auto kc = col_size_.size();
    if (is_row_axis(axis)) {
        blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(id) * kc),
                      blocks_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(id + 1) * kc));
        erase_at(row_size_, id);
        erase_at(row_total_, id);
        for (auto& c : row_of_)
            if (c > id) --c;
    } else {
        std::vector<std::int64_t> next;
        next.reserve(blocks_.size() - row_size_.size());
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (i % kc != static_cast<std::size_t>(id)) next.push_back(blocks_[i]);
        blocks_ = std::move(next);
        erase_at(col_size_, id);
        erase_at(col_total_, id);
        for (auto& c : col_of_)
            if (c > id) --c;
    }
}

void CoclusterModel::merge(Axis axis, std::int32_t a, std::int32_t b) {
    check_axis(axis);
    const std::int32_t k = cluster_count(axis);
    if (a == b) throw ModelError("cannot merge a cluster with itself");
    if (a < 0 || b < 0 || a >= k || b >= k) throw ModelError("merge of an unknown cluster id");
    if (axis == Axis::segments && std::abs(a - b) != 1) throw ModelError("only adjacent segments can merge");
    const std::int32_t keep = std::min(a, b);
    const std::int32_t gone = std::max(a, b);
    const auto kc = col_size_.size();
    if (is_row_axis(axis)) {
        for (std::size_t c = 0; c < kc; ++c)
            blocks_[static_cast<std::size_t>(keep) * kc + c] += blocks_[static_cast<std::size_t>(gone) * kc + c];
        row_size_[static_cast<std::size_t>(keep)] += row_size_[static_cast<std::size_t>(gone)];
        row_total_[static_cast<std::size_t>(keep)] += row_total_[static_cast<std::size_t>(gone)];
        for (auto& c : row_of_)
            if (c == gone) c = keep;
    } else {
        for (std::size_t r = 0; r < row_size_.size(); ++r)
            blocks_[r * kc + static_cast<std::size_t>(keep)] += blocks_[r * kc + static_cast<std::size_t>(gone)];
        col_size_[static_cast<std::size_t>(keep)] += col_size_[static_cast<std::size_t>(gone)];
        col_total_[static_cast<std::size_t>(keep)] += col_total_[static_cast<std::size_t>(gone)];
        for (auto& c : col_of_)
            if (c == gone) c = keep;
    }
    remove_cluster(axis, gone);
}

void CoclusterModel::move(const CountMatrix& matrix, Axis axis, std::int32_t element, std::int32_t target) {
    check_axis(axis);
    if (axis == Axis::segments) throw ModelError("segments change through boundary shifts, not moves");
    auto& part = is_row_axis(axis) ? row_of_ : col_of_;
    if (element < 0 || element >= static_cast<std::int32_t>(part.size()))
        throw ModelError("move of an unknown element");
    if (target < 0 || target >= cluster_count(axis)) throw ModelError("move to an unknown cluster");
    const std::int32_t from = part[static_cast<std::size_t>(element)];
    if (from == target) return;
    const auto kc = col_size_.size();
    if (is_row_axis(axis)) {
        for (const auto& e : matrix.row(element)) {
            auto cc = static_cast<std::size_t>(col_of_[static_cast<std::size_t>(e.index)]);
            blocks_[static_cast<std::size_t>(from) * kc + cc] -= e.count;
            blocks_[static_cast<std::size_t>(target) * kc + cc] += e.count;
        }
        row_total_[static_cast<std::size_t>(from)] -= matrix.row_sums()[static_cast<std::size_t>(element)];
        row_total_[static_cast<std::size_t>(target)] += matrix.row_sums()[static_cast<std::size_t>(element)];
        --row_size_[static_cast<std::size_t>(from)];
        ++row_size_[static_cast<std::size_t>(target)];
    } else {
        for (const auto& e : matrix.col(element)) {
            auto rc = static_cast<std::size_t>(row_of_[static_cast<std::size_t>(e.index)]);
            blocks_[rc * kc + static_cast<std::size_t>(from)] -= e.count;
            blocks_[rc * kc + static_cast<std::size_t>(target)] += e.count;
        }
        col_total_[static_cast<std::size_t>(from)] -= matrix.col_sums()[static_cast<std::size_t>(element)];
        col_total_[static_cast<std::size_t>(target)] += matrix.col_sums()[static_cast<std::size_t>(element)];
        --col_size_[static_cast<std::size_t>(from)];
        ++col_size_[static_cast<std::size_t>(target)];
    }
    part[static_cast<std::size_t>(element)] = target;
    const auto& sizes = is_row_axis(axis) ? row_size_ : col_size_;
    if (sizes[static_cast<std::size_t>(from)] == 0) remove_cluster(axis, from);
}

void CoclusterModel::shift_boundary(const CountMatrix& matrix, std::int32_t boundary, ShiftDirection direction) {
    if (kind_ != ModelKind::temporal) throw ModelError("boundary shifts need a temporal model");
    if (boundary < 0 || boundary + 1 >= col_cluster_count()) throw ModelError("no such segment boundary");
    const auto left = static_cast<std::size_t>(boundary);
    const auto right = left + 1;
    std::int32_t element = 0;
    std::int32_t from = 0, to = 0;
    // Columns of segment s are [start_s, start_s + size_s).
    std::int64_t start_right = 0;
    for (std::size_t s = 0; s < right; ++s) start_right += col_size_[s];
    if (direction == ShiftDirection::earlier) {
        if (col_size_[left] < 2) throw ModelError("shift would empty a segment");
        element = static_cast<std::int32_t>(start_right - 1);
        from = boundary;
        to = boundary + 1;
    } else {
        if (col_size_[right] < 2) throw ModelError("shift would empty a segment");
        element = static_cast<std::int32_t>(start_right);
        from = boundary + 1;
        to = boundary;
    }
    const auto kc = col_size_.size();
    for (const auto& e : matrix.col(element)) {
        auto rc = static_cast<std::size_t>(row_of_[static_cast<std::size_t>(e.index)]);
        blocks_[rc * kc + static_cast<std::size_t>(from)] -= e.count;
        blocks_[rc * kc + static_cast<std::size_t>(to)] += e.count;
    }
    const std::int64_t mass = matrix.col_sums()[static_cast<std::size_t>(element)];
    col_total_[static_cast<std::size_t>(from)] -= mass;
    col_total_[static_cast<std::size_t>(to)] += mass;
    --col_size_[static_cast<std::size_t>(from)];
    ++col_size_[static_cast<std::size_t>(to)];
    col_of_[static_cast<std::size_t>(element)] = to;
}

void CoclusterModel::canonicalize() {
    auto relabel = [](std::vector<std::int32_t>& part, std::size_t k) {
        std::vector<std::int32_t> order(k, -1);
        std::int32_t next = 0;
        for (auto c : part)
            if (order[static_cast<std::size_t>(c)] < 0) order[static_cast<std::size_t>(c)] = next++;
        for (auto& c : part) c = order[static_cast<std::size_t>(c)];
        return order;  // old id -> new id
    };
    const auto kr = row_size_.size();
    const auto kc = col_size_.size();
    auto rmap = relabel(row_of_, kr);
    std::vector<std::int32_t> cmap(kc);
    std::iota(cmap.begin(), cmap.end(), 0);
    if (kind_ == ModelKind::spatial) cmap = relabel(col_of_, kc);

    std::vector<std::int64_t> rs(kr), rt(kr), cs(kc), ct(kc), bl(blocks_.size());
    for (std::size_t r = 0; r < kr; ++r) {
        auto nr = static_cast<std::size_t>(rmap[r]);
        rs[nr] = row_size_[r];
        rt[nr] = row_total_[r];
        for (std::size_t c = 0; c < kc; ++c)
            bl[nr * kc + static_cast<std::size_t>(cmap[c])] = blocks_[r * kc + c];
    }
    for (std::size_t c = 0; c < kc; ++c) {
        auto nc = static_cast<std::size_t>(cmap[c]);
        cs[nc] = col_size_[c];
        ct[nc] = col_total_[c];
    }
    row_size_ = std::move(rs);
    row_total_ = std::move(rt);
    col_size_ = std::move(cs);
    col_total_ = std::move(ct);
    blocks_ = std::move(bl);
}

}  // namespace coclust
