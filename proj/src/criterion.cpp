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

#include "coclust/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "coclust/error.hpp"

namespace coclust {

Criterion::Criterion(const CountMatrix& matrix, std::int64_t table_limit)
    : matrix_(&matrix),
      lf_(std::min<std::int64_t>(table_limit,
                                 matrix.total() + std::max<std::int64_t>(matrix.rows(), matrix.cols()) + 1)) {
    if (matrix.total() < 1) throw InputError("empty corpus");
    const double n_rows = static_cast<double>(matrix.rows());
    constant_ = std::log(n_rows);
    if (kind() == ModelKind::spatial)
        constant_ += std::log(static_cast<double>(matrix.cols()));
    else
        constant_ += std::log(static_cast<double>(matrix.total()));

    double entity_terms = 0.0;
    for (std::int64_t v : matrix.row_sums()) entity_terms += lf_(v);
    if (kind() == ModelKind::spatial)
        for (std::int64_t v : matrix.col_sums()) entity_terms += lf_(v);
    data_constant_ = lf_(matrix.total()) - entity_terms;
}

namespace {

double lookup_partitions(std::mutex& mu, std::optional<PartitionCountTable>& table, std::int64_t n,
                         std::int64_t k) {
    std::lock_guard<std::mutex> lock(mu);
    const std::int64_t needed = std::min(n, k);
    bool rebuild = !table.has_value();
    if (!rebuild) {
        try {
            return (*table)(k);
        } catch (const std::out_of_range&) {
            rebuild = true;
        }
    }
    table.emplace(n, std::min(n, std::max<std::int64_t>(64, 2 * needed)));
    return (*table)(k);
}

}  // namespace

double Criterion::log_partitions_rows(std::int64_t k) const {
    return lookup_partitions(partition_mutex_, row_partitions_, matrix_->rows(), k);
}

double Criterion::log_partitions_cols(std::int64_t k) const {
    return lookup_partitions(partition_mutex_, col_partitions_, matrix_->cols(), k);
}

double Criterion::structure_cost(std::int64_t row_clusters, std::int64_t col_clusters) const {
    const std::int64_t k = row_clusters * col_clusters;
    double out = log_partitions_rows(row_clusters);
    if (kind() == ModelKind::spatial) out += log_partitions_cols(col_clusters);
    out += lf_.log_compositions(matrix_->total(), k);
    return out;
}

double Criterion::cluster_term(bool row_axis, std::int64_t size, std::int64_t mass) const {
    if (size == 0) return 0.0;
    if (!row_axis && kind() == ModelKind::temporal) return lf_(mass);
    return lf_.log_compositions(mass, size) + lf_(mass);
}

void Criterion::check_model(const CoclusterModel& model) const {
    if (model.kind() != kind()) throw ModelError("model kind does not match the count matrix");
    if (static_cast<std::int32_t>(model.row_partition().size()) != matrix_->rows() ||
        static_cast<std::int32_t>(model.col_partition().size()) != matrix_->cols() ||
        model.total() != matrix_->total())
        throw ModelError("model was not built on this count matrix");
}

CostBreakdown Criterion::breakdown(const CoclusterModel& model) const {
    check_model(model);
    const bool spatial = kind() == ModelKind::spatial;
    CostBreakdown out;
    out.prior = constant_ + structure_cost(model.row_cluster_count(), model.col_cluster_count());
    double likelihood = data_constant_;
    const auto& rsize = model.row_cluster_sizes();
    const auto& rtotal = model.row_cluster_totals();
    for (std::size_t i = 0; i < rsize.size(); ++i) {
        if (rsize[i] == 0) throw ModelError("empty source cluster");
        out.prior += lf_.log_compositions(rtotal[i], rsize[i]);
        likelihood += lf_(rtotal[i]);
    }
    const auto& csize = model.col_cluster_sizes();
    const auto& ctotal = model.col_cluster_totals();
    for (std::size_t j = 0; j < csize.size(); ++j) {
        if (csize[j] == 0) throw ModelError("empty column cluster");
        if (spatial) out.prior += lf_.log_compositions(ctotal[j], csize[j]);
        likelihood += lf_(ctotal[j]);
    }
    for (std::int64_t n : model.blocks()) likelihood -= lf_(n);
    out.likelihood = likelihood;
    return out;
}

double Criterion::merge_delta(const CoclusterModel& model, Axis axis, std::int32_t a, std::int32_t b) const {
    check_model(model);
    model.check_axis(axis);
    const std::int32_t k = model.cluster_count(axis);
    if (a == b) throw ModelError("merge_delta needs two distinct clusters");
    if (a < 0 || b < 0 || a >= k || b >= k) throw ModelError("merge_delta on an unknown cluster id");
    if (axis == Axis::segments && std::abs(a - b) != 1)
        throw ModelError("merge_delta on non-adjacent segments");
    if (a > b) std::swap(a, b);  // canonical order keeps the result symmetric bit for bit

    const bool row = model.is_row_axis(axis);
    const std::int32_t other = row ? model.col_cluster_count() : model.row_cluster_count();
    double data = 0.0;
    for (std::int32_t o = 0; o < other; ++o) {
        const std::int64_t na = row ? model.block(a, o) : model.block(o, a);
        const std::int64_t nb = row ? model.block(b, o) : model.block(o, b);
        data += lf_(na + nb) - lf_(na) - lf_(nb);
    }
    const auto& sizes = row ? model.row_cluster_sizes() : model.col_cluster_sizes();
    const auto& totals = row ? model.row_cluster_totals() : model.col_cluster_totals();
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    const double clusters = cluster_term(row, sizes[ua] + sizes[ub], totals[ua] + totals[ub]) -
                            cluster_term(row, sizes[ua], totals[ua]) - cluster_term(row, sizes[ub], totals[ub]);
    const std::int64_t kr = model.row_cluster_count();
    const std::int64_t kc = model.col_cluster_count();
    const double structure = row ? structure_cost(kr - 1, kc) - structure_cost(kr, kc)
                                 : structure_cost(kr, kc - 1) - structure_cost(kr, kc);
    return structure + clusters - data;
}

namespace {

struct Profile {
    std::vector<std::int64_t> counts;  // indexed by cluster of the other axis
    std::int64_t mass = 0;
};

Profile row_profile(const CoclusterModel& model, const CountMatrix& matrix, std::int32_t row) {
    Profile p;
    p.counts.assign(static_cast<std::size_t>(model.col_cluster_count()), 0);
    for (const auto& e : matrix.row(row)) {
        p.counts[static_cast<std::size_t>(model.col_partition()[static_cast<std::size_t>(e.index)])] += e.count;
        p.mass += e.count;
    }
    return p;
}

Profile col_profile(const CoclusterModel& model, const CountMatrix& matrix, std::int32_t col) {
    Profile p;
    p.counts.assign(static_cast<std::size_t>(model.row_cluster_count()), 0);
    for (const auto& e : matrix.col(col)) {
        p.counts[static_cast<std::size_t>(model.row_partition()[static_cast<std::size_t>(e.index)])] += e.count;
        p.mass += e.count;
    }
    return p;
}

}  // namespace

MoveDelta Criterion::move_delta(const CoclusterModel& model, Axis axis, std::int32_t element,
                                std::int32_t target) const {
    check_model(model);
    model.check_axis(axis);
    if (axis == Axis::segments) throw ModelError("segments change through boundary shifts, not moves");
    const bool row = model.is_row_axis(axis);
    const auto& part = model.partition(axis);
    if (element < 0 || element >= static_cast<std::int32_t>(part.size()))
        throw ModelError("move_delta on an unknown element");
    if (target < 0 || target >= model.cluster_count(axis)) throw ModelError("move_delta to an unknown cluster");
    const std::int32_t from = part[static_cast<std::size_t>(element)];
    if (from == target) return {};

    const Profile p = row ? row_profile(model, *matrix_, element) : col_profile(model, *matrix_, element);
    double data = 0.0;  // change of -sum ln N!
    for (std::size_t o = 0; o < p.counts.size(); ++o) {
        const std::int64_t c = p.counts[o];
        if (c == 0) continue;
        const auto oi = static_cast<std::int32_t>(o);
        const std::int64_t nf = row ? model.block(from, oi) : model.block(oi, from);
        const std::int64_t nt = row ? model.block(target, oi) : model.block(oi, target);
        data += lf_(nf) + lf_(nt) - lf_(nf - c) - lf_(nt + c);
    }
    const auto& sizes = row ? model.row_cluster_sizes() : model.col_cluster_sizes();
    const auto& totals = row ? model.row_cluster_totals() : model.col_cluster_totals();
    const auto uf = static_cast<std::size_t>(from), ut = static_cast<std::size_t>(target);
    const double clusters = cluster_term(row, sizes[uf] - 1, totals[uf] - p.mass) +
                            cluster_term(row, sizes[ut] + 1, totals[ut] + p.mass) -
                            cluster_term(row, sizes[uf], totals[uf]) - cluster_term(row, sizes[ut], totals[ut]);
    MoveDelta out;
    out.empties_source = sizes[uf] == 1;
    double structure = 0.0;
    if (out.empties_source) {
        const std::int64_t kr = model.row_cluster_count();
        const std::int64_t kc = model.col_cluster_count();
        structure = row ? structure_cost(kr - 1, kc) - structure_cost(kr, kc)
                        : structure_cost(kr, kc - 1) - structure_cost(kr, kc);
    }
    out.delta = structure + clusters + data;
    return out;
}

double Criterion::boundary_shift_delta(const CoclusterModel& model, std::int32_t boundary,
                                       ShiftDirection direction) const {
    check_model(model);
    if (model.kind() != ModelKind::temporal) throw ModelError("boundary shifts need a temporal model");
    if (boundary < 0 || boundary + 1 >= model.col_cluster_count()) throw ModelError("no such segment boundary");
    const auto& sizes = model.col_cluster_sizes();
    const auto& totals = model.col_cluster_totals();
    const auto left = static_cast<std::size_t>(boundary);
    std::int64_t start_right = 0;
    for (std::size_t s = 0; s <= left; ++s) start_right += sizes[s];
    std::int32_t element = 0, from = 0, to = 0;
    if (direction == ShiftDirection::earlier) {
        if (sizes[left] < 2) throw ModelError("shift would empty a segment");
        element = static_cast<std::int32_t>(start_right - 1);
        from = boundary;
        to = boundary + 1;
    } else {
        if (sizes[left + 1] < 2) throw ModelError("shift would empty a segment");
        element = static_cast<std::int32_t>(start_right);
        from = boundary + 1;
        to = boundary;
    }
    const Profile p = col_profile(model, *matrix_, element);
    double data = 0.0;
    for (std::size_t o = 0; o < p.counts.size(); ++o) {
        const std::int64_t c = p.counts[o];
        if (c == 0) continue;
        const std::int64_t nf = model.block(static_cast<std::int32_t>(o), from);
        const std::int64_t nt = model.block(static_cast<std::int32_t>(o), to);
        data += lf_(nf) + lf_(nt) - lf_(nf - c) - lf_(nt + c);
    }
    const auto uf = static_cast<std::size_t>(from), ut = static_cast<std::size_t>(to);
    const double clusters = cluster_term(false, sizes[uf] - 1, totals[uf] - p.mass) +
                            cluster_term(false, sizes[ut] + 1, totals[ut] + p.mass) -
                            cluster_term(false, sizes[uf], totals[uf]) - cluster_term(false, sizes[ut], totals[ut]);
    return clusters + data;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::int64_t kThrowawayTable = 1 << 16;
}

double spatial_cost(const CoclusterModel& model, const CountMatrix& matrix) {
    if (model.kind() != ModelKind::spatial) throw ModelError("spatial_cost on a temporal model");
    return Criterion(matrix, kThrowawayTable).cost(model);
}

double temporal_cost(const CoclusterModel& model, const CountMatrix& matrix) {
    if (model.kind() != ModelKind::temporal) throw ModelError("temporal_cost on a spatial model");
    return Criterion(matrix, kThrowawayTable).cost(model);
}

double model_cost(const CoclusterModel& model, const CountMatrix& matrix) {
    return Criterion(matrix, kThrowawayTable).cost(model);
}

double merge_delta(const CoclusterModel& model, const CountMatrix& matrix, Axis axis, std::int32_t a,
                   std::int32_t b) {
    return Criterion(matrix, kThrowawayTable).merge_delta(model, axis, a, b);
}

MoveDelta move_delta(const CoclusterModel& model, const CountMatrix& matrix, Axis axis, std::int32_t element,
                     std::int32_t target) {
    return Criterion(matrix, kThrowawayTable).move_delta(model, axis, element, target);
}

double boundary_shift_delta(const CoclusterModel& model, const CountMatrix& matrix, std::int32_t boundary,
                            ShiftDirection direction) {
    return Criterion(matrix, kThrowawayTable).boundary_shift_delta(model, boundary, direction);
}

}  // namespace coclust
