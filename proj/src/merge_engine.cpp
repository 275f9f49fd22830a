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

#include "merge_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "coclust/error.hpp"
#include "parallel.hpp"

namespace coclust::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MergeEngine::MergeEngine(const Criterion& criterion, const CoclusterModel& start, unsigned threads)
    : criterion_(criterion),
      k_(kernels::active()),
      lf_(criterion.log_factorials().data()),
      origin_(start),
      temporal_(start.kind() == ModelKind::temporal),
      kr_(static_cast<std::size_t>(start.row_cluster_count())),
      kc_(static_cast<std::size_t>(start.col_cluster_count())),
      alive_rows_(start.row_cluster_count()),
      alive_cols_(start.col_cluster_count()) {
    if (criterion.log_factorials().size() <= criterion.matrix().total())
        throw Error("ln-factorial table too small for the merge engine");

    rows_ = start.blocks();
    cols_.assign(kr_ * kc_, 0);
    for (std::size_t r = 0; r < kr_; ++r)
        for (std::size_t c = 0; c < kc_; ++c) cols_[c * kr_ + r] = rows_[r * kc_ + c];
    row_size_ = start.row_cluster_sizes();
    row_total_ = start.row_cluster_totals();
    col_size_ = start.col_cluster_sizes();
    col_total_ = start.col_cluster_totals();
    row_alive_.assign(kr_, 1);
    col_alive_.assign(kc_, 1);
    row_parent_.assign(kr_, -1);
    col_parent_.assign(kc_, -1);

    row_pairs_.assign(kr_ * kr_, kInf);
    parallel_for(kr_, threads, [&](std::size_t a) {
        for (std::size_t b = a + 1; b < kr_; ++b)
            row_pairs_[a * kr_ + b] = row_pair(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b));
    });
    for (std::size_t a = 0; a < kr_; ++a)
        for (std::size_t b = 0; b < a; ++b) row_pairs_[a * kr_ + b] = row_pairs_[b * kr_ + a];
    row_best_.assign(kr_, kInf);
    for (std::size_t r = 0; r < kr_; ++r) rescan_row(static_cast<std::int32_t>(r));

    if (temporal_) {
        adjacent_.assign(kc_, kInf);
        for (std::size_t c = 0; c + 1 < kc_; ++c)
            adjacent_[c] = col_pair(static_cast<std::int32_t>(c), static_cast<std::int32_t>(c + 1));
    } else {
        col_pairs_.assign(kc_ * kc_, kInf);
        parallel_for(kc_, threads, [&](std::size_t a) {
            for (std::size_t b = a + 1; b < kc_; ++b)
                col_pairs_[a * kc_ + b] = col_pair(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b));
        });
        for (std::size_t a = 0; a < kc_; ++a)
            for (std::size_t b = 0; b < a; ++b) col_pairs_[a * kc_ + b] = col_pairs_[b * kc_ + a];
        col_best_.assign(kc_, kInf);
        for (std::size_t c = 0; c < kc_; ++c) rescan_col(static_cast<std::int32_t>(c));
    }
}

double MergeEngine::row_pair(std::int32_t a, std::int32_t b) const {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    const double data = k_.merge_gain(&rows_[ua * kc_], &rows_[ub * kc_], kc_, lf_);
    const double clusters = criterion_.cluster_term(true, row_size_[ua] + row_size_[ub], row_total_[ua] + row_total_[ub]) -
                            criterion_.cluster_term(true, row_size_[ua], row_total_[ua]) -
                            criterion_.cluster_term(true, row_size_[ub], row_total_[ub]);
    return clusters - data;
}

double MergeEngine::col_pair(std::int32_t a, std::int32_t b) const {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    const double data = k_.merge_gain(&cols_[ua * kr_], &cols_[ub * kr_], kr_, lf_);
    const double clusters = criterion_.cluster_term(false, col_size_[ua] + col_size_[ub], col_total_[ua] + col_total_[ub]) -
                            criterion_.cluster_term(false, col_size_[ua], col_total_[ua]) -
                            criterion_.cluster_term(false, col_size_[ub], col_total_[ub]);
    return clusters - data;
}

double MergeEngine::structure_delta(bool row) const {
    const std::int64_t kr = alive_rows_, kc = alive_cols_;
    return row ? criterion_.structure_cost(kr - 1, kc) - criterion_.structure_cost(kr, kc)
               : criterion_.structure_cost(kr, kc - 1) - criterion_.structure_cost(kr, kc);
}

void MergeEngine::rescan_row(std::int32_t r) {
    const auto ur = static_cast<std::size_t>(r);
    row_best_[ur] = row_alive_[ur] ? k_.min_value(&row_pairs_[ur * kr_], kr_) : kInf;
}

void MergeEngine::rescan_col(std::int32_t c) {
    const auto uc = static_cast<std::size_t>(c);
    col_best_[uc] = col_alive_[uc] ? k_.min_value(&col_pairs_[uc * kc_], kc_) : kInf;
}

std::int32_t MergeEngine::next_alive_col(std::int32_t c) const {
    for (auto s = static_cast<std::size_t>(c) + 1; s < kc_; ++s)
        if (col_alive_[s]) return static_cast<std::int32_t>(s);
    return -1;
}

std::int32_t MergeEngine::prev_alive_col(std::int32_t c) const {
    for (std::int32_t s = c - 1; s >= 0; --s)
        if (col_alive_[static_cast<std::size_t>(s)]) return s;
    return -1;
}

void MergeEngine::refresh_adjacent(std::int32_t c) {
    if (c < 0) return;
    const std::int32_t next = next_alive_col(c);
    adjacent_[static_cast<std::size_t>(c)] = next < 0 ? kInf : col_pair(c, next);
}

MergeCandidate MergeEngine::best_in_table(const std::vector<double>& table, const std::vector<double>& best_value,
                                          const std::vector<char>& alive, std::size_t stride) const {
    MergeCandidate out;
    double gmin = kInf;
    for (std::size_t r = 0; r < stride; ++r)
        if (alive[r] && best_value[r] < gmin) gmin = best_value[r];
    if (gmin == kInf) return out;
    const double threshold = gmin + kTieTolerance;
    for (std::size_t r = 0; r < stride; ++r) {
        if (!alive[r] || best_value[r] > threshold) continue;
        const std::size_t x = k_.first_at_most(&table[r * stride], stride, threshold);
        if (x == stride) continue;
        auto a = static_cast<std::int32_t>(std::min(r, x));
        auto b = static_cast<std::int32_t>(std::max(r, x));
        if (!out.valid() || std::tie(a, b) < std::tie(out.a, out.b)) {
            out.a = a;
            out.b = b;
            out.delta = table[r * stride + x];
        }
    }
    return out;
}

MergeCandidate MergeEngine::best(Axis axis) const {
    MergeCandidate out;
    if (is_row(axis)) {
        if (alive_rows_ < 2) return out;
        out = best_in_table(row_pairs_, row_best_, row_alive_, kr_);
        out.axis = Axis::sources;
        if (out.valid()) out.delta += structure_delta(true);
        return out;
    }
    if (alive_cols_ < 2) return out;
    if (temporal_) {
        double gmin = kInf;
        for (std::size_t c = 0; c < kc_; ++c)
            if (col_alive_[c] && adjacent_[c] < gmin) gmin = adjacent_[c];
        if (gmin == kInf) return out;
        for (std::size_t c = 0; c < kc_; ++c) {
            if (col_alive_[c] && adjacent_[c] <= gmin + kTieTolerance) {
                out.a = static_cast<std::int32_t>(c);
                out.b = next_alive_col(out.a);
                out.delta = adjacent_[c];
                break;
            }
        }
        out.axis = Axis::segments;
    } else {
        out = best_in_table(col_pairs_, col_best_, col_alive_, kc_);
        out.axis = Axis::destinations;
    }
    if (out.valid()) out.delta += structure_delta(false);
    return out;
}

MergeCandidate MergeEngine::best() const {
    MergeCandidate r = best(Axis::sources);
    MergeCandidate c = best(temporal_ ? Axis::segments : Axis::destinations);
    if (!r.valid()) return c;
    if (!c.valid()) return r;
    if (std::abs(r.delta - c.delta) <= kTieTolerance)
        return std::tie(c.a, c.b) < std::tie(r.a, r.b) ? c : r;
    return c.delta < r.delta ? c : r;
}

void MergeEngine::apply(const MergeCandidate& merge) {
    if (!merge.valid()) throw ModelError("apply of an invalid merge");
    const std::int32_t keep = std::min(merge.a, merge.b);
    const std::int32_t gone = std::max(merge.a, merge.b);
    if (is_row(merge.axis)) {
        if (!row_alive_[static_cast<std::size_t>(keep)] || !row_alive_[static_cast<std::size_t>(gone)])
            throw ModelError("merge of a dead source slot");
        merge_rows(keep, gone);
    } else {
        if (!col_alive_[static_cast<std::size_t>(keep)] || !col_alive_[static_cast<std::size_t>(gone)])
            throw ModelError("merge of a dead column slot");
        if (temporal_ && next_alive_col(keep) != gone) throw ModelError("only adjacent segments can merge");
        merge_cols(keep, gone);
    }
}

void MergeEngine::merge_rows(std::int32_t keep, std::int32_t gone) {
    const auto uk = static_cast<std::size_t>(keep), ug = static_cast<std::size_t>(gone);
    // Nonzero entries of the two merged rows, over alive columns.
    std::vector<std::int32_t> touched;
    std::vector<std::int64_t> old_keep, old_gone;
    for (std::size_t c = 0; c < kc_; ++c) {
        const std::int64_t a = rows_[uk * kc_ + c], b = rows_[ug * kc_ + c];
        if (col_alive_[c] && (a != 0 || b != 0)) {
            touched.push_back(static_cast<std::int32_t>(c));
            old_keep.push_back(a);
            old_gone.push_back(b);
        }
    }

    for (std::size_t c = 0; c < kc_; ++c) {
        rows_[uk * kc_ + c] += rows_[ug * kc_ + c];
        rows_[ug * kc_ + c] = 0;
        cols_[c * kr_ + uk] += cols_[c * kr_ + ug];
        cols_[c * kr_ + ug] = 0;
    }
    row_size_[uk] += row_size_[ug];
    row_total_[uk] += row_total_[ug];
    row_size_[ug] = 0;
    row_total_[ug] = 0;
    row_alive_[ug] = 0;
    row_parent_[ug] = keep;
    --alive_rows_;

    for (std::size_t r = 0; r < kr_; ++r) {
        row_pairs_[ug * kr_ + r] = kInf;
        row_pairs_[r * kr_ + ug] = kInf;
    }
    for (std::size_t r = 0; r < kr_; ++r) {
        if (!row_alive_[r] || r == uk) continue;
        const double v = row_pair(keep, static_cast<std::int32_t>(r));
        row_pairs_[uk * kr_ + r] = v;
        row_pairs_[r * kr_ + uk] = v;
    }
    for (std::size_t r = 0; r < kr_; ++r) rescan_row(static_cast<std::int32_t>(r));

    // Column pairs: the data term of (j1, j2) gains
    // g(A1+B1, A2+B2) - g(A1, A2) - g(B1, B2) when rows A and B merge.
    const std::size_t n = touched.size();
    if (temporal_) {
        std::vector<std::int64_t> a_full(kc_, 0), b_full(kc_, 0);
        for (std::size_t p = 0; p < n; ++p) {
            a_full[static_cast<std::size_t>(touched[p])] = old_keep[p];
            b_full[static_cast<std::size_t>(touched[p])] = old_gone[p];
        }
        for (std::size_t c = 0; c < kc_; ++c) {
            if (!col_alive_[c] || adjacent_[c] == kInf) continue;
            const auto nx = static_cast<std::size_t>(next_alive_col(static_cast<std::int32_t>(c)));
            if ((a_full[c] | b_full[c]) == 0 || (a_full[nx] | b_full[nx]) == 0) continue;
            double gain = 0.0;
            k_.pair_gain_update(a_full[c], b_full[c], &a_full[nx], &b_full[nx], 1, lf_, &gain);
            adjacent_[c] -= gain;
        }
        return;
    }
    std::vector<double> gain(n);
    for (std::size_t p = 0; p + 1 < n; ++p) {
        const std::size_t rest = n - p - 1;
        k_.pair_gain_update(old_keep[p], old_gone[p], &old_keep[p + 1], &old_gone[p + 1], rest, lf_, gain.data());
        const auto j1 = static_cast<std::size_t>(touched[p]);
        for (std::size_t q = 0; q < rest; ++q) {
            const auto j2 = static_cast<std::size_t>(touched[p + 1 + q]);
            col_pairs_[j1 * kc_ + j2] -= gain[q];
            col_pairs_[j2 * kc_ + j1] = col_pairs_[j1 * kc_ + j2];
        }
    }
    for (std::int32_t c : touched) rescan_col(c);
}

void MergeEngine::merge_cols(std::int32_t keep, std::int32_t gone) {
    const auto uk = static_cast<std::size_t>(keep), ug = static_cast<std::size_t>(gone);
    std::vector<std::int32_t> touched;
    std::vector<std::int64_t> old_keep, old_gone;
    for (std::size_t r = 0; r < kr_; ++r) {
        const std::int64_t a = cols_[uk * kr_ + r], b = cols_[ug * kr_ + r];
        if (row_alive_[r] && (a != 0 || b != 0)) {
            touched.push_back(static_cast<std::int32_t>(r));
            old_keep.push_back(a);
            old_gone.push_back(b);
        }
    }

    for (std::size_t r = 0; r < kr_; ++r) {
        cols_[uk * kr_ + r] += cols_[ug * kr_ + r];
        cols_[ug * kr_ + r] = 0;
        rows_[r * kc_ + uk] += rows_[r * kc_ + ug];
        rows_[r * kc_ + ug] = 0;
    }
    col_size_[uk] += col_size_[ug];
    col_total_[uk] += col_total_[ug];
    col_size_[ug] = 0;
    col_total_[ug] = 0;
    col_alive_[ug] = 0;
    col_parent_[ug] = keep;
    --alive_cols_;

    if (temporal_) {
        adjacent_[ug] = kInf;
        refresh_adjacent(keep);
        refresh_adjacent(prev_alive_col(keep));
    } else {
        for (std::size_t c = 0; c < kc_; ++c) {
            col_pairs_[ug * kc_ + c] = kInf;
            col_pairs_[c * kc_ + ug] = kInf;
        }
        for (std::size_t c = 0; c < kc_; ++c) {
            if (!col_alive_[c] || c == uk) continue;
            const double v = col_pair(keep, static_cast<std::int32_t>(c));
            col_pairs_[uk * kc_ + c] = v;
            col_pairs_[c * kc_ + uk] = v;
        }
        for (std::size_t c = 0; c < kc_; ++c) rescan_col(static_cast<std::int32_t>(c));
    }

    const std::size_t n = touched.size();
    std::vector<double> gain(n);
    for (std::size_t p = 0; p + 1 < n; ++p) {
        const std::size_t rest = n - p - 1;
        k_.pair_gain_update(old_keep[p], old_gone[p], &old_keep[p + 1], &old_gone[p + 1], rest, lf_, gain.data());
        const auto i1 = static_cast<std::size_t>(touched[p]);
        for (std::size_t q = 0; q < rest; ++q) {
            const auto i2 = static_cast<std::size_t>(touched[p + 1 + q]);
            row_pairs_[i1 * kr_ + i2] -= gain[q];
            row_pairs_[i2 * kr_ + i1] = row_pairs_[i1 * kr_ + i2];
        }
    }
    for (std::int32_t r : touched) rescan_row(r);
}

std::int32_t MergeEngine::compact_id(Axis axis, std::int32_t slot) const {
    const auto& alive = is_row(axis) ? row_alive_ : col_alive_;
    std::int32_t id = 0;
    for (std::int32_t s = 0; s < slot; ++s) id += alive[static_cast<std::size_t>(s)] ? 1 : 0;
    return id;
}

double MergeEngine::recompute(Axis axis, std::int32_t a, std::int32_t b) const {
    const bool row = is_row(axis);
    return (row ? row_pair(a, b) : col_pair(a, b)) + structure_delta(row);
}

CoclusterModel MergeEngine::model() const {
    auto resolve = [](const std::vector<std::int32_t>& parent, const std::vector<char>& alive) {
        std::vector<std::int32_t> compact(parent.size(), -1);
        std::int32_t next = 0;
        for (std::size_t s = 0; s < alive.size(); ++s)
            if (alive[s]) compact[s] = next++;
        std::vector<std::int32_t> out(parent.size());
        for (std::size_t s = 0; s < parent.size(); ++s) {
            auto root = static_cast<std::int32_t>(s);
            while (parent[static_cast<std::size_t>(root)] >= 0) root = parent[static_cast<std::size_t>(root)];
            out[s] = compact[static_cast<std::size_t>(root)];
        }
        return out;
    };
    const auto row_map = resolve(row_parent_, row_alive_);
    const auto col_map = resolve(col_parent_, col_alive_);
    std::vector<std::int32_t> rows(origin_.row_partition().size());
    std::vector<std::int32_t> cols(origin_.col_partition().size());
    for (std::size_t e = 0; e < rows.size(); ++e)
        rows[e] = row_map[static_cast<std::size_t>(origin_.row_partition()[e])];
    for (std::size_t e = 0; e < cols.size(); ++e)
        cols[e] = col_map[static_cast<std::size_t>(origin_.col_partition()[e])];
    return CoclusterModel::from_partition(criterion_.matrix(), std::move(rows), std::move(cols));
}

}  // namespace coclust::detail
