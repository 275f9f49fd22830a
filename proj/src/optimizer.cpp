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

#include "coclust/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>

#include "coclust/criterion.hpp"
#include "coclust/error.hpp"
#include "merge_engine.hpp"
#include "parallel.hpp"

namespace coclust {

namespace {

constexpr int kMaxRounds = 100;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// ---------------------------------------------------------------------------
// Pre-clustering

std::vector<std::int32_t> contiguous_groups(const std::vector<std::int64_t>& mass, std::int64_t target) {
    const auto n = static_cast<std::int64_t>(mass.size());
    std::vector<std::int32_t> out(mass.size(), 0);
    const std::int64_t total = std::accumulate(mass.begin(), mass.end(), std::int64_t{0});
    std::int64_t acc = 0;
    std::int32_t group = 0;
    for (std::int64_t j = 0; j < n; ++j) {
        out[static_cast<std::size_t>(j)] = group;
        acc += mass[static_cast<std::size_t>(j)];
        const std::int64_t remaining_entities = n - j - 1;
        const std::int64_t remaining_groups = target - group - 1;
        if (remaining_groups <= 0 || remaining_entities == 0) continue;
        // Close the group once its share of mass is reached, or when every
        // remaining entity must open its own group.
        const bool share_reached = static_cast<double>(acc) * static_cast<double>(target) >=
                                   static_cast<double>(total) * static_cast<double>(group + 1);
        if (share_reached || remaining_entities <= remaining_groups) ++group;
    }
    return out;
}

std::vector<std::int32_t> profile_groups(const CountMatrix& matrix, bool rows, std::int64_t target,
                                         std::uint64_t seed) {
    const std::int32_t n = rows ? matrix.rows() : matrix.cols();
    const std::int32_t n_other = rows ? matrix.cols() : matrix.rows();
    const auto& mass = rows ? matrix.row_sums() : matrix.col_sums();
    auto entries = [&](std::int32_t e) { return rows ? matrix.row(e) : matrix.col(e); };

    std::vector<std::int32_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return mass[static_cast<std::size_t>(a)] > mass[static_cast<std::size_t>(b)];
    });

    std::vector<std::int32_t> seeds;
    if (seed == 0) {
        seeds.assign(order.begin(), order.begin() + target);
    } else {
        std::vector<std::int32_t> pool(order.begin(), order.begin() + std::min<std::int64_t>(n, 2 * target));
        std::mt19937_64 rng(seed);
        for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);
        pool.resize(static_cast<std::size_t>(target));
        std::sort(pool.begin(), pool.end(), [&](std::int32_t a, std::int32_t b) {
            return std::make_pair(-mass[static_cast<std::size_t>(a)], a) <
                   std::make_pair(-mass[static_cast<std::size_t>(b)], b);
        });
        seeds = std::move(pool);
    }

    std::vector<std::int32_t> out(static_cast<std::size_t>(n), -1);
    // Inverted index: other-axis entity -> (seed group, count).
    std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> postings(static_cast<std::size_t>(n_other));
    std::vector<double> seed_norm(seeds.size(), 0.0);
    for (std::size_t g = 0; g < seeds.size(); ++g) {
        out[static_cast<std::size_t>(seeds[g])] = static_cast<std::int32_t>(g);
        for (const auto& e : entries(seeds[g])) {
            postings[static_cast<std::size_t>(e.index)].emplace_back(static_cast<std::int32_t>(g), e.count);
            seed_norm[g] += static_cast<double>(e.count) * static_cast<double>(e.count);
        }
    }
    for (double& v : seed_norm) v = std::sqrt(v);

    std::vector<double> dot(seeds.size(), 0.0);
    for (std::int32_t e = 0; e < n; ++e) {
        if (out[static_cast<std::size_t>(e)] >= 0) continue;
        std::fill(dot.begin(), dot.end(), 0.0);
        for (const auto& x : entries(e))
            for (const auto& [g, c] : postings[static_cast<std::size_t>(x.index)])
                dot[static_cast<std::size_t>(g)] += static_cast<double>(c) * static_cast<double>(x.count);
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t g = 0; g < seeds.size(); ++g) {
            const double score = seed_norm[g] > 0.0 ? dot[g] / seed_norm[g] : 0.0;
            if (score > best_score) {
                best_score = score;
                best = g;
            }
        }
        out[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(best);
    }
    return out;
}

// Random start for axes small enough to skip pre-clustering: a uniform
// cluster count, then uniform labels (or uniform cut points for segments).
std::vector<std::int32_t> random_partition(std::int32_t n, bool contiguous, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto k = static_cast<std::int32_t>(1 + rng() % static_cast<std::uint64_t>(n));
    std::vector<std::int32_t> out(static_cast<std::size_t>(n));
    if (contiguous) {
        std::vector<std::int32_t> cuts(static_cast<std::size_t>(n - 1));
        std::iota(cuts.begin(), cuts.end(), 1);
        for (std::size_t i = cuts.size(); i > 1; --i) std::swap(cuts[i - 1], cuts[rng() % i]);
        cuts.resize(static_cast<std::size_t>(k - 1));
        std::sort(cuts.begin(), cuts.end());
        std::int32_t label = 0;
        std::size_t next = 0;
        for (std::int32_t j = 0; j < n; ++j) {
            if (next < cuts.size() && cuts[next] == j) {
                ++label;
                ++next;
            }
            out[static_cast<std::size_t>(j)] = label;
        }
        return out;
    }
    for (auto& v : out) v = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(k));
    // Dense ids in order of first appearance.
    std::vector<std::int32_t> remap(static_cast<std::size_t>(k), -1);
    std::int32_t next = 0;
    for (auto& v : out) {
        auto& r = remap[static_cast<std::size_t>(v)];
        if (r < 0) r = next++;
        v = r;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Search phases

struct SlotMerge {
    bool row;
    std::int32_t keep;
    std::int32_t gone;
};

// Model obtained from `origin` by applying merges[0, count) expressed in the
// origin's cluster ids (a merge keeps the smaller slot).
CoclusterModel replay(const CountMatrix& matrix, const CoclusterModel& origin, const std::vector<SlotMerge>& merges,
                      std::size_t count) {
    std::vector<std::int32_t> row_parent(static_cast<std::size_t>(origin.row_cluster_count()), -1);
    std::vector<std::int32_t> col_parent(static_cast<std::size_t>(origin.col_cluster_count()), -1);
    for (std::size_t i = 0; i < count; ++i) {
        auto& parent = merges[i].row ? row_parent : col_parent;
        parent[static_cast<std::size_t>(merges[i].gone)] = merges[i].keep;
    }
    auto resolve = [](const std::vector<std::int32_t>& parent) {
        std::vector<std::int32_t> compact(parent.size(), -1);
        std::int32_t next = 0;
        for (std::size_t s = 0; s < parent.size(); ++s)
            if (parent[s] < 0) compact[s] = next++;
        std::vector<std::int32_t> out(parent.size());
        for (std::size_t s = 0; s < parent.size(); ++s) {
            auto root = static_cast<std::int32_t>(s);
            while (parent[static_cast<std::size_t>(root)] >= 0) root = parent[static_cast<std::size_t>(root)];
            out[s] = compact[static_cast<std::size_t>(root)];
        }
        return out;
    };
    const auto rmap = resolve(row_parent);
    const auto cmap = resolve(col_parent);
    std::vector<std::int32_t> rows(origin.row_partition().size()), cols(origin.col_partition().size());
    for (std::size_t e = 0; e < rows.size(); ++e) rows[e] = rmap[static_cast<std::size_t>(origin.row_partition()[e])];
    for (std::size_t e = 0; e < cols.size(); ++e) cols[e] = cmap[static_cast<std::size_t>(origin.col_partition()[e])];
    return CoclusterModel::from_partition(matrix, std::move(rows), std::move(cols));
}

// Greedy best-merge descent from `start` down to a single cluster per axis;
// returns the cheapest model met on the way (possibly `start` itself).
CoclusterModel merge_descent(const Criterion& criterion, const CoclusterModel& start, unsigned threads) {
    const CountMatrix& matrix = criterion.matrix();
    double cost = criterion.cost(start);
    double best_cost = cost;
    CoclusterModel best_model = start;

    CoclusterModel epoch_origin = start;
    std::vector<SlotMerge> merges;
    std::size_t best_in_epoch = 0;
    bool best_in_current_epoch = true;
    auto engine = std::make_unique<detail::MergeEngine>(criterion, epoch_origin, threads);
    const std::int32_t kr0 = start.row_cluster_count();
    const std::int32_t kc0 = start.col_cluster_count();
    std::int32_t cap_rows = kr0, cap_cols = kc0;

    for (;;) {
        const detail::MergeCandidate next = engine->best();
        if (!next.valid()) break;
        engine->apply(next);
        merges.push_back({next.axis == Axis::sources, next.a, next.b});
        cost += next.delta;
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_in_epoch = merges.size();
            best_in_current_epoch = true;
        }
        // Compact the slot tables once half of either axis is gone.
        const bool shrink_rows = cap_rows > 64 && engine->alive(Axis::sources) * 2 <= cap_rows;
        const bool shrink_cols = cap_cols > 64 && engine->alive(start.column_axis()) * 2 <= cap_cols;
        if (shrink_rows || shrink_cols) {
            if (best_in_current_epoch) best_model = replay(matrix, epoch_origin, merges, best_in_epoch);
            epoch_origin = engine->model();
            merges.clear();
            best_in_epoch = 0;
            best_in_current_epoch = false;
            cap_rows = epoch_origin.row_cluster_count();
            cap_cols = epoch_origin.col_cluster_count();
            engine = std::make_unique<detail::MergeEngine>(criterion, epoch_origin, threads);
        }
    }
    if (best_in_current_epoch) best_model = replay(matrix, epoch_origin, merges, best_in_epoch);
    return best_model;
}

struct SparseProfile {
    std::vector<std::pair<std::int32_t, std::int64_t>> counts;  // (other-axis cluster, count)
    std::int64_t mass = 0;
};

SparseProfile profile_of(const CoclusterModel& model, const CountMatrix& matrix, bool row, std::int32_t e,
                         std::vector<std::int64_t>& scratch) {
    const auto& other = row ? model.col_partition() : model.row_partition();
    SparseProfile p;
    for (const auto& x : row ? matrix.row(e) : matrix.col(e)) {
        const std::int32_t c = other[static_cast<std::size_t>(x.index)];
        if (scratch[static_cast<std::size_t>(c)] == 0) p.counts.emplace_back(c, 0);
        scratch[static_cast<std::size_t>(c)] += x.count;
        p.mass += x.count;
    }
    for (auto& [c, n] : p.counts) {
        n = scratch[static_cast<std::size_t>(c)];
        scratch[static_cast<std::size_t>(c)] = 0;
    }
    std::sort(p.counts.begin(), p.counts.end());
    return p;
}

// One best-improvement sweep of single-entity reassignments on `axis`.
// Returns the number of moves applied.
int move_sweep(const Criterion& criterion, CoclusterModel& model, Axis axis, double tolerance) {
    const CountMatrix& matrix = criterion.matrix();
    const auto& lf = criterion.log_factorials();
    const bool row = model.is_row_axis(axis);
    const std::int32_t n = row ? matrix.rows() : matrix.cols();
    std::vector<std::int64_t> scratch;
    int moves = 0;
    for (std::int32_t e = 0; e < n; ++e) {
        const std::int32_t k = model.cluster_count(axis);
        scratch.assign(static_cast<std::size_t>(row ? model.col_cluster_count() : model.row_cluster_count()), 0);
        const SparseProfile p = profile_of(model, matrix, row, e, scratch);
        const std::int32_t from = model.partition(axis)[static_cast<std::size_t>(e)];
        const auto& sizes = row ? model.row_cluster_sizes() : model.col_cluster_sizes();
        const auto& totals = row ? model.row_cluster_totals() : model.col_cluster_totals();
        auto block = [&](std::int32_t cluster, std::int32_t o) {
            return row ? model.block(cluster, o) : model.block(o, cluster);
        };
        const auto uf = static_cast<std::size_t>(from);
        if (k == 1 && sizes[uf] == 1) continue;
        double leave = criterion.cluster_term(row, sizes[uf] - 1, totals[uf] - p.mass) -
                       criterion.cluster_term(row, sizes[uf], totals[uf]);
        for (const auto& [o, c] : p.counts) {
            const std::int64_t nf = block(from, o);
            leave += lf(nf) - lf(nf - c);
        }
        if (sizes[uf] == 1) {
            const std::int64_t kr = model.row_cluster_count(), kc = model.col_cluster_count();
            leave += row ? criterion.structure_cost(kr - 1, kc) - criterion.structure_cost(kr, kc)
                         : criterion.structure_cost(kr, kc - 1) - criterion.structure_cost(kr, kc);
        }
        double best = -tolerance;
        std::int32_t best_target = -1;
        for (std::int32_t t = 0; t < k; ++t) {
            if (t == from) continue;
            const auto ut = static_cast<std::size_t>(t);
            double d = leave + criterion.cluster_term(row, sizes[ut] + 1, totals[ut] + p.mass) -
                       criterion.cluster_term(row, sizes[ut], totals[ut]);
            for (const auto& [o, c] : p.counts) {
                const std::int64_t nt = block(t, o);
                d += lf(nt) - lf(nt + c);
            }
            if (d < best) {
                best = d;
                best_target = t;
            }
        }
        // Splitting the entity off into a cluster of its own.
        if (sizes[uf] >= 2) {
            const std::int64_t kr = model.row_cluster_count(), kc = model.col_cluster_count();
            double d = leave + criterion.cluster_term(row, 1, p.mass) +
                       (row ? criterion.structure_cost(kr + 1, kc) : criterion.structure_cost(kr, kc + 1)) -
                       criterion.structure_cost(kr, kc);
            for (const auto& [o, c] : p.counts) d -= lf(c);
            if (d < best) {
                best = d;
                best_target = k;
            }
        }
        if (best_target == k) {
            auto labels = model.partition(axis);
            labels[static_cast<std::size_t>(e)] = k;
            model = row ? CoclusterModel::from_partition(matrix, std::move(labels), model.col_partition())
                        : CoclusterModel::from_partition(matrix, model.row_partition(), std::move(labels));
            ++moves;
        } else if (best_target >= 0) {
            model.move(matrix, axis, e, best_target);
            ++moves;
        }
    }
    return moves;
}

// Applies the single best split of one segment into two, if it lowers the cost.
bool split_segment(const Criterion& criterion, CoclusterModel& model, double tolerance) {
    const CountMatrix& matrix = criterion.matrix();
    const auto& lf = criterion.log_factorials();
    const std::int64_t kr = model.row_cluster_count(), kc = model.col_cluster_count();
    const double structure = criterion.structure_cost(kr, kc + 1) - criterion.structure_cost(kr, kc);
    const auto& seg = model.col_partition();
    const auto& rows = model.row_partition();
    std::vector<std::int64_t> left(static_cast<std::size_t>(kr), 0);
    double best = -tolerance;
    std::int32_t best_day = -1;
    std::int32_t first = 0;
    while (first < matrix.cols()) {
        const std::int32_t s = seg[static_cast<std::size_t>(first)];
        std::int32_t last = first;
        while (last + 1 < matrix.cols() && seg[static_cast<std::size_t>(last) + 1] == s) ++last;
        const std::int64_t mass = model.col_cluster_totals()[static_cast<std::size_t>(s)];
        std::fill(left.begin(), left.end(), 0);
        std::int64_t left_mass = 0;
        double data = 0.0;  // sum_r lf(L_r) + lf(S_r - L_r) - lf(S_r)
        for (std::int32_t d = first; d < last; ++d) {
            for (const auto& e : matrix.col(d)) {
                const auto r = static_cast<std::size_t>(rows[static_cast<std::size_t>(e.index)]);
                const std::int64_t total = model.block(static_cast<std::int32_t>(r), s);
                data -= lf(left[r]) + lf(total - left[r]);
                left[r] += e.count;
                data += lf(left[r]) + lf(total - left[r]);
                left_mass += e.count;
            }
            const double delta = structure + lf(left_mass) + lf(mass - left_mass) - lf(mass) - data;
            if (delta < best) {
                best = delta;
                best_day = d;
            }
        }
        first = last + 1;
    }
    if (best_day < 0) return false;
    auto labels = seg;
    const std::int32_t s = seg[static_cast<std::size_t>(best_day)];
    for (std::size_t d = static_cast<std::size_t>(best_day) + 1; d < labels.size(); ++d)
        if (labels[d] >= s) ++labels[d];
    model = CoclusterModel::from_partition(matrix, model.row_partition(), std::move(labels));
    return true;
}

int boundary_sweep(const Criterion& criterion, CoclusterModel& model, double tolerance) {
    int shifts = 0;
    for (std::int32_t b = 0; b + 1 < model.col_cluster_count(); ++b) {
        double best = -tolerance;
        int choice = -1;
        const auto& sizes = model.col_cluster_sizes();
        if (sizes[static_cast<std::size_t>(b)] >= 2) {
            const double d = criterion.boundary_shift_delta(model, b, ShiftDirection::earlier);
            if (d < best) {
                best = d;
                choice = 0;
            }
        }
        if (sizes[static_cast<std::size_t>(b) + 1] >= 2) {
            const double d = criterion.boundary_shift_delta(model, b, ShiftDirection::later);
            if (d < best) {
                best = d;
                choice = 1;
            }
        }
        if (choice >= 0) {
            model.shift_boundary(criterion.matrix(), b, choice == 0 ? ShiftDirection::earlier : ShiftDirection::later);
            ++shifts;
        }
    }
    return shifts;
}

struct Segmentation {
    double cost = 0.0;  // structure terms plus segment data terms
    std::vector<std::int32_t> labels;
};

constexpr std::int32_t kMaxSegments = 256;

std::int64_t segmentation_work(const CountMatrix& matrix, std::int32_t row_clusters) {
    const std::int64_t days = matrix.cols();
    return days * days * (std::min<std::int64_t>(days, kMaxSegments) + row_clusters);
}

// Best segmentation of the days for a fixed source partition, by dynamic
// programming over (last day, segment count). The data terms are additive
// over segments and the rest of the cost depends only on the segment count.
Segmentation best_segmentation(const Criterion& criterion, const std::vector<std::int32_t>& rows,
                               std::int32_t kr) {
    const CountMatrix& matrix = criterion.matrix();
    const auto& lf = criterion.log_factorials();
    const std::int32_t days = matrix.cols();
    const std::int32_t kmax = std::min(days, kMaxSegments);
    const auto t = static_cast<std::size_t>(days);
    const auto ukr = static_cast<std::size_t>(kr);

    // prefix[d][r]: events of source cluster r on days [0, d).
    std::vector<std::int64_t> prefix((t + 1) * ukr, 0);
    for (std::size_t d = 0; d < t; ++d) {
        std::copy_n(prefix.begin() + static_cast<std::ptrdiff_t>(d * ukr), kr,
                    prefix.begin() + static_cast<std::ptrdiff_t>((d + 1) * ukr));
        for (const auto& e : matrix.col(static_cast<std::int32_t>(d)))
            prefix[(d + 1) * ukr + static_cast<std::size_t>(rows[static_cast<std::size_t>(e.index)])] += e.count;
    }
    // seg[a * t + b]: data terms of one segment spanning days [a, b].
    std::vector<double> seg(t * t, 0.0);
    for (std::size_t a = 0; a < t; ++a)
        for (std::size_t b = a; b < t; ++b) {
            std::int64_t mass = 0;
            double v = 0.0;
            for (std::size_t r = 0; r < ukr; ++r) {
                const std::int64_t n = prefix[(b + 1) * ukr + r] - prefix[a * ukr + r];
                mass += n;
                v -= lf(n);
            }
            seg[a * t + b] = v + lf(mass);
        }

    constexpr double inf = std::numeric_limits<double>::infinity();
    // best[k][b]: k + 1 segments covering days [0, b]; from[k][b]: first day of the last one.
    std::vector<double> best(static_cast<std::size_t>(kmax) * t, inf);
    std::vector<std::int32_t> from(static_cast<std::size_t>(kmax) * t, 0);
    for (std::size_t b = 0; b < t; ++b) best[b] = seg[b];
    for (std::size_t k = 1; k < static_cast<std::size_t>(kmax); ++k)
        for (std::size_t b = k; b < t; ++b) {
            double v = inf;
            std::int32_t arg = 0;
            for (std::size_t a = k; a <= b; ++a) {
                const double c = best[(k - 1) * t + a - 1] + seg[a * t + b];
                if (c < v) {
                    v = c;
                    arg = static_cast<std::int32_t>(a);
                }
            }
            best[k * t + b] = v;
            from[k * t + b] = arg;
        }
    Segmentation out{inf, std::vector<std::int32_t>(t)};
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(kmax); ++k) {
        const double v = best[k * t + t - 1] + criterion.structure_cost(kr, static_cast<std::int64_t>(k) + 1);
        if (v < out.cost) {
            out.cost = v;
            best_k = k;
        }
    }
    std::size_t b = t - 1;
    for (std::size_t k = best_k + 1; k-- > 0;) {
        const std::size_t a = k == 0 ? 0 : static_cast<std::size_t>(from[k * t + b]);
        for (std::size_t d = a; d <= b; ++d) out.labels[d] = static_cast<std::int32_t>(k);
        if (a == 0) break;
        b = a - 1;
    }
    return out;
}

bool resegment(const Criterion& criterion, CoclusterModel& model, double tolerance) {
    constexpr std::int64_t kMaxWork = 400'000'000;
    if (segmentation_work(criterion.matrix(), model.row_cluster_count()) > kMaxWork) return false;
    const double before = criterion.cost(model);
    Segmentation s = best_segmentation(criterion, model.row_partition(), model.row_cluster_count());
    CoclusterModel candidate =
        CoclusterModel::from_partition(criterion.matrix(), model.row_partition(), std::move(s.labels));
    if (!(criterion.cost(candidate) < before - tolerance)) return false;
    model = std::move(candidate);
    return true;
}

// Source moves scored with the segmentation re-optimized for each candidate
// partition. Only run on small instances.
int joint_source_sweep(const Criterion& criterion, CoclusterModel& model, double tolerance) {
    constexpr std::int64_t kMaxWork = 20'000'000;
    const CountMatrix& matrix = criterion.matrix();
    const std::int64_t kr = model.row_cluster_count();
    if (static_cast<std::int64_t>(matrix.rows()) * (kr + 1) * segmentation_work(matrix, kr + 1) > kMaxWork)
        return 0;
    int moves = 0;
    double current = criterion.cost(model);
    for (std::int32_t e = 0; e < matrix.rows(); ++e) {
        const std::int32_t k = model.row_cluster_count();
        const std::int32_t from = model.row_partition()[static_cast<std::size_t>(e)];
        const bool alone = model.row_cluster_sizes()[static_cast<std::size_t>(from)] == 1;
        double best = current - tolerance;
        std::optional<CoclusterModel> choice;
        for (std::int32_t t = 0; t <= k; ++t) {
            if (t == from || (t == k && alone)) continue;
            auto rows = model.row_partition();
            rows[static_cast<std::size_t>(e)] = t;
            if (alone)
                for (auto& v : rows)
                    if (v > from) --v;
            const std::int32_t kr_new = alone ? k - 1 : (t == k ? k + 1 : k);
            Segmentation s = best_segmentation(criterion, rows, kr_new);
            CoclusterModel candidate = CoclusterModel::from_partition(matrix, std::move(rows), std::move(s.labels));
            const double c = criterion.cost(candidate);
            if (c < best) {
                best = c;
                choice = std::move(candidate);
            }
        }
        if (choice) {
            model = std::move(*choice);
            current = best;
            ++moves;
        }
    }
    return moves;
}

struct RestartOutcome {
    CoclusterModel model;
    double cost = 0.0;
    std::vector<TraceStep> trace;
};

RestartOutcome run_restart(const Criterion& criterion, const OptimizerConfig& config, std::int32_t restart,
                           std::int64_t cap, std::mutex& progress_mutex) {
    const CountMatrix& matrix = criterion.matrix();
    const std::uint64_t seed = restart == 0 ? 0 : splitmix64(config.seed + static_cast<std::uint64_t>(restart));
    const Axis col_axis = matrix.kind() == ModelKind::spatial ? Axis::destinations : Axis::segments;
    auto rows = matrix.rows() > cap || restart == 0 ? precluster(matrix, Axis::sources, cap, seed)
                                                    : random_partition(matrix.rows(), false, seed);
    auto cols = matrix.cols() > cap || restart == 0
                    ? precluster(matrix, col_axis, cap, seed)
                    : random_partition(matrix.cols(), col_axis == Axis::segments, seed ^ 0x5bd1e995ULL);
    RestartOutcome out;
    CoclusterModel model = CoclusterModel::from_partition(matrix, std::move(rows), std::move(cols));
    double cost = criterion.cost(model);

    std::int64_t step = 0;
    auto record = [&] {
        TraceStep s{restart, step++, cost, model.row_cluster_count(), model.col_cluster_count()};
        out.trace.push_back(s);
        if (config.progress) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            config.progress({restart, s.step, cost, s.row_clusters, s.col_clusters});
        }
    };
    record();

    const double tol = config.cost_tolerance;
    auto post_optimize = [&] {
        for (int pass = 0; pass < config.post_opt_passes; ++pass) {
            int changed = move_sweep(criterion, model, Axis::sources, tol);
            if (model.kind() == ModelKind::spatial) {
                changed += move_sweep(criterion, model, Axis::destinations, tol);
            } else {
                changed += joint_source_sweep(criterion, model, tol);
                if (resegment(criterion, model, tol))
                    ++changed;
                else
                    changed += boundary_sweep(criterion, model, tol) + (split_segment(criterion, model, tol) ? 1 : 0);
            }
            if (changed == 0) break;
            cost = criterion.cost(model);
            record();
        }
    };
    // A random start is first polished as is; merging it right away tends to
    // collapse it.
    if (restart > 0) post_optimize();
    for (int round = 0; round < kMaxRounds; ++round) {
        const double round_start = cost;
        model = merge_descent(criterion, model, config.threads);
        cost = criterion.cost(model);
        record();
        post_optimize();
        if (!(cost < round_start - tol)) break;
    }
    model.canonicalize();
    out.cost = criterion.cost(model);
    out.model = std::move(model);
    return out;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (restarts < 1) throw Error("restarts must be >= 1");
    if (max_preclusters < 0) throw Error("max_preclusters must be >= 0 (0 = automatic)");
    if (post_opt_passes < 0) throw Error("post_opt_passes must be >= 0");
    if (!(cost_tolerance >= 0.0)) throw Error("cost_tolerance must be >= 0");
    if (threads < 1) throw Error("threads must be >= 1");
}

std::int64_t OptimizerConfig::effective_max_preclusters(std::int64_t total) const {
    if (max_preclusters > 0) return max_preclusters;
    const auto root = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(total))));
    return std::max<std::int64_t>(64, root);
}

std::vector<std::int32_t> precluster(const CountMatrix& matrix, Axis axis, std::int64_t target_count,
                                     std::uint64_t seed) {
    if (target_count < 1) throw Error("precluster target must be >= 1");
    const bool row = axis == Axis::sources;
    if (axis == Axis::segments && matrix.kind() != ModelKind::temporal)
        throw ModelError("segment pre-clustering needs a temporal matrix");
    if (axis == Axis::destinations && matrix.kind() != ModelKind::spatial)
        throw ModelError("destination pre-clustering needs a spatial matrix");
    const std::int32_t n = row ? matrix.rows() : matrix.cols();
    std::vector<std::int32_t> out(static_cast<std::size_t>(n));
    if (target_count >= n) {
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    if (target_count == 1) return std::vector<std::int32_t>(static_cast<std::size_t>(n), 0);
    if (axis == Axis::segments) return contiguous_groups(matrix.col_sums(), target_count);
    return profile_groups(matrix, row, target_count, seed);
}

FitResult fit(const CountMatrix& matrix, const OptimizerConfig& config) {
    config.validate();
    if (matrix.total() < 1) throw InputError("empty corpus");
    const auto started = std::chrono::steady_clock::now();

    const Criterion criterion(matrix);
    FitResult result;
    const CoclusterModel null_model = CoclusterModel::null_model(matrix);
    result.null_cost = criterion.cost(null_model);

    const std::int64_t cap = config.effective_max_preclusters(matrix.total());
    const std::int32_t restarts = config.restarts;

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
    std::mutex progress_mutex;
    const unsigned outer = std::min<unsigned>(config.threads, static_cast<unsigned>(restarts));
    OptimizerConfig inner = config;
    inner.threads = std::max(1u, config.threads / std::max(1u, outer));
    detail::parallel_for(outcomes.size(), outer, [&](std::size_t r) {
        outcomes[r] = run_restart(criterion, inner, static_cast<std::int32_t>(r), cap, progress_mutex);
    });

    std::size_t best = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        result.restart_costs.push_back(outcomes[r].cost);
        result.trace.insert(result.trace.end(), outcomes[r].trace.begin(), outcomes[r].trace.end());
        if (r == 0) continue;
        const auto& a = outcomes[r];
        const auto& b = outcomes[best];
        const bool tied = std::abs(a.cost - b.cost) <= config.cost_tolerance;
        if ((!tied && a.cost < b.cost) ||
            (tied && std::tie(a.model.row_partition(), a.model.col_partition()) <
                         std::tie(b.model.row_partition(), b.model.col_partition())))
            best = r;
    }
    if (outcomes[best].cost < result.null_cost - config.cost_tolerance) {
        result.model = std::move(outcomes[best].model);
        result.cost = outcomes[best].cost;
    } else {
        result.model = null_model;
        result.cost = result.null_cost;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

FitResult fit_spatial(const EventCorpus& corpus, const OptimizerConfig& config) {
    const CountMatrix matrix = CountMatrix::spatial(corpus);
    return fit(matrix, config);
}

FitResult fit_temporal(const EventCorpus& corpus, const OptimizerConfig& config) {
    const CountMatrix matrix = CountMatrix::temporal(corpus);
    return fit(matrix, config);
}

}  // namespace coclust
