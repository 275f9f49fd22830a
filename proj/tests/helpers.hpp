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

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "coclust/count_matrix.hpp"
#include "coclust/model.hpp"

namespace testing_helpers {

inline coclust::CountMatrix matrix_from_dense(coclust::ModelKind kind,
                                              const std::vector<std::vector<std::int64_t>>& d) {
    std::vector<coclust::Cell> cells;
    for (std::size_t r = 0; r < d.size(); ++r)
        for (std::size_t c = 0; c < d[r].size(); ++c)
            if (d[r][c] > 0)
                cells.push_back({static_cast<std::int32_t>(r), static_cast<std::int32_t>(c), 0, d[r][c]});
    return coclust::CountMatrix::from_triplets(kind, static_cast<std::int32_t>(d.size()),
                                               static_cast<std::int32_t>(d[0].size()), cells);
}

/// Random sparse-ish table: `calls` draws over a random nonuniform weight grid.
inline coclust::CountMatrix random_matrix(std::mt19937_64& rng, coclust::ModelKind kind, int ns, int nc,
                                          int calls) {
    std::vector<double> w(static_cast<std::size_t>(ns * nc));
    for (auto& x : w) x = (rng() % 4 == 0) ? 0.0 : static_cast<double>(rng() % 10);
    if (*std::max_element(w.begin(), w.end()) == 0.0) w[0] = 1.0;
    std::vector<double> cum(w.size());
    std::partial_sum(w.begin(), w.end(), cum.begin());
    std::vector<coclust::Cell> cells;
    for (int i = 0; i < calls; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cum.back();
        const auto k = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        const int kk = std::min(k, ns * nc - 1);
        cells.push_back({kk / nc, kk % nc, 0, 1});
    }
    return coclust::CountMatrix::from_triplets(kind, ns, nc, cells);
}

inline std::vector<std::int32_t> random_labels(std::mt19937_64& rng, std::int32_t n, bool contiguous) {
    std::vector<std::int32_t> out(static_cast<std::size_t>(n));
    if (contiguous) {
        std::int32_t label = 0;
        for (std::int32_t i = 0; i < n; ++i) {
            if (i > 0 && rng() % 3 == 0) ++label;
            out[static_cast<std::size_t>(i)] = label;
        }
        return out;
    }
    const auto k = static_cast<std::int32_t>(1 + rng() % static_cast<std::uint64_t>(n));
    for (auto& v : out) v = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(k));
    std::vector<std::int32_t> remap(static_cast<std::size_t>(k), -1);
    std::int32_t next = 0;
    for (auto& v : out) {
        if (remap[static_cast<std::size_t>(v)] < 0) remap[static_cast<std::size_t>(v)] = next++;
        v = remap[static_cast<std::size_t>(v)];
    }
    return out;
}

inline coclust::CoclusterModel random_model(std::mt19937_64& rng, const coclust::CountMatrix& m) {
    return coclust::CoclusterModel::from_partition(
        m, random_labels(rng, m.rows(), false),
        random_labels(rng, m.cols(), m.kind() == coclust::ModelKind::temporal));
}

inline std::vector<int> as_int(const std::vector<std::int32_t>& v) { return {v.begin(), v.end()}; }

}  // namespace testing_helpers
