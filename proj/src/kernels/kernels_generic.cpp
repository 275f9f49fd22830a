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

#include <limits>

#include "coclust/kernels.hpp"

namespace coclust::kernels::generic {

double merge_gain(const std::int64_t* a, const std::int64_t* b, std::size_t n, const double* lf) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += lf[a[k] + b[k]] - lf[a[k]] - lf[b[k]];
    return acc;
}

void pair_gain_update(std::int64_t a1, std::int64_t b1, const std::int64_t* a, const std::int64_t* b,
                      std::size_t n, const double* lf, double* out) {
    const std::int64_t s1 = a1 + b1;
    const double base = -lf[s1] + lf[a1] + lf[b1];
    for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t s = a[k] + b[k];
        out[k] = (lf[s1 + s] - lf[s]) - (lf[a1 + a[k]] - lf[a[k]]) - (lf[b1 + b[k]] - lf[b[k]]) + base;
    }
}

double sum_log_factorial(const std::int64_t* v, std::size_t n, const double* lf) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += lf[v[k]];
    return acc;
}

double min_value(const double* v, std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
        if (v[k] < best) best = v[k];
    return best;
}

std::size_t first_at_most(const double* v, std::size_t n, double threshold) {
    for (std::size_t k = 0; k < n; ++k)
        if (v[k] <= threshold) return k;
    return n;
}

}  // namespace coclust::kernels::generic
