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

// Compiled with -mavx2; only reached after a CPUID check.

#include <immintrin.h>

#include <limits>

#include "coclust/kernels.hpp"

namespace coclust::kernels::avx2 {

namespace {

inline __m256i load4(const std::int64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline __m256d gather(const double* lf, __m256i idx) { return _mm256_i64gather_pd(lf, idx, 8); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double merge_gain(const std::int64_t* a, const std::int64_t* b, std::size_t n, const double* lf) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256i va = load4(a + k);
        __m256i vb = load4(b + k);
        __m256d joint = gather(lf, _mm256_add_epi64(va, vb));
        __m256d term = _mm256_sub_pd(_mm256_sub_pd(joint, gather(lf, va)), gather(lf, vb));
        acc = _mm256_add_pd(acc, term);
    }
    double total = hsum(acc);
    for (; k < n; ++k) total += lf[a[k] + b[k]] - lf[a[k]] - lf[b[k]];
    return total;
}

void pair_gain_update(std::int64_t a1, std::int64_t b1, const std::int64_t* a, const std::int64_t* b,
                      std::size_t n, const double* lf, double* out) {
    const std::int64_t s1 = a1 + b1;
    const double base = -lf[s1] + lf[a1] + lf[b1];
    const __m256i va1 = _mm256_set1_epi64x(a1);
    const __m256i vb1 = _mm256_set1_epi64x(b1);
    const __m256i vs1 = _mm256_set1_epi64x(s1);
    const __m256d vbase = _mm256_set1_pd(base);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256i va = load4(a + k);
        __m256i vb = load4(b + k);
        __m256i vs = _mm256_add_epi64(va, vb);
        __m256d ts = _mm256_sub_pd(gather(lf, _mm256_add_epi64(vs1, vs)), gather(lf, vs));
        __m256d ta = _mm256_sub_pd(gather(lf, _mm256_add_epi64(va1, va)), gather(lf, va));
        __m256d tb = _mm256_sub_pd(gather(lf, _mm256_add_epi64(vb1, vb)), gather(lf, vb));
        __m256d r = _mm256_add_pd(_mm256_sub_pd(_mm256_sub_pd(ts, ta), tb), vbase);
        _mm256_storeu_pd(out + k, r);
    }
    for (; k < n; ++k) {
        const std::int64_t s = a[k] + b[k];
        out[k] = (lf[s1 + s] - lf[s]) - (lf[a1 + a[k]] - lf[a[k]]) - (lf[b1 + b[k]] - lf[b[k]]) + base;
    }
}

double sum_log_factorial(const std::int64_t* v, std::size_t n, const double* lf) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) acc = _mm256_add_pd(acc, gather(lf, load4(v + k)));
    double total = hsum(acc);
    for (; k < n; ++k) total += lf[v[k]];
    return total;
}

double min_value(const double* v, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    __m256d best = _mm256_set1_pd(inf);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) best = _mm256_min_pd(best, _mm256_loadu_pd(v + k));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double out = inf;
    for (double x : lanes)
        if (x < out) out = x;
    for (; k < n; ++k)
        if (v[k] < out) out = v[k];
    return out;
}

std::size_t first_at_most(const double* v, std::size_t n, double threshold) {
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + k), t, _CMP_LE_OQ));
        if (mask != 0) return k + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
    }
    for (; k < n; ++k)
        if (v[k] <= threshold) return k;
    return n;
}

}  // namespace coclust::kernels::avx2
