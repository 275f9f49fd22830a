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

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the merge/move evaluation. Every kernel has a
// portable reference implementation (kernels::generic) and, on x86-64, an
// AVX2 variant (kernels::avx2). The variant is picked once at runtime from
// CPUID; COCLUST_SIMD=scalar|avx2 forces a choice.
//
// Kernels that index `lf` (a ln-factorial table) require every computed
// index to be inside the table.

namespace coclust::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;

    /// sum_k lf[a_k + b_k] - lf[a_k] - lf[b_k]
    double (*merge_gain)(const std::int64_t* a, const std::int64_t* b, std::size_t n, const double* lf);

    /// out_k = g(a1 + b1, a_k + b_k) - g(a1, a_k) - g(b1, b_k),
    /// with g(x, y) = lf[x + y] - lf[x] - lf[y].
    void (*pair_gain_update)(std::int64_t a1, std::int64_t b1, const std::int64_t* a,
                             const std::int64_t* b, std::size_t n, const double* lf, double* out);

    /// sum_k lf[v_k]
    double (*sum_log_factorial)(const std::int64_t* v, std::size_t n, const double* lf);

    /// Minimum of v (+inf when n == 0).
    double (*min_value)(const double* v, std::size_t n);

    /// First index k with v_k <= threshold, or n.
    std::size_t (*first_at_most)(const double* v, std::size_t n, double threshold);
};

bool supported(Isa isa);
const char* name(Isa isa);

/// Table for one instruction set; throws coclust::Error when unsupported.
const KernelTable& table(Isa isa);

/// The table selected for this process.
const KernelTable& active();

namespace generic {
double merge_gain(const std::int64_t* a, const std::int64_t* b, std::size_t n, const double* lf);
void pair_gain_update(std::int64_t a1, std::int64_t b1, const std::int64_t* a, const std::int64_t* b,
                      std::size_t n, const double* lf, double* out);
double sum_log_factorial(const std::int64_t* v, std::size_t n, const double* lf);
double min_value(const double* v, std::size_t n);
std::size_t first_at_most(const double* v, std::size_t n, double threshold);
}  // namespace generic

#if defined(__x86_64__) || defined(_M_X64)
#define COCLUST_HAVE_AVX2_KERNELS 1
namespace avx2 {
double merge_gain(const std::int64_t* a, const std::int64_t* b, std::size_t n, const double* lf);
void pair_gain_update(std::int64_t a1, std::int64_t b1, const std::int64_t* a, const std::int64_t* b,
                      std::size_t n, const double* lf, double* out);
double sum_log_factorial(const std::int64_t* v, std::size_t n, const double* lf);
double min_value(const double* v, std::size_t n);
std::size_t first_at_most(const double* v, std::size_t n, double threshold);
}  // namespace avx2
#endif

}  // namespace coclust::kernels
