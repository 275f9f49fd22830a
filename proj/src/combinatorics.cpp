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

#include "coclust/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coclust {

namespace {

constexpr std::int64_t kExactFactorialLimit = 64;
// Below this n the Stirling sums are formed in exact 128-bit integers
// (Bell(40) ~ 1.6e35 < 2^128).
constexpr std::int64_t kExactStirlingLimit = 40;

const std::array<double, kExactFactorialLimit + 1>& small_log_factorials() {
    static const auto table = [] {
        std::array<double, kExactFactorialLimit + 1> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::int64_t n = 1; n <= kExactFactorialLimit; ++n) {
            acc += std::log(static_cast<long double>(n));
            t[static_cast<std::size_t>(n)] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

long double log_add(long double a, long double b) {
    constexpr long double ninf = -std::numeric_limits<long double>::infinity();
    if (a == ninf) return b;
    if (b == ninf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// ln B(n, k) for k = 1..kmax (kmax <= n).
std::vector<double> log_partition_counts(std::int64_t n, std::int64_t kmax) {
    std::vector<double> out(static_cast<std::size_t>(kmax));
    if (n <= kExactStirlingLimit) {
        using u128 = unsigned __int128;
        std::vector<u128> row(static_cast<std::size_t>(n + 1), 0);
        row[0] = 1;  // S(0,0)
        for (std::int64_t i = 1; i <= n; ++i) {
            for (std::int64_t j = i; j >= 1; --j)
                row[static_cast<std::size_t>(j)] =
                    static_cast<u128>(j) * row[static_cast<std::size_t>(j)] + row[static_cast<std::size_t>(j - 1)];
            row[0] = 0;
        }
        u128 acc = 0;
        for (std::int64_t k = 1; k <= kmax; ++k) {
            acc += row[static_cast<std::size_t>(k)];
            out[static_cast<std::size_t>(k - 1)] = static_cast<double>(std::log(static_cast<long double>(acc)));
        }
        return out;
    }

    // Rolling log-space recurrence S(i,j) = j S(i-1,j) + S(i-1,j-1), truncated at kmax.
    constexpr long double ninf = -std::numeric_limits<long double>::infinity();
    std::vector<long double> row(static_cast<std::size_t>(kmax + 1), ninf);
    row[1] = 0.0L;  // S(1,1)
    for (std::int64_t i = 2; i <= n; ++i) {
        std::int64_t top = std::min(i, kmax);
        for (std::int64_t j = top; j >= 2; --j) {
            auto ju = static_cast<std::size_t>(j);
            row[ju] = log_add(std::log(static_cast<long double>(j)) + row[ju], row[ju - 1]);
        }
    }
    long double acc = ninf;
    for (std::int64_t k = 1; k <= kmax; ++k) {
        acc = log_add(acc, row[static_cast<std::size_t>(k)]);
        out[static_cast<std::size_t>(k - 1)] = static_cast<double>(acc);
    }
    return out;
}

}  // namespace

double log_factorial(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("log_factorial of negative " + std::to_string(n));
    if (n <= kExactFactorialLimit) return small_log_factorials()[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n)
        throw std::invalid_argument("log_binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                    ") out of range");
    if (k == 0 || k == n) return 0.0;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_partition_count(std::int64_t n, std::int64_t k) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("log_partition_count needs n >= 1 and k >= 1");
    std::int64_t kk = std::min(n, k);
    return log_partition_counts(n, kk).back();
}

LogFactorialTable::LogFactorialTable(std::int64_t max_n) {
    table_.resize(static_cast<std::size_t>(std::max<std::int64_t>(max_n, 0) + 1));
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] = log_factorial(static_cast<std::int64_t>(i));
}

PartitionCountTable::PartitionCountTable(std::int64_t n, std::int64_t max_k) : n_(n) {
    if (n < 1 || max_k < 1) throw std::invalid_argument("PartitionCountTable needs n, max_k >= 1");
    log_b_ = log_partition_counts(n, std::min(n, max_k));
}

double PartitionCountTable::operator()(std::int64_t k) const {
    if (k < 1) throw std::out_of_range("partition count with k < 1");
    auto computed = static_cast<std::int64_t>(log_b_.size());
    if (k <= computed) return log_b_[static_cast<std::size_t>(k - 1)];
    if (computed == n_) return log_b_.back();
    throw std::out_of_range("partition count table built for k <= " + std::to_string(computed));
}

}  // namespace coclust
