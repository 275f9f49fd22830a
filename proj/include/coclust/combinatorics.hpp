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

#include <cstdint>
#include <vector>

namespace coclust {

/// ln(n!). Exact-table for n <= 64, lgamma beyond.
double log_factorial(std::int64_t n);

/// ln C(n, k). Throws std::invalid_argument when k > n or an argument is negative.
double log_binomial(std::int64_t n, std::int64_t k);

/// ln B(n, k): the number of partitions of n elements into at most k
/// non-empty blocks, i.e. sum_{j<=min(n,k)} S(n, j) with S the Stirling
/// numbers of the second kind. Requires n >= 1, k >= 1.
double log_partition_count(std::int64_t n, std::int64_t k);

/// Cached ln(n!) for n < size(), falling back to log_factorial() beyond.
class LogFactorialTable {
public:
    explicit LogFactorialTable(std::int64_t max_n = 0);

    double operator()(std::int64_t n) const {
        return n < static_cast<std::int64_t>(table_.size()) ? table_[static_cast<std::size_t>(n)]
                                                            : log_factorial(n);
    }
    /// ln C(n+k-1, k-1): the count of compositions of n into k non-negative parts.
    double log_compositions(std::int64_t n, std::int64_t k) const {
        return (*this)(n + k - 1) - (*this)(n) - (*this)(k - 1);
    }
    const double* data() const { return table_.data(); }
    std::int64_t size() const { return static_cast<std::int64_t>(table_.size()); }

private:
    std::vector<double> table_;
};

/// ln B(n, k) for a fixed n and every k in [1, max_k]. When max_k >= n every
/// k is answered (B(n, k) = Bell(n) for k >= n); otherwise k > max_k throws
/// std::out_of_range.
class PartitionCountTable {
public:
    PartitionCountTable() = default;
    PartitionCountTable(std::int64_t n, std::int64_t max_k);

    double operator()(std::int64_t k) const;
    std::int64_t n() const { return n_; }

private:
    std::int64_t n_ = 0;
    std::vector<double> log_b_;  // index k-1
};

}  // namespace coclust
