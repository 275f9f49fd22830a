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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "coclust/combinatorics.hpp"
#include "coclust/kernels.hpp"

using namespace coclust;

namespace {

struct Fixture {
    LogFactorialTable lf{5000};
    std::mt19937_64 rng{42};

    std::vector<std::int64_t> counts(std::size_t n, std::int64_t max) {
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = (rng() % 3 == 0) ? 0 : static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max));
        return v;
    }
};

double scalar_gain(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, const LogFactorialTable& lf) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += lf(a[i] + b[i]) - lf(a[i]) - lf(b[i]);
    return s;
}

}  // namespace

TEST_CASE("scalar table is always available") {
    CHECK(kernels::supported(kernels::Isa::scalar));
    CHECK(kernels::table(kernels::Isa::scalar).isa == kernels::Isa::scalar);
}

TEST_CASE("every supported variant agrees with the scalar reference") {
    Fixture f;
    const auto& ref = kernels::table(kernels::Isa::scalar);
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
        if (!kernels::supported(isa)) continue;
        CAPTURE(kernels::name(isa));
        const auto& k = kernels::table(isa);
        // Lengths straddle the vector width and its remainders.
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
            CAPTURE(n);
            const auto a = f.counts(n, 2000);
            const auto b = f.counts(n, 2000);
            const double expect = scalar_gain(a, b, f.lf);
            CHECK(k.merge_gain(a.data(), b.data(), n, f.lf.data()) ==
                  doctest::Approx(expect).epsilon(1e-12));
            CHECK(k.sum_log_factorial(a.data(), n, f.lf.data()) ==
                  doctest::Approx(ref.sum_log_factorial(a.data(), n, f.lf.data())).epsilon(1e-12));

            std::vector<double> out(n), out_ref(n);
            k.pair_gain_update(13, 250, a.data(), b.data(), n, f.lf.data(), out.data());
            ref.pair_gain_update(13, 250, a.data(), b.data(), n, f.lf.data(), out_ref.data());
            CHECK(out == out_ref);  // element-wise, same operation order

            std::vector<double> v(n);
            for (auto& x : v) x = static_cast<double>(f.rng() % 1000) - 500.0;
            CHECK(k.min_value(v.data(), n) == ref.min_value(v.data(), n));
            for (double t : {-1000.0, -250.0, 0.0, 499.0})
                CHECK(k.first_at_most(v.data(), n, t) == ref.first_at_most(v.data(), n, t));
        }
    }
}

TEST_CASE("min_value and first_at_most handle infinities") {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> v(9, inf);
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
        if (!kernels::supported(isa)) continue;
        const auto& k = kernels::table(isa);
        CHECK(k.min_value(v.data(), v.size()) == inf);
        CHECK(k.first_at_most(v.data(), v.size(), 0.0) == v.size());
        v[6] = -2.5;
        CHECK(k.min_value(v.data(), v.size()) == -2.5);
        CHECK(k.first_at_most(v.data(), v.size(), -2.5) == 6);
        v[6] = inf;
        CHECK(k.min_value(v.data(), 0) == inf);
    }
}

TEST_CASE("pair_gain_update matches its definition") {
    Fixture f;
    auto g = [&](std::int64_t x, std::int64_t y) { return f.lf(x + y) - f.lf(x) - f.lf(y); };
    const auto a = f.counts(37, 300);
    const auto b = f.counts(37, 300);
    std::vector<double> out(37);
    kernels::active().pair_gain_update(9, 40, a.data(), b.data(), a.size(), f.lf.data(), out.data());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(out[i] == doctest::Approx(g(9 + 40, a[i] + b[i]) - g(9, a[i]) - g(40, b[i])).epsilon(1e-12));
}

TEST_CASE("unsupported isa is rejected by name") {
    CHECK(std::string(kernels::name(kernels::Isa::avx2)) == "avx2");
    if (!kernels::supported(kernels::Isa::avx2)) CHECK_THROWS(kernels::table(kernels::Isa::avx2));
}
