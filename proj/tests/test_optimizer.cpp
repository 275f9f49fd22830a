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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"

#include "coclust/criterion.hpp"
#include "coclust/error.hpp"
#include "coclust/optimizer.hpp"
#include "coclust/synth.hpp"

using namespace coclust;
using testing_helpers::as_int;

TEST_CASE("trivial corpora fit the null model at cost 0") {
    CorpusBuilder b(true, true);
    b.add("s1", "d1", "1", 7);
    const auto c = std::move(b).build();
    const auto s = fit_spatial(c, {});
    CHECK(s.model.is_null());
    CHECK(std::abs(s.cost) < 1e-12);
    // One source on one day still pays for the total and for the order of
    // the calls: ln m + ln m!.
    const auto t = fit_temporal(c, {});
    CHECK(t.model.is_null());
    CHECK(std::abs(t.cost - (std::log(7.0) + std::log(5040.0))) < 1e-9);
    CorpusBuilder single(false, true);
    single.add("s1", "", "1", 1);
    CHECK(std::abs(fit_temporal(std::move(single).build(), {}).cost) < 1e-12);
}

TEST_CASE("planted two-block corpus is recovered on every seed") {
    const auto c = synth::two_block();
    const auto best = oracle::exhaustive(oracle::dense(CountMatrix::spatial(c)), false);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        OptimizerConfig cfg;
        cfg.seed = seed;
        const auto r = fit_spatial(c, cfg);
        CHECK(oracle::adjusted_rand(as_int(r.model.row_partition()), {0, 0, 1, 1}) == 1.0);
        CHECK(oracle::adjusted_rand(as_int(r.model.col_partition()), {0, 0, 1, 1}) == 1.0);
        CHECK(std::abs(r.cost - best.cost) < 1e-9);
    }
}

TEST_CASE("fitted spatial cost equals the exhaustive minimum on small corpora") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = testing_helpers::random_matrix(rng, ModelKind::spatial, 1 + static_cast<int>(rng() % 5),
                                                      1 + static_cast<int>(rng() % 5), 3 + static_cast<int>(rng() % 150));
        const auto best = oracle::exhaustive(oracle::dense(m), false);
        OptimizerConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto r = fit(m, cfg);
        CAPTURE(trial);
        CHECK(std::abs(r.cost - best.cost) < 1e-9);
        CHECK(std::abs(r.cost - spatial_cost(r.model, m)) < 1e-9);
    }
}

TEST_CASE("fitted temporal cost equals the exhaustive minimum on small corpora") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = testing_helpers::random_matrix(rng, ModelKind::temporal, 1 + static_cast<int>(rng() % 4),
                                                      1 + static_cast<int>(rng() % 6), 3 + static_cast<int>(rng() % 150));
        const auto best = oracle::exhaustive(oracle::dense(m), true);
        OptimizerConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto r = fit(m, cfg);
        CAPTURE(trial);
        CHECK(std::abs(r.cost - best.cost) < 1e-9);
        CHECK(std::abs(r.cost - temporal_cost(r.model, m)) < 1e-9);
    }
}

TEST_CASE("uniform noise fits the null model") {
    int null_runs = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = synth::uniform(10, 10, 200, seed);
        const auto m = CountMatrix::spatial(c);
        OptimizerConfig cfg;
        cfg.seed = seed;
        const auto r = fit(m, cfg);
        CHECK(r.cost <= r.null_cost + 1e-9);
        if (r.model.is_null()) {
            ++null_runs;
            // No single-source split off the null model does better.
            const Criterion crit(m);
            const auto null = CoclusterModel::null_model(m);
            for (std::int32_t e = 0; e < m.rows(); ++e) {
                std::vector<std::int32_t> rows(static_cast<std::size_t>(m.rows()), 0);
                rows[static_cast<std::size_t>(e)] = 1;
                const auto split = CoclusterModel::from_partition(m, rows, null.col_partition());
                CHECK(crit.cost(split) >= r.cost);
            }
        }
    }
    CHECK(null_runs >= 18);
}

TEST_CASE("two-regime corpus splits at the regime change") {
    const auto c = synth::two_regime();
    const auto m = CountMatrix::temporal(c);
    const auto r = fit(m, {});
    REQUIRE(r.model.row_cluster_count() == 2);
    REQUIRE(r.model.col_cluster_count() == 2);
    const auto& seg = r.model.col_partition();
    for (std::int32_t t = 0; t < m.cols(); ++t) {
        const std::string day = c.day_label(m.col_entities()[static_cast<std::size_t>(t)]);
        CHECK(seg[static_cast<std::size_t>(t)] == (std::stoi(day) <= 10 ? 0 : 1));
    }

    // Brute force over source partitions x segmentations, with the days
    // indexed the same way.
    const auto best = oracle::exhaustive(oracle::dense(m), true);
    CHECK(std::abs(r.cost - best.cost) < 1e-9);
}

TEST_CASE("constant-rate corpus keeps a single segment") {
    const auto c = synth::constant_rate(5, 12, 3000, 9);
    const auto m = CountMatrix::temporal(c);
    const auto r = fit(m, {});
    CHECK(r.model.col_cluster_count() == 1);
    const Criterion crit(m);
    for (std::int32_t cut = 1; cut < m.cols(); ++cut) {
        std::vector<std::int32_t> cols(static_cast<std::size_t>(m.cols()), 0);
        for (std::int32_t t = cut; t < m.cols(); ++t) cols[static_cast<std::size_t>(t)] = 1;
        CHECK(crit.cost(CoclusterModel::from_partition(m, r.model.row_partition(), cols)) > r.cost);
    }
}

TEST_CASE("precluster structure") {
    const auto c = synth::planted_blocks({.sources = 1000, .destinations = 300, .calls = 20000, .seed = 4});
    const auto m = CountMatrix::spatial(c);
    for (std::uint64_t seed : {0u, 1u, 7u}) {
        const auto p = precluster(m, Axis::sources, 100, seed);
        REQUIRE(p.size() == static_cast<std::size_t>(m.rows()));
        const std::set<std::int32_t> ids(p.begin(), p.end());
        CHECK(ids.size() <= 100);
        CHECK(*ids.begin() == 0);
        CHECK(*ids.rbegin() == static_cast<std::int32_t>(ids.size()) - 1);
        CHECK(precluster(m, Axis::sources, 100, seed) == p);
    }
    const auto id = precluster(m, Axis::destinations, m.cols(), 0);
    for (std::int32_t j = 0; j < m.cols(); ++j) CHECK(id[static_cast<std::size_t>(j)] == j);
    const auto one = precluster(m, Axis::sources, 1, 0);
    CHECK(std::all_of(one.begin(), one.end(), [](std::int32_t v) { return v == 0; }));

    const auto t = CountMatrix::temporal(synth::seasonal({.days = 56}));
    const auto seg = precluster(t, Axis::segments, 8, 0);
    CHECK(std::is_sorted(seg.begin(), seg.end()));
    for (std::size_t i = 1; i < seg.size(); ++i) CHECK(seg[i] - seg[i - 1] <= 1);
    CHECK(seg.back() + 1 <= 8);
}

TEST_CASE("planted blocks survive preclustering at scale") {
    const auto c = synth::planted_blocks({.sources = 300, .destinations = 300, .calls = 30000, .noise = 0.05, .seed = 2});
    OptimizerConfig cfg;
    cfg.max_preclusters = 40;
    const auto r = fit_spatial(c, cfg);
    std::vector<int> truth_rows(300), truth_cols(300);
    for (int e = 0; e < 300; ++e) truth_rows[static_cast<std::size_t>(e)] = truth_cols[static_cast<std::size_t>(e)] = e * 4 / 300;
    CHECK(oracle::adjusted_rand(as_int(r.model.row_partition()), truth_rows) == doctest::Approx(1.0));
    CHECK(oracle::adjusted_rand(as_int(r.model.col_partition()), truth_cols) == doctest::Approx(1.0));
}

TEST_CASE("fits are deterministic and thread-count independent") {
    const auto c = synth::seasonal({.sources = 30, .destinations = 8, .days = 28, .calls = 3000, .seed = 5});
    OptimizerConfig cfg;
    cfg.seed = 17;
    const auto a = fit_temporal(c, cfg);
    const auto b = fit_temporal(c, cfg);
    cfg.threads = 4;
    const auto d = fit_temporal(c, cfg);
    CHECK(a.model == b.model);
    CHECK(a.model == d.model);
    CHECK(a.cost == b.cost);
    CHECK(a.cost == d.cost);
    CHECK(a.restart_costs == d.restart_costs);
    REQUIRE(a.trace.size() == d.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].cost == d.trace[i].cost);
}

TEST_CASE("trace is non-increasing within each restart and ends at the result") {
    const auto c = synth::planted_blocks({.sources = 80, .destinations = 60, .calls = 5000, .seed = 8});
    std::int64_t events = 0;
    OptimizerConfig cfg;
    cfg.progress = [&](const ProgressEvent&) { ++events; };
    const auto r = fit_spatial(c, cfg);
    CHECK(events > 0);
    REQUIRE(!r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        if (r.trace[i].restart == r.trace[i - 1].restart) CHECK(r.trace[i].cost <= r.trace[i - 1].cost + 1e-9);
    CHECK(r.restart_costs.size() == 4);
    CHECK(std::abs(r.cost - *std::min_element(r.restart_costs.begin(), r.restart_costs.end())) < 1e-9);
    CHECK(r.cost <= r.null_cost + 1e-9);
}

TEST_CASE("configuration bounds") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.effective_max_preclusters(100) == 64);
    CHECK(cfg.effective_max_preclusters(1'000'000) == 1000);
    cfg.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.restarts = 1;
    cfg.post_opt_passes = -1;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.post_opt_passes = 0;
    cfg.max_preclusters = -3;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.max_preclusters = 0;
    cfg.cost_tolerance = -1;
    CHECK_THROWS_AS(cfg.validate(), Error);

    CorpusBuilder b(true, false);
    b.add("a", "b", "", 1);
    CHECK_THROWS_AS(fit_temporal(std::move(b).build(), {}), InputError);
}

TEST_CASE("disabling moves still returns a model no worse than null") {
    const auto c = synth::uniform(12, 9, 500, 3);
    OptimizerConfig cfg;
    cfg.post_opt_passes = 0;
    cfg.restarts = 2;
    const auto r = fit_spatial(c, cfg);
    CHECK(r.cost <= r.null_cost + 1e-9);
    CHECK(r.restart_costs.size() == 2);
}
