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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "helpers.hpp"
#include "oracle.hpp"

#include "coclust/analysis.hpp"
#include "coclust/commands.hpp"
#include "coclust/criterion.hpp"
#include "coclust/hierarchy.hpp"
#include "coclust/optimizer.hpp"
#include "coclust/serialize.hpp"
#include "coclust/synth.hpp"

using namespace coclust;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

CountMatrix small_random(std::mt19937_64& rng, ModelKind kind, int max_rows, int max_cols) {
    const int ns = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_rows));
    const int nc = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_cols));
    return testing_helpers::random_matrix(rng, kind, ns, nc, 2 + static_cast<int>(rng() % 200));
}

Outcome exactness(ModelKind kind, int max_rows, int max_cols, std::uint64_t suite_seed) {
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(suite_seed);
    int worst = -1;
    double worst_gap = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto m = small_random(rng, kind, max_rows, max_cols);
        const auto best = oracle::exhaustive(oracle::dense(m), kind == ModelKind::temporal);
        OptimizerConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(i);
        const double gap = std::abs(fit(m, cfg).cost - best.cost);
        if (gap > worst_gap) worst_gap = gap, worst = i;
    }
    const double t = seconds_since(start);
    o.require(worst_gap <= 1e-9, "corpus " + std::to_string(worst) + " misses the minimum by " + sci(worst_gap));
    if (kind == ModelKind::spatial) o.require(t < 10.0, "took " + std::to_string(t) + " s");
    if (o.pass) o.detail = "20 corpora, max gap " + sci(worst_gap) + ", " + std::to_string(t) + " s";
    return o;
}

Outcome anchors() {
    Outcome o;
    using testing_helpers::matrix_from_dense;
    const auto one = matrix_from_dense(ModelKind::spatial, {{1}});
    o.require(spatial_cost(CoclusterModel::null_model(one), one) == 0.0, "1x1 cost is not 0");
    const auto two = matrix_from_dense(ModelKind::spatial, {{1}, {1}});
    o.require(std::abs(spatial_cost(CoclusterModel::null_model(two), two) - std::log(12.0)) <= 1e-9, "ln 12 anchor");
    const auto t = matrix_from_dense(ModelKind::temporal, {{2}});
    o.require(std::abs(temporal_cost(CoclusterModel::null_model(t), t) - std::log(4.0)) <= 1e-9, "ln 4 anchor");
    return o;
}

Outcome planted() {
    Outcome o;
    const auto c = synth::two_block();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        OptimizerConfig cfg;
        cfg.seed = seed;
        const auto r = fit_spatial(c, cfg);
        const double ari_s = oracle::adjusted_rand(testing_helpers::as_int(r.model.row_partition()), {0, 0, 1, 1});
        const double ari_d = oracle::adjusted_rand(testing_helpers::as_int(r.model.col_partition()), {0, 0, 1, 1});
        o.require(ari_s == 1.0 && ari_d == 1.0, "seed " + std::to_string(seed) + " ARI " + std::to_string(ari_s) +
                                                    "/" + std::to_string(ari_d));
    }
    const auto regime = synth::two_regime();
    const auto m = CountMatrix::temporal(regime);
    const auto r = fit(m, {});
    bool boundary = r.model.col_cluster_count() == 2;
    for (std::int32_t t = 0; boundary && t < m.cols(); ++t) {
        const int day = std::stoi(regime.day_label(m.col_entities()[static_cast<std::size_t>(t)]));
        boundary = r.model.col_partition()[static_cast<std::size_t>(t)] == (day <= 10 ? 0 : 1);
    }
    o.require(boundary, "two-regime boundary not at day 10/11");
    return o;
}

Outcome null_on_noise() {
    Outcome o;
    int nulls = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizerConfig cfg;
        cfg.seed = seed;
        const auto r = fit_spatial(synth::uniform(10, 10, 200, seed), cfg);
        nulls += r.model.is_null();
        o.require(r.cost <= r.null_cost + 1e-9, "seed " + std::to_string(seed) + " above the null cost");
    }
    o.require(nulls >= 18, std::to_string(nulls) + "/20 null");
    if (o.pass) o.detail = std::to_string(nulls) + "/20 null";
    return o;
}

Outcome deltas() {
    Outcome o;
    std::mt19937_64 rng(1000);
    double worst = 0.0;
    int done = 0;
    while (done < 1000) {
        const auto kind = done % 2 ? ModelKind::temporal : ModelKind::spatial;
        const auto m = testing_helpers::random_matrix(rng, kind, 2 + static_cast<int>(rng() % 12),
                                                      2 + static_cast<int>(rng() % 12), 1 + static_cast<int>(rng() % 2000));
        auto model = testing_helpers::random_model(rng, m);
        const Criterion crit(m);
        const double before = crit.cost(model);
        double predicted = 0.0;
        if (rng() % 2) {
            const Axis axis = rng() % 2 ? Axis::sources : model.column_axis();
            const std::int32_t k = model.cluster_count(axis);
            if (k < 2) continue;
            auto a = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(k));
            std::int32_t b;
            if (axis == Axis::segments) {
                a = std::min(a, k - 2);
                b = a + 1;
            } else {
                b = static_cast<std::int32_t>((a + 1 + rng() % static_cast<std::uint64_t>(k - 1)) % k);
            }
            predicted = crit.merge_delta(model, axis, a, b);
            model.merge(axis, a, b);
        } else {
            const Axis axis = kind == ModelKind::temporal || rng() % 2 ? Axis::sources : Axis::destinations;
            const std::int32_t n = axis == Axis::sources ? m.rows() : m.cols();
            const auto e = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(n));
            const auto t = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(model.cluster_count(axis)));
            predicted = crit.move_delta(model, axis, e, t).delta;
            model.move(m, axis, e, t);
        }
        worst = std::max(worst, std::abs(crit.cost(model) - before - predicted));
        ++done;
    }
    o.require(worst <= 1e-6, "max error " + sci(worst));
    if (o.pass) o.detail = "1000 deltas, max error " + sci(worst);
    return o;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome informativity_endpoints() {
    Outcome o;
    std::vector<std::pair<CountMatrix, FitResult>> cases;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto sp = CountMatrix::spatial(synth::planted_blocks({.sources = 40, .destinations = 40, .calls = 3000,
                                                                    .noise = 0.2, .seed = seed}));
        cases.emplace_back(sp, fit(sp, {}));
        const auto tm = CountMatrix::temporal(synth::seasonal({.sources = 10, .days = 28, .calls = 2000, .seed = seed}));
        cases.emplace_back(tm, fit(tm, {}));
    }
    const auto two = CountMatrix::spatial(synth::two_block());
    cases.emplace_back(two, fit(two, {}));
    for (const auto& [m, r] : cases) {
        const auto d = coarsen(r, m);
        const bool degenerate = d.steps.empty();
        o.require(d.tau_at(0) == (degenerate ? 0.0 : 1.0), "tau(M*) != 1");
        o.require(d.tau_at(d.levels() - 1) == 0.0, "tau(null) != 0");
        const std::string csv = curve_csv(informativity_curve(d));
        const auto first = csv.substr(csv.find('\n') + 1);
        const auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
        if (!degenerate) {
            o.require(first.find(",1,") != std::string::npos, "curve does not start at tau 1");
            o.require(last.rfind("1,0,", 0) == 0, "curve does not end at (1, 0)");
        }
    }
    return o;
}

Outcome mi_properties() {
    Outcome o;
    std::mt19937_64 rng(88);
    double worst_sum = 0.0, worst_growth = 0.0, min_mi = 0.0;
    for (int i = 0; i < 40; ++i) {
        const auto kind = i % 2 ? ModelKind::temporal : ModelKind::spatial;
        const auto m = testing_helpers::random_matrix(rng, kind, 2 + static_cast<int>(rng() % 15),
                                                      2 + static_cast<int>(rng() % 15), 50 + static_cast<int>(rng() % 3000));
        FitResult start;
        start.model = testing_helpers::random_model(rng, m);
        const auto d = coarsen(start, m);
        double prev = INFINITY;
        for (std::size_t level = 0; level < d.levels(); ++level) {
            const auto model = d.replay(level);
            const auto r = mi_contributions(model);
            oracle::Dense blocks(static_cast<std::size_t>(model.row_cluster_count()),
                                 std::vector<std::int64_t>(static_cast<std::size_t>(model.col_cluster_count())));
            double sum = 0.0;
            for (const auto& c : r.cells) {
                blocks[static_cast<std::size_t>(c.row_cluster)][static_cast<std::size_t>(c.col_cluster)] = c.joint_count;
                sum += c.contribution;
            }
            worst_sum = std::max(worst_sum, std::abs(sum - oracle::mutual_information(blocks)));
            min_mi = std::min(min_mi, r.total_mi);
            if (std::isfinite(prev)) worst_growth = std::max(worst_growth, r.total_mi - prev);
            prev = r.total_mi;
        }
    }
    o.require(min_mi >= 0.0, "negative total MI");
    o.require(worst_sum <= 1e-10, "sum mismatch " + sci(worst_sum));
    o.require(worst_growth <= 1e-10, "MI grew by " + sci(worst_growth));
    const auto diag = testing_helpers::matrix_from_dense(ModelKind::spatial, {{2, 0}, {0, 2}});
    o.require(std::abs(mi_contributions(CoclusterModel::finest(diag)).total_mi - std::log(2.0)) <= 1e-12,
              "diagonal oracle");
    return o;
}

long peak_rss_mb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss / 1024;
}

double pipeline_seconds(std::int64_t calls, unsigned threads) {
    const auto corpus = synth::planted_blocks({.sources = 1000, .destinations = 1000, .source_blocks = 8,
                                               .destination_blocks = 8, .calls = calls, .noise = 0.1, .seed = 1});
    const auto start = Clock::now();
    const auto m = CountMatrix::spatial(corpus);
    OptimizerConfig cfg;
    cfg.threads = threads;
    const auto r = fit(m, cfg);
    const auto d = coarsen(r, m, threads);
    const auto cut_model = cut(d, {CutTarget::Kind::tau, 0.75});
    const auto report = mi_contributions(r.model);
    const auto csv = contribution_csv(report) + contribution_csv(mi_contributions(cut_model));
    return csv.empty() ? -1.0 : seconds_since(start);
}

Outcome scale() {
    Outcome o;
    const unsigned threads = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
    const double small = pipeline_seconds(100'000, threads);
    const double large = pipeline_seconds(1'000'000, threads);
    const long mb = peak_rss_mb();
    auto f = [](double m) { return m * std::sqrt(m) * std::log(m); };
    const double predicted = f(1e6) / f(1e5);
    const double observed = large / small;
    o.require(large < 300.0, "1e6 calls took " + std::to_string(large) + " s");
    o.require(mb < 2048, "peak memory " + std::to_string(mb) + " MB");
    // The complexity is an upper bound: growth must not exceed 3x the model.
    o.require(observed <= 3.0 * predicted,
              "growth " + std::to_string(observed) + "x vs predicted " + std::to_string(predicted) + "x");
    char buf[200];
    std::snprintf(buf, sizeof buf, "1e5: %.2f s, 1e6: %.2f s, growth %.1fx (model %.1fx), peak %ld MB, %u threads",
                  small, large, observed, predicted, mb, threads);
    o.detail = o.pass ? std::string(buf) : o.detail + " (" + buf + ")";
    return o;
}

Outcome determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "coclust_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream out, err;
    auto run = [&](std::vector<std::string> args) { return run_cli(args, out, err); };
    auto p = [&](const std::string& n) { return (dir / n).string(); };
    o.require(run({"synth", "-g", "seasonal", "--sources", "25", "--destinations", "6", "--days", "35", "--calls", "6000",
                   "--seed", "2", "-o", p("corpus.csv")}) == 0,
              "synth failed");
    o.require(run({"synth", "-g", "planted", "--sources", "120", "--destinations", "90", "--calls", "8000", "--seed", "2",
                   "-o", p("spatial.csv")}) == 0,
              "synth failed");
    std::vector<std::string> files;
    for (const std::string tag : {"a", "b"}) {
        for (const std::string kind : {"spatial", "temporal"}) {
            const std::string in = kind == "spatial" ? p("spatial.csv") : p("corpus.csv");
            const std::string base = tag + "_" + kind;
            o.require(run({"fit", in, "-k", kind, "--seed", "4", "-o", p(base + ".model.json")}) == 0, "fit failed");
            o.require(run({"coarsen", in, "-m", p(base + ".model.json"), "--tau", "0.75", "--dendrogram",
                           p(base + ".dendrogram.json"), "--curve", p(base + ".curve.csv"), "-o", p(base + ".cut.json")}) == 0,
                      "coarsen failed");
            o.require(run({"report", in, "-m", p(base + ".model.json"), "-o", p(base + ".mi.csv")}) == 0, "report failed");
            if (kind == "temporal")
                o.require(run({"report", in, "-m", p(base + ".model.json"), "-f", "calendar", "-o",
                               p(base + ".calendar.csv")}) == 0,
                          "calendar failed");
        }
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("a_", 0) != 0 || name.find("manifest") != std::string::npos) continue;
        const std::string a = read_file(entry.path());
        const std::string b = read_file(dir / ("b_" + name.substr(2)));
        o.require(!a.empty() && a == b, name + " differs between runs");
        ++compared;
    }
    o.require(compared == 11, "expected 11 artifacts, found " + std::to_string(compared));
    if (o.pass) o.detail = std::to_string(compared) + " artifacts byte-identical";
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const bool skip_scale = argc > 1 && std::string(argv[1]) == "--skip-scale";
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "spatial exactness", [] { return exactness(ModelKind::spatial, 4, 4, 101); }},
        {2, "temporal exactness", [] { return exactness(ModelKind::temporal, 4, 6, 202); }},
        {3, "closed-form anchors", anchors},
        {4, "planted recovery", planted},
        {5, "null on noise", null_on_noise},
        {6, "delta consistency", deltas},
        {7, "informativity endpoints", informativity_endpoints},
        {8, "mutual information properties", mi_properties},
        {9, "scale smoke test", scale},
        {10, "determinism", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (c.id == 9 && skip_scale) {
            std::printf("SKIP %2d %s\n", c.id, c.name);
            continue;
        }
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2d %s%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.empty() ? "" : ": ",
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
