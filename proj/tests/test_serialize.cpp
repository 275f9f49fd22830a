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

#include "doctest.h"

#include "coclust/criterion.hpp"
#include "coclust/error.hpp"
#include "coclust/serialize.hpp"
#include "coclust/synth.hpp"

#include "json.hpp"

using namespace coclust;

namespace {

struct Case {
    EventCorpus corpus;
    CountMatrix matrix;
    FitResult fit;
};

Case fitted(EventCorpus corpus, ModelKind kind) {
    Case c{std::move(corpus), {}, {}};
    c.matrix = kind == ModelKind::spatial ? CountMatrix::spatial(c.corpus) : CountMatrix::temporal(c.corpus);
    c.fit = fit(c.matrix, {});
    return c;
}

}  // namespace

TEST_CASE("model documents round trip") {
    for (const Case& c : {fitted(synth::planted_blocks({.sources = 30, .destinations = 20, .calls = 2000}),
                                 ModelKind::spatial),
                          fitted(synth::seasonal({.sources = 10, .days = 21, .calls = 2000}), ModelKind::temporal)}) {
        const std::string text = model_json(c.fit, c.matrix, c.corpus);
        const auto loaded = parse_model_json(text, c.matrix, c.corpus);
        CHECK(loaded.model == c.fit.model);
        CHECK(loaded.cost == c.fit.cost);
        CHECK(loaded.null_cost == c.fit.null_cost);
        CHECK(loaded.restart_costs == c.fit.restart_costs);
        CHECK(loaded.corpus_digest == c.corpus.digest());
        CHECK(model_json(to_fit_result(loaded), c.matrix, c.corpus).size() <= text.size());

        const auto doc = nlohmann::json::parse(text);
        CHECK(doc["format"] == "coclust-model");
        CHECK(doc["version"] == kModelFormatVersion);
        CHECK(doc["calls"] == c.corpus.total());
        std::int64_t sum = 0;
        for (const auto& row : doc["blocks"])
            for (const auto& v : row) sum += v.get<std::int64_t>();
        CHECK(sum == c.corpus.total());
        CHECK(doc["source_clusters"].size() == static_cast<std::size_t>(c.fit.model.row_cluster_count()));
    }
}

TEST_CASE("segments carry their day range") {
    const Case c = fitted(synth::two_regime(), ModelKind::temporal);
    const auto doc = nlohmann::json::parse(model_json(c.fit, c.matrix, c.corpus));
    REQUIRE(doc["segments"].size() == 2);
    CHECK(doc["segments"][0]["first_day"] == "1");
    CHECK(doc["segments"][0]["last_day"] == "10");
    CHECK(doc["segments"][1]["first_day"] == "11");
    CHECK(doc["segments"][1]["last_day"] == "20");
}

TEST_CASE("loading rejects foreign or malformed documents") {
    const Case c = fitted(synth::two_block(), ModelKind::spatial);
    const std::string text = model_json(c.fit, c.matrix, c.corpus);

    const auto other = synth::two_block(26);
    const auto other_matrix = CountMatrix::spatial(other);
    CHECK_THROWS_WITH_AS(parse_model_json(text, other_matrix, other), doctest::Contains("digest mismatch"), InputError);

    auto doc = nlohmann::json::parse(text);
    doc["version"] = 99;
    CHECK_THROWS_AS(parse_model_json(doc.dump(), c.matrix, c.corpus), InputError);
    doc = nlohmann::json::parse(text);
    doc["source_clusters"][0]["members"].push_back("s4");
    CHECK_THROWS_AS(parse_model_json(doc.dump(), c.matrix, c.corpus), InputError);
    doc = nlohmann::json::parse(text);
    doc.erase("cost");
    CHECK_THROWS_AS(parse_model_json(doc.dump(), c.matrix, c.corpus), InputError);
    CHECK_THROWS_AS(parse_model_json("{not json", c.matrix, c.corpus), InputError);

    const auto temporal = CountMatrix::temporal(synth::two_regime());
    CHECK_THROWS_AS(parse_model_json(text, temporal, synth::two_regime()), InputError);
}

TEST_CASE("dendrogram documents round trip") {
    const Case c = fitted(synth::planted_blocks({.sources = 40, .destinations = 30, .calls = 3000, .seed = 2}),
                          ModelKind::spatial);
    const auto d = coarsen(c.fit, c.matrix);
    const auto loaded = parse_model_json(model_json(c.fit, c.matrix, c.corpus), c.matrix, c.corpus);
    const auto back = parse_dendrogram_json(dendrogram_json(d, c.corpus), loaded);
    REQUIRE(back.steps.size() == d.steps.size());
    CHECK(back.best_cost == d.best_cost);
    CHECK(back.null_cost == d.null_cost);
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        CHECK(back.steps[i].axis == d.steps[i].axis);
        CHECK(back.steps[i].a == d.steps[i].a);
        CHECK(back.steps[i].b == d.steps[i].b);
        CHECK(back.steps[i].cost == d.steps[i].cost);
        CHECK(back.steps[i].tau == d.steps[i].tau);
    }
    CHECK(back.replay(back.levels() - 1).is_null());
}

TEST_CASE("curve CSV") {
    const Case c = fitted(synth::two_block(), ModelKind::spatial);
    const auto d = coarsen(c.fit, c.matrix);
    const std::string csv = curve_csv(informativity_curve(d));
    CHECK(csv.rfind("clusters,tau,cost\n4,1,", 0) == 0);
    const auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
    CHECK(last.rfind("1,0,", 0) == 0);
}
