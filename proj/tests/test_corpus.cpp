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
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "doctest.h"

#include "coclust/corpus.hpp"
#include "coclust/count_matrix.hpp"
#include "coclust/error.hpp"
#include "coclust/synth.hpp"

using namespace coclust;

namespace {

std::string error_of(std::string_view text, const CsvSchema& schema = {}) {
    try {
        ingest_csv_text(text, schema);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

std::map<std::tuple<std::string, std::string, std::string>, std::int64_t> multiset(const EventCorpus& c) {
    std::map<std::tuple<std::string, std::string, std::string>, std::int64_t> out;
    for (const Cell& cell : c.cells())
        out[{c.sources().label(cell.source), c.has_destinations() ? c.destinations().label(cell.destination) : "",
             c.has_time() ? c.day_label(cell.time) : ""}] += cell.count;
    return out;
}

}  // namespace

TEST_CASE("duplicate events are aggregated") {
    const auto c = ingest_csv_text("source,destination,date\na,b,1\na,b,1\nb,a,2\n", {});
    CHECK(c.total() == 3);
    CHECK(c.cells().size() == 2);
    CHECK(c.sources().size() == 2);
    CHECK(c.destinations().size() == 2);
    CHECK(c.days().size() == 2);
    CHECK(c.cells()[0].count == 2);
    CHECK(c.source_marginals() == std::vector<std::int64_t>{2, 1});
    CHECK(c.time_format() == TimeFormat::day_index);
}

TEST_CASE("sources and destinations live in separate index spaces") {
    const auto c = ingest_csv_text("source,destination,date\nx,y,1\ny,x,1\n", {});
    CHECK(c.sources().labels() == std::vector<std::string>{"x", "y"});
    CHECK(c.destinations().labels() == std::vector<std::string>{"y", "x"});
}

TEST_CASE("an empty input is rejected") {
    CHECK(error_of("") == "empty corpus");
    CHECK(error_of("source,destination,date\n") == "empty corpus");
    CHECK(error_of("source,destination,date\n\n  \n") == "empty corpus");
}

TEST_CASE("malformed lines report their line number") {
    CHECK(error_of("source,destination,date\na,b,1\na,b\n").rfind("line 3:", 0) == 0);
    CHECK(error_of("source,destination,date\na,b,yesterday\n").rfind("line 2:", 0) == 0);
    CHECK(error_of("source,destination,date\na,b,1\na,b,2024-01-01\n").find("mixed timestamp") != std::string::npos);
    CsvSchema counted;
    counted.count_column = "n";
    CHECK(error_of("source,destination,date,n\na,b,1,0\n", counted) == "line 2: count must be positive");
    CHECK(error_of("source,destination,date,n\na,b,1,x\n", counted).rfind("line 2: bad count", 0) == 0);
    CHECK(error_of("who,destination,date\na,b,1\n").find("missing column 'source'") != std::string::npos);
    CHECK(error_of("source,destination,date\n\"a,b,1\n").rfind("line 2:", 0) == 0);
}

TEST_CASE("count column and custom schema") {
    CsvSchema s;
    s.source_column = "from";
    s.destination_column = "to";
    s.time_column = "";
    s.count_column = "calls";
    s.separator = ';';
    const auto c = ingest_csv_text("from;to;calls\n\"p;q\";r;5\np;r;2\n\"p;q\";r;1\n", s);
    CHECK(c.total() == 8);
    CHECK(!c.has_time());
    CHECK(c.sources().label(0) == "p;q");
    CHECK(c.cells()[0].count == 6);
}

TEST_CASE("ISO dates and day labels") {
    const auto c = ingest_csv_text("source,destination,date\na,b,2024-02-28\na,b,2024-03-01\n", {});
    CHECK(c.time_format() == TimeFormat::iso_date);
    CHECK(c.days() == std::vector<std::int64_t>{0, 2});
    CHECK(c.day_label(0) == "2024-02-28");
    CHECK(c.day_label(1) == "2024-03-01");
}

TEST_CASE("ignored identifiers drop the whole event") {
    CsvSchema s;
    s.ignored_ids = {"switch"};
    const auto c = ingest_csv_text("source,destination,date\na,b,1\nswitch,b,1\na,switch,2\n", s);
    CHECK(c.total() == 1);
    CHECK(c.sources().size() == 1);
    CHECK(c.destinations().size() == 1);
    CHECK(c.days().size() == 1);
    CHECK(error_of("source,destination,date\nswitch,b,1\n", s) == "empty corpus");
}

TEST_CASE("projections preserve totals and marginals") {
    const auto c = synth::seasonal({.sources = 6, .destinations = 3, .days = 14, .calls = 400, .seed = 3});
    const auto sp = project_spatial(c);
    const auto tp = project_temporal(c);
    CHECK(sp.total() == c.total());
    CHECK(tp.total() == c.total());
    CHECK(sp.source_marginals() == c.source_marginals());
    CHECK(sp.destination_marginals() == c.destination_marginals());
    CHECK(tp.time_marginals() == c.time_marginals());
    CHECK(sp.cells().size() <= c.cells().size());

    const auto sm = CountMatrix::spatial(c);
    const auto tm = CountMatrix::temporal(c);
    CHECK(sm.total() == c.total());
    CHECK(tm.total() == c.total());
    CHECK(sm.rows() == 6);
    CHECK(sm.cols() == 3);
    CHECK(tm.cols() == 14);
    std::int64_t sum = 0;
    for (std::int32_t r = 0; r < tm.rows(); ++r)
        for (const auto& e : tm.row(r)) sum += e.count;
    CHECK(sum == c.total());
}

TEST_CASE("a destination-only corpus has no temporal projection") {
    const auto c = synth::two_block();
    CHECK_THROWS_AS(project_temporal(c), InputError);
    const auto t = synth::two_regime();
    CHECK_THROWS_AS(project_spatial(t), InputError);
    CHECK(CountMatrix::temporal(t).cols() == 20);
}

TEST_CASE("export then ingest reproduces the count multiset") {
    for (const EventCorpus& c :
         {synth::two_block(), synth::two_regime(), synth::seasonal({.sources = 5, .destinations = 4, .days = 9})}) {
        const auto again = ingest_csv_text(export_csv_text(c), export_schema(c));
        CHECK(multiset(again) == multiset(c));
        CHECK(again.digest() == c.digest());
    }
    const auto path = std::filesystem::temp_directory_path() / "coclust_corpus_roundtrip.csv";
    const auto c = synth::uniform(7, 5, 300, 1);
    export_csv(c, path);
    CHECK(ingest_csv(path, export_schema(c)).digest() == c.digest());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(ingest_csv(path, {}), InputError);
}

TEST_CASE("digest ignores input order") {
    const auto a = ingest_csv_text("source,destination,date\na,b,1\nc,d,2\na,b,1\n", {});
    const auto b = ingest_csv_text("source,destination,date\nc,d,2\na,b,1\na,b,1\n", {});
    CHECK(a.digest() == b.digest());
    const auto d = ingest_csv_text("source,destination,date\nc,d,2\na,b,1\n", {});
    CHECK(a.digest() != d.digest());
}

TEST_CASE("split_csv_line handles quotes") {
    CHECK(split_csv_line("a,\"b,c\",\"d\"\"e\"", ',') == std::vector<std::string>{"a", "b,c", "d\"e"});
    CHECK(split_csv_line("", ',') == std::vector<std::string>{""});
    CHECK_THROWS_AS(split_csv_line("\"open", ','), InputError);
}

TEST_CASE("coordinate tables") {
    const auto t = CoordinateTable::parse("id,lat,lon\nd1,48.85,2.35\nd2,-33.9,151.2\n");
    CHECK(t.size() == 2);
    REQUIRE(t.find("d2") != nullptr);
    CHECK(t.find("d2")->longitude == doctest::Approx(151.2));
    CHECK(t.find("zz") == nullptr);
    CHECK_THROWS_AS(CoordinateTable::parse("id,lat,lon\nd1,95,0\n"), InputError);
    CHECK_THROWS_AS(CoordinateTable::parse("id,lat\nd1,5\n"), InputError);
    CHECK_THROWS_AS(CoordinateTable::parse("id,lat,lon\nd1,x,0\n"), InputError);
}

TEST_CASE("builder keeps declared zero-traffic entities") {
    CorpusBuilder b(true, false);
    b.declare_source("quiet");
    b.add("a", "b", "", 3);
    const auto c = std::move(b).build();
    CHECK(c.sources().size() == 2);
    CHECK(c.source_marginals() == std::vector<std::int64_t>{0, 3});
    const auto m = CountMatrix::spatial(c);
    CHECK(m.rows() == 1);
    CHECK(m.row_entities() == std::vector<std::int32_t>{1});
    CHECK_THROWS_AS(CorpusBuilder(true, false).add("a", "b", "", 0), InputError);
    CHECK_THROWS_AS(std::move(CorpusBuilder(false, true)).build(), InputError);
}
