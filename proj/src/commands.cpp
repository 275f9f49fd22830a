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

#include "coclust/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "coclust/analysis.hpp"
#include "coclust/criterion.hpp"
#include "coclust/error.hpp"
#include "coclust/hierarchy.hpp"
#include "coclust/kernels.hpp"
#include "coclust/optimizer.hpp"
#include "coclust/serialize.hpp"
#include "coclust/synth.hpp"

namespace coclust {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out) throw Error("error while writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Corpus input

struct SchemaFlags {
    std::string source = "source";
    std::string destination;  // empty: "destination" when present; "-": none
    std::string time;         // empty: "date" when present; "-": none
    std::string count;        // empty: "count" when present; "-": none
    std::string separator = ",";
    std::vector<std::string> ignore;
    std::string ignore_file;
};

void add_schema_flags(CLI::App* cmd, SchemaFlags& s) {
    cmd->add_option("--source-column", s.source, "Source column name");
    cmd->add_option("--destination-column", s.destination,
                    "Destination column (default: 'destination' when present; '-' for none)");
    cmd->add_option("--time-column", s.time, "Date column (default: 'date' when present; '-' for none)");
    cmd->add_option("--count-column", s.count, "Count column (default: 'count' when present; '-' for none)");
    cmd->add_option("--separator", s.separator, "Field separator")->check([](const std::string& v) {
        return v.size() == 1 ? std::string{} : std::string("separator must be one character");
    });
    cmd->add_option("--ignore", s.ignore, "Entity id dropped at ingestion (repeatable)");
    cmd->add_option("--ignore-file", s.ignore_file, "File with one ignored entity id per line");
}

EventCorpus load_corpus(const std::string& path, const SchemaFlags& flags) {
    const std::string text = read_file(path);
    CsvSchema schema;
    schema.separator = flags.separator.empty() ? ',' : flags.separator[0];
    schema.source_column = flags.source;

    std::vector<std::string> header;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos) break;
        if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        header = split_csv_line(line, schema.separator);
        for (auto& h : header) {
            const auto a = h.find_first_not_of(" \t");
            const auto b = h.find_last_not_of(" \t");
            h = a == std::string::npos ? std::string{} : h.substr(a, b - a + 1);
        }
    }
    auto resolve = [&](const std::string& flag, const char* fallback) -> std::string {
        if (flag == "-") return {};
        if (!flag.empty()) return flag;
        return std::find(header.begin(), header.end(), fallback) != header.end() ? fallback : std::string{};
    };
    schema.destination_column = resolve(flags.destination, "destination");
    schema.time_column = resolve(flags.time, "date");
    schema.count_column = resolve(flags.count, "count");
    for (const auto& id : flags.ignore) schema.ignored_ids.insert(id);
    if (!flags.ignore_file.empty()) {
        std::istringstream in(read_file(flags.ignore_file));
        std::string id;
        while (std::getline(in, id)) {
            if (!id.empty() && id.back() == '\r') id.pop_back();
            if (!id.empty()) schema.ignored_ids.insert(id);
        }
    }
    return ingest_csv_text(text, schema);
}

CountMatrix project(const EventCorpus& corpus, ModelKind kind) {
    if (kind == ModelKind::spatial && !corpus.has_destinations())
        throw InputError("a spatial fit needs a destination column");
    if (kind == ModelKind::temporal && !corpus.has_time()) throw InputError("a temporal fit needs a date column");
    return kind == ModelKind::spatial ? CountMatrix::spatial(corpus) : CountMatrix::temporal(corpus);
}

ModelKind model_kind_of(const std::string& text) {
    try {
        const Json doc = Json::parse(text);
        return parse_model_kind(doc.at("kind").get<std::string>());
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed model document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Manifest

struct Manifest {
    Manifest(std::string name, CLI::App* cmd) : command(std::move(name)), app(cmd) {}

    std::string command;
    CLI::App* app = nullptr;
    std::string digest;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    Clock::time_point started = Clock::now();

    void write(const std::string& path) const {
        Json doc;
        doc["tool"] = "coclust";
        doc["version"] = kVersion;
        doc["command"] = command;
        Json config = Json::object();
        for (const CLI::Option* opt : app->get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "config" || name == "manifest") continue;
            if (opt->count() > 0) {
                const auto& r = opt->results();
                config[name] = r.size() == 1 ? Json(r.front()) : Json(r);
            } else if (!opt->get_default_str().empty()) {
                config[name] = opt->get_default_str();
            }
        }
        doc["config"] = std::move(config);
        if (!digest.empty()) doc["corpus_digest"] = digest;
        doc["inputs"] = inputs;
        doc["outputs"] = outputs;
        doc["simd"] = kernels::name(kernels::active().isa);
        doc["wall_seconds"] = std::chrono::duration<double>(Clock::now() - started).count();
        write_file(path, doc.dump(2) + "\n");
    }
};

std::string manifest_path(const std::string& flag, const std::string& primary_output) {
    return flag.empty() ? primary_output + ".manifest.json" : flag;
}

// ---------------------------------------------------------------------------
// Optimizer flags

struct FitFlags {
    std::string kind = "spatial";
    std::string input;
    std::string output = "model.json";
    std::string manifest;
    bool progress = false;
    OptimizerConfig config;
    SchemaFlags schema;
};

void add_search_flags(CLI::App* cmd, OptimizerConfig& c) {
    cmd->add_option("--seed", c.seed, "Random seed")->envname("COCLUST_SEED");
    cmd->add_option("--threads", c.threads, "Worker threads")->envname("COCLUST_THREADS")->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", c.restarts, "Independent restarts")
        ->envname("COCLUST_RESTARTS")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-preclusters", c.max_preclusters, "Initial cluster cap per axis (0: automatic)")
        ->envname("COCLUST_MAX_PRECLUSTERS")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--post-opt-passes", c.post_opt_passes, "Move sweeps per post-optimization phase")
        ->envname("COCLUST_POST_OPT_PASSES")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tolerance", c.cost_tolerance, "Absolute cost tolerance")
        ->envname("COCLUST_TOLERANCE")
        ->check(CLI::NonNegativeNumber);
}

// ---------------------------------------------------------------------------
// Config file: flat `key = value` lines; a key names a long option of the
// command being run.

std::optional<std::string> config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    if (const char* env = std::getenv("COCLUST_CONFIG"); env && *env) return std::string(env);
    return std::nullopt;
}

void apply_config(CLI::App& app, const std::string& path) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::Error& e) {
        throw InputError("cannot read config '" + path + "': " + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--" || item.inputs.empty()) continue;
        if (!item.parents.empty()) throw InputError("config '" + path + "': sections are not supported");
        bool known = false;
        for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
            CLI::Option* opt = nullptr;
            try {
                opt = sub->get_option("--" + item.name);
            } catch (const CLI::OptionNotFound&) {
                continue;
            }
            known = true;
            std::string value = item.inputs.front();
            for (std::size_t i = 1; i < item.inputs.size(); ++i) value += ' ' + item.inputs[i];
            opt->default_val(value);
        }
        if (!known) throw InputError("config '" + path + "': unknown key '" + item.name + "'");
    }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ingest(const std::string& input, const SchemaFlags& schema, const std::string& output,
               const std::string& manifest_flag, CLI::App* app, std::ostream& out) {
    Manifest manifest{"ingest", app};
    const EventCorpus corpus = load_corpus(input, schema);
    manifest.digest = corpus.digest();
    manifest.inputs = {input};
    if (!output.empty()) {
        export_csv(corpus, output);
        manifest.outputs.push_back(output);
        manifest.write(manifest_path(manifest_flag, output));
    }
    out << "sources " << corpus.sources().size() << "\n"
        << "destinations " << (corpus.has_destinations() ? corpus.destinations().size() : 0) << "\n"
        << "days " << (corpus.has_time() ? corpus.days().size() : 0) << "\n"
        << "calls " << corpus.total() << "\n"
        << "cells " << corpus.cells().size() << "\n"
        << "digest " << corpus.digest() << "\n";
    return 0;
}

int cmd_fit(FitFlags& f, CLI::App* app, std::ostream& out, std::ostream& err) {
    Manifest manifest{"fit", app};
    const ModelKind kind = parse_model_kind(f.kind);
    const EventCorpus corpus = load_corpus(f.input, f.schema);
    const CountMatrix matrix = project(corpus, kind);
    if (f.progress) {
        f.config.progress = [&err](const ProgressEvent& e) {
            err << "restart " << e.restart << " step " << e.step << " cost " << e.cost << " k " << e.row_clusters
                << "x" << e.col_clusters << "\n";
        };
    }
    const FitResult result = fit(matrix, f.config);
    write_file(f.output, model_json(result, matrix, corpus));
    manifest.digest = corpus.digest();
    manifest.inputs = {f.input};
    manifest.outputs = {f.output};
    manifest.write(manifest_path(f.manifest, f.output));
    out << "kind " << to_string(kind) << "\n"
        << "source_clusters " << result.model.row_cluster_count() << "\n"
        << (kind == ModelKind::spatial ? "destination_clusters " : "segments ") << result.model.col_cluster_count()
        << "\n"
        << "cost " << number(result.cost) << "\n"
        << "null_cost " << number(result.null_cost) << "\n";
    return 0;
}

struct CoarsenFlags {
    std::string model;
    std::string input;
    SchemaFlags schema;
    std::optional<double> tau;
    std::optional<std::int64_t> clusters, source_clusters, column_clusters, biclusters;
    std::string dendrogram = "dendrogram.json";
    std::string curve = "curve.csv";
    std::string output = "cut.json";
    std::string manifest;
    unsigned threads = 1;
};

int cmd_coarsen(const CoarsenFlags& f, CLI::App* app, std::ostream& out) {
    Manifest manifest{"coarsen", app};
    const std::string model_text = read_file(f.model);
    const EventCorpus corpus = load_corpus(f.input, f.schema);
    const CountMatrix matrix = project(corpus, model_kind_of(model_text));
    const LoadedModel loaded = parse_model_json(model_text, matrix, corpus);
    const MergeDendrogram d = coarsen(to_fit_result(loaded), matrix, f.threads);

    CutTarget target{CutTarget::Kind::tau, 1.0};
    int chosen = 0;
    if (f.tau) target = {CutTarget::Kind::tau, *f.tau}, ++chosen;
    if (f.clusters) target = {CutTarget::Kind::each_axis, static_cast<double>(*f.clusters)}, ++chosen;
    if (f.source_clusters) target = {CutTarget::Kind::sources, static_cast<double>(*f.source_clusters)}, ++chosen;
    if (f.column_clusters) target = {CutTarget::Kind::columns, static_cast<double>(*f.column_clusters)}, ++chosen;
    if (f.biclusters) target = {CutTarget::Kind::biclusters, static_cast<double>(*f.biclusters)}, ++chosen;
    if (chosen > 1) throw Error("give at most one of --tau, --clusters, --source-clusters, --column-clusters, --biclusters");

    const std::size_t level = cut_level(d, target);
    FitResult cut_result;
    cut_result.model = d.replay(level);
    const Criterion criterion(matrix);
    cut_result.cost = criterion.cost(cut_result.model);
    cut_result.null_cost = d.null_cost;

    write_file(f.dendrogram, dendrogram_json(d, corpus));
    write_file(f.curve, curve_csv(informativity_curve(d)));
    write_file(f.output, model_json(cut_result, matrix, corpus));
    manifest.digest = corpus.digest();
    manifest.inputs = {f.model, f.input};
    manifest.outputs = {f.dendrogram, f.curve, f.output};
    manifest.write(manifest_path(f.manifest, f.output));
    out << "steps " << d.steps.size() << "\n"
        << "cut_level " << level << "\n"
        << "source_clusters " << cut_result.model.row_cluster_count() << "\n"
        << "column_clusters " << cut_result.model.col_cluster_count() << "\n"
        << "tau " << number(d.tau_at(level)) << "\n";
    return 0;
}

struct ReportFlags {
    std::string model;
    std::string input;
    SchemaFlags schema;
    std::string format = "mi";
    std::int32_t focus = 0;
    std::string coords;
    double epsilon = 0.05;
    bool bits = false;
    std::string output;
    std::string manifest;
};

int cmd_report(const ReportFlags& f, CLI::App* app, std::ostream& out) {
    Manifest manifest{"report", app};
    const std::string model_text = read_file(f.model);
    const EventCorpus corpus = load_corpus(f.input, f.schema);
    const CountMatrix matrix = project(corpus, model_kind_of(model_text));
    const LoadedModel loaded = parse_model_json(model_text, matrix, corpus);
    const ContributionReport report = mi_contributions(loaded.model, f.epsilon, f.bits);
    manifest.inputs = {f.model, f.input};

    std::string output = f.output;
    if (f.format == "mi") {
        if (output.empty()) output = "contributions.csv";
        write_file(output, contribution_csv(report));
        out << "total_mi " << number(report.total_mi) << (f.bits ? " bits" : " nats") << "\n";
    } else if (f.format == "geojson") {
        if (f.coords.empty()) throw InputError("--format geojson needs --coords");
        const CoordinateTable coords = CoordinateTable::load(f.coords);
        const EntityReport entities = entity_report(report, loaded.model, matrix, corpus, coords, f.focus);
        if (output.empty()) output = "entities.geojson";
        write_file(output, entity_geojson(entities));
        manifest.inputs.push_back(f.coords);
        out << "features " << entities.entities.size() << "\n";
        if (entities.missing_coordinates > 0)
            out << "warning: " << entities.missing_coordinates << " entities without coordinates skipped\n";
    } else if (f.format == "calendar") {
        const CalendarReport calendar = calendar_report(report, loaded.model, matrix, corpus);
        if (output.empty()) output = "calendar.csv";
        write_file(output, calendar_csv(calendar));
        out << "days " << calendar.days.size() << "\n";
    } else {
        throw Error("unknown report format '" + f.format + "'");
    }
    manifest.digest = corpus.digest();
    manifest.outputs = {output};
    manifest.write(manifest_path(f.manifest, output));
    return 0;
}

struct SynthFlags {
    std::string generator = "planted";
    std::string output = "synthetic.csv";
    std::int32_t sources = 100;
    std::int32_t destinations = 100;
    std::int32_t blocks = 4;
    std::int64_t calls = 10000;
    double noise = 0.1;
    std::int32_t days = 56;
    std::int64_t calls_per_pair = 25;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
    EventCorpus corpus;
    if (f.generator == "planted") {
        synth::PlantedBlocks spec;
        spec.sources = f.sources;
        spec.destinations = f.destinations;
        spec.source_blocks = f.blocks;
        spec.destination_blocks = f.blocks;
        spec.calls = f.calls;
        spec.noise = f.noise;
        spec.seed = f.seed;
        corpus = synth::planted_blocks(spec);
    } else if (f.generator == "two-block") {
        corpus = synth::two_block(f.calls_per_pair);
    } else if (f.generator == "uniform") {
        corpus = synth::uniform(f.sources, f.destinations, f.calls, f.seed);
    } else if (f.generator == "two-regime") {
        corpus = synth::two_regime();
    } else if (f.generator == "seasonal") {
        synth::Seasonal spec;
        spec.sources = f.sources;
        spec.destinations = f.destinations;
        spec.days = f.days;
        spec.calls = f.calls;
        spec.seed = f.seed;
        corpus = synth::seasonal(spec);
    } else if (f.generator == "constant") {
        corpus = synth::constant_rate(f.sources, f.days, f.calls, f.seed);
    } else {
        throw Error("unknown generator '" + f.generator + "'");
    }
    export_csv(corpus, f.output);
    out << "calls " << corpus.total() << "\n"
        << "digest " << corpus.digest() << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MDL co-clustering of event logs", "coclust"};
    app.set_version_flag("--version", std::string("coclust ") + kVersion);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    std::string config_file;
    app.add_option("--config", config_file, "Flat key = value file of option defaults")->envname("COCLUST_CONFIG");

    // ingest
    std::string ingest_input, ingest_output, ingest_manifest;
    SchemaFlags ingest_schema;
    CLI::App* ingest = app.add_subcommand("ingest", "Validate a CSV and write it back normalized");
    ingest->add_option("input", ingest_input, "Input CSV")->required();
    ingest->add_option("-o,--output", ingest_output, "Normalized CSV");
    ingest->add_option("--manifest", ingest_manifest, "Manifest path (default: <output>.manifest.json)");
    add_schema_flags(ingest, ingest_schema);

    // fit
    FitFlags fit_flags;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a spatial or temporal co-clustering");
    fit_cmd->add_option("input", fit_flags.input, "Input CSV")->required();
    fit_cmd->add_option("-k,--kind", fit_flags.kind, "spatial or temporal")
        ->check(CLI::IsMember({"spatial", "temporal"}));
    fit_cmd->add_option("-o,--output", fit_flags.output, "Model JSON");
    fit_cmd->add_option("--manifest", fit_flags.manifest, "Manifest path (default: <output>.manifest.json)");
    fit_cmd->add_flag("--progress", fit_flags.progress, "Print search progress to stderr");
    add_search_flags(fit_cmd, fit_flags.config);
    add_schema_flags(fit_cmd, fit_flags.schema);

    // coarsen
    CoarsenFlags coarsen_flags;
    CLI::App* coarsen_cmd = app.add_subcommand("coarsen", "Build the merge dendrogram and cut it");
    coarsen_cmd->add_option("-m,--model", coarsen_flags.model, "Model JSON")->required();
    coarsen_cmd->add_option("input", coarsen_flags.input, "Corpus CSV the model was fitted on")->required();
    coarsen_cmd->add_option("--tau", coarsen_flags.tau, "Coarsest model with informativity >= tau");
    coarsen_cmd->add_option("--clusters", coarsen_flags.clusters, "At most this many clusters on each axis");
    coarsen_cmd->add_option("--source-clusters", coarsen_flags.source_clusters, "Exact source cluster count");
    coarsen_cmd->add_option("--column-clusters", coarsen_flags.column_clusters,
                            "Exact destination cluster / segment count");
    coarsen_cmd->add_option("--biclusters", coarsen_flags.biclusters, "Exact k_S * k_C");
    coarsen_cmd->add_option("--dendrogram", coarsen_flags.dendrogram, "Dendrogram JSON");
    coarsen_cmd->add_option("--curve", coarsen_flags.curve, "Informativity curve CSV");
    coarsen_cmd->add_option("-o,--output", coarsen_flags.output, "Cut model JSON");
    coarsen_cmd->add_option("--manifest", coarsen_flags.manifest, "Manifest path (default: <output>.manifest.json)");
    coarsen_cmd->add_option("--threads", coarsen_flags.threads, "Worker threads")
        ->envname("COCLUST_THREADS")
        ->check(CLI::PositiveNumber);
    add_schema_flags(coarsen_cmd, coarsen_flags.schema);

    // report
    ReportFlags report_flags;
    CLI::App* report_cmd = app.add_subcommand("report", "Mutual-information reports");
    report_cmd->add_option("-m,--model", report_flags.model, "Model JSON")->required();
    report_cmd->add_option("input", report_flags.input, "Corpus CSV the model was fitted on")->required();
    report_cmd->add_option("-f,--format", report_flags.format, "mi, geojson or calendar")
        ->check(CLI::IsMember({"mi", "geojson", "calendar"}));
    report_cmd->add_option("--focus", report_flags.focus, "Source cluster (spatial) or segment (temporal)");
    report_cmd->add_option("--coords", report_flags.coords, "Coordinate CSV (id,lat,lon)");
    report_cmd->add_option("--epsilon", report_flags.epsilon, "Relative deviation tolerated as neutral")
        ->check(CLI::NonNegativeNumber);
    report_cmd->add_flag("--bits", report_flags.bits, "Contributions in bits instead of nats");
    report_cmd->add_option("-o,--output", report_flags.output, "Report file");
    report_cmd->add_option("--manifest", report_flags.manifest, "Manifest path (default: <output>.manifest.json)");
    add_schema_flags(report_cmd, report_flags.schema);

    // synth
    SynthFlags synth_flags;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
    synth_cmd->add_option("-g,--generator", synth_flags.generator,
                          "planted, two-block, uniform, two-regime, seasonal or constant")
        ->check(CLI::IsMember({"planted", "two-block", "uniform", "two-regime", "seasonal", "constant"}));
    synth_cmd->add_option("-o,--output", synth_flags.output, "Output CSV");
    synth_cmd->add_option("--sources", synth_flags.sources, "Source count")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--destinations", synth_flags.destinations, "Destination count")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--blocks", synth_flags.blocks, "Planted blocks per axis")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--calls", synth_flags.calls, "Number of calls")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--noise", synth_flags.noise, "Fraction of uniform calls")->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--days", synth_flags.days, "Number of days")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--calls-per-pair", synth_flags.calls_per_pair, "two-block calls per pair")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth_flags.seed, "Random seed")->envname("COCLUST_SEED");

    try {
        if (const auto path = config_path(args)) apply_config(app, *path);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_input, ingest_schema, ingest_output, ingest_manifest, ingest, out);
        if (fit_cmd->parsed()) return cmd_fit(fit_flags, fit_cmd, out, err);
        if (coarsen_cmd->parsed()) return cmd_coarsen(coarsen_flags, coarsen_cmd, out);
        if (report_cmd->parsed()) return cmd_report(report_flags, report_cmd, out);
        if (synth_cmd->parsed()) return cmd_synth(synth_flags, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace coclust
