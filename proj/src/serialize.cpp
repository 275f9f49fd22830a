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

#include "coclust/serialize.hpp"

#include <cstdio>

#include "json.hpp"

#include "coclust/error.hpp"

namespace coclust {

namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string column_label(const CountMatrix& matrix, const EventCorpus& corpus, std::int32_t col) {
    const std::int32_t e = matrix.col_entities()[static_cast<std::size_t>(col)];
    return matrix.kind() == ModelKind::spatial ? corpus.destinations().label(e) : corpus.day_label(e);
}

Json clusters_json(const CoclusterModel& model, const CountMatrix& matrix, const EventCorpus& corpus, bool rows) {
    const Axis axis = rows ? Axis::sources : model.column_axis();
    const auto members = model.members(axis);
    const auto& sizes = rows ? model.row_cluster_sizes() : model.col_cluster_sizes();
    const auto& totals = rows ? model.row_cluster_totals() : model.col_cluster_totals();
    Json out = Json::array();
    for (std::size_t k = 0; k < members.size(); ++k) {
        Json c;
        c["id"] = k;
        c["size"] = sizes[k];
        c["calls"] = totals[k];
        Json labels = Json::array();
        for (std::int32_t e : members[k])
            labels.push_back(rows ? corpus.sources().label(matrix.row_entities()[static_cast<std::size_t>(e)])
                                  : column_label(matrix, corpus, e));
        if (axis == Axis::segments) {
            c["first_day"] = labels.front();
            c["last_day"] = labels.back();
        }
        c["members"] = std::move(labels);
        out.push_back(std::move(c));
    }
    return out;
}

Json parse(const std::string& text, const char* what) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed ") + what + " document: " + e.what());
    }
}

template <class T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw InputError(std::string("field '") + key + "' has the wrong type");
    }
}

// Matrix index of each label of one axis.
std::unordered_map<std::string, std::int32_t> axis_index(const CountMatrix& matrix, const EventCorpus& corpus,
                                                         bool rows) {
    std::unordered_map<std::string, std::int32_t> out;
    const std::int32_t n = rows ? matrix.rows() : matrix.cols();
    for (std::int32_t i = 0; i < n; ++i)
        out.emplace(rows ? corpus.sources().label(matrix.row_entities()[static_cast<std::size_t>(i)])
                         : column_label(matrix, corpus, i),
                    i);
    return out;
}

std::vector<std::int32_t> read_partition(const Json& clusters, const CountMatrix& matrix, const EventCorpus& corpus,
                                         bool rows) {
    const auto index = axis_index(matrix, corpus, rows);
    std::vector<std::int32_t> out(index.size(), -1);
    if (!clusters.is_array()) throw InputError("cluster list must be an array");
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        for (const auto& label : field<std::vector<std::string>>(clusters[k], "members")) {
            const auto it = index.find(label);
            if (it == index.end()) throw InputError("model names unknown entity '" + label + "'");
            if (out[static_cast<std::size_t>(it->second)] >= 0)
                throw InputError("entity '" + label + "' appears in two clusters");
            out[static_cast<std::size_t>(it->second)] = static_cast<std::int32_t>(k);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] < 0) throw InputError("model leaves an active entity unassigned");
    return out;
}

}  // namespace

std::string model_json(const FitResult& fit, const CountMatrix& matrix, const EventCorpus& corpus) {
    const CoclusterModel& model = fit.model;
    Json doc;
    doc["format"] = "coclust-model";
    doc["version"] = kModelFormatVersion;
    doc["kind"] = to_string(model.kind());
    doc["corpus_digest"] = corpus.digest();
    doc["calls"] = model.total();
    doc["cost"] = fit.cost;
    doc["null_cost"] = fit.null_cost;
    doc["source_clusters"] = clusters_json(model, matrix, corpus, true);
    doc[model.kind() == ModelKind::spatial ? "destination_clusters" : "segments"] =
        clusters_json(model, matrix, corpus, false);
    Json blocks = Json::array();
    for (std::int32_t r = 0; r < model.row_cluster_count(); ++r) {
        Json row = Json::array();
        for (std::int32_t c = 0; c < model.col_cluster_count(); ++c) row.push_back(model.block(r, c));
        blocks.push_back(std::move(row));
    }
    doc["blocks"] = std::move(blocks);
    doc["restart_costs"] = fit.restart_costs;
    Json trace = Json::array();
    for (const TraceStep& s : fit.trace)
        trace.push_back({{"restart", s.restart},
                         {"step", s.step},
                         {"cost", s.cost},
                         {"source_clusters", s.row_clusters},
                         {"column_clusters", s.col_clusters}});
    doc["trace"] = std::move(trace);
    return doc.dump(2) + "\n";
}

LoadedModel parse_model_json(const std::string& text, const CountMatrix& matrix, const EventCorpus& corpus) {
    const Json doc = parse(text, "model");
    if (field<std::string>(doc, "format") != "coclust-model") throw InputError("not a model document");
    const int version = field<int>(doc, "version");
    if (version != kModelFormatVersion) throw InputError("unsupported model version " + std::to_string(version));
    const ModelKind kind = parse_model_kind(field<std::string>(doc, "kind"));
    if (kind != matrix.kind()) throw InputError("model kind does not match the requested projection");
    LoadedModel out;
    out.corpus_digest = field<std::string>(doc, "corpus_digest");
    if (out.corpus_digest != corpus.digest())
        throw InputError("corpus digest mismatch: model was fitted on " + out.corpus_digest + ", corpus is " +
                         corpus.digest());
    out.cost = field<double>(doc, "cost");
    out.null_cost = field<double>(doc, "null_cost");
    out.restart_costs = field<std::vector<double>>(doc, "restart_costs");
    auto rows = read_partition(field<Json>(doc, "source_clusters"), matrix, corpus, true);
    auto cols = read_partition(field<Json>(doc, kind == ModelKind::spatial ? "destination_clusters" : "segments"),
                               matrix, corpus, false);
    try {
        out.model = CoclusterModel::from_partition(matrix, std::move(rows), std::move(cols));
    } catch (const ModelError& e) {
        throw InputError(std::string("invalid model partitions: ") + e.what());
    }
    return out;
}

FitResult to_fit_result(const LoadedModel& loaded) {
    FitResult fit;
    fit.model = loaded.model;
    fit.cost = loaded.cost;
    fit.null_cost = loaded.null_cost;
    fit.restart_costs = loaded.restart_costs;
    return fit;
}

std::string dendrogram_json(const MergeDendrogram& d, const EventCorpus& corpus) {
    Json doc;
    doc["format"] = "coclust-dendrogram";
    doc["version"] = kModelFormatVersion;
    doc["kind"] = to_string(d.leaf.kind());
    doc["corpus_digest"] = corpus.digest();
    doc["best_cost"] = d.best_cost;
    doc["null_cost"] = d.null_cost;
    doc["leaf_source_clusters"] = d.leaf.row_cluster_count();
    doc["leaf_column_clusters"] = d.leaf.col_cluster_count();
    Json steps = Json::array();
    for (const MergeStep& s : d.steps)
        steps.push_back({{"axis", to_string(s.axis)},
                         {"a", s.a},
                         {"b", s.b},
                         {"cost", s.cost},
                         {"tau", s.tau},
                         {"source_clusters", s.row_clusters},
                         {"column_clusters", s.col_clusters}});
    doc["steps"] = std::move(steps);
    return doc.dump(2) + "\n";
}

MergeDendrogram parse_dendrogram_json(const std::string& text, const LoadedModel& leaf) {
    const Json doc = parse(text, "dendrogram");
    if (field<std::string>(doc, "format") != "coclust-dendrogram") throw InputError("not a dendrogram document");
    if (field<std::string>(doc, "corpus_digest") != leaf.corpus_digest)
        throw InputError("dendrogram and model were built on different corpora");
    MergeDendrogram d;
    d.leaf = leaf.model;
    d.best_cost = field<double>(doc, "best_cost");
    d.null_cost = field<double>(doc, "null_cost");
    for (const auto& s : field<Json>(doc, "steps")) {
        MergeStep step;
        step.axis = parse_axis(field<std::string>(s, "axis"));
        step.a = field<std::int32_t>(s, "a");
        step.b = field<std::int32_t>(s, "b");
        step.cost = field<double>(s, "cost");
        step.tau = field<double>(s, "tau");
        step.row_clusters = field<std::int32_t>(s, "source_clusters");
        step.col_clusters = field<std::int32_t>(s, "column_clusters");
        d.steps.push_back(step);
    }
    return d;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "clusters,tau,cost\n";
    for (const CurvePoint& p : curve)
        out += std::to_string(p.clusters) + ',' + format_double(p.tau) + ',' + format_double(p.cost) + '\n';
    return out;
}

}  // namespace coclust
