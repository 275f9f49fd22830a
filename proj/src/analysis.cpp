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

#include "coclust/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "json.hpp"

#include "coclust/error.hpp"

namespace coclust {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

const char* to_string(Label label) {
    switch (label) {
        case Label::excess: return "excess";
        case Label::deficit: return "deficit";
        case Label::neutral: return "neutral";
    }
    return "neutral";
}

Label classify(double observed, double expected, double epsilon) {
    if (epsilon < 0.0) throw Error("epsilon must be >= 0");
    if (observed > expected * (1.0 + epsilon)) return Label::excess;
    if (observed > 0.0 && observed < expected * (1.0 - epsilon)) return Label::deficit;
    return Label::neutral;
}

ContributionReport mi_contributions(const CoclusterModel& model, double epsilon, bool bits) {
    if (epsilon < 0.0) throw Error("epsilon must be >= 0");
    if (model.total() < 1) throw ModelError("model holds no events");
    ContributionReport out;
    out.kind = model.kind();
    out.rows = model.row_cluster_count();
    out.cols = model.col_cluster_count();
    out.total = model.total();
    out.bits = bits;
    out.epsilon = epsilon;
    const double m = static_cast<double>(model.total());
    const double scale = bits ? 1.0 / std::numbers::ln2 : 1.0;
    double sum = 0.0;
    out.cells.reserve(static_cast<std::size_t>(out.rows) * static_cast<std::size_t>(out.cols));
    for (std::int32_t r = 0; r < out.rows; ++r) {
        const std::int64_t nr = model.row_cluster_totals()[static_cast<std::size_t>(r)];
        for (std::int32_t c = 0; c < out.cols; ++c) {
            const std::int64_t nc = model.col_cluster_totals()[static_cast<std::size_t>(c)];
            Contribution cell;
            cell.row_cluster = r;
            cell.col_cluster = c;
            cell.joint_count = model.block(r, c);
            cell.joint = static_cast<double>(cell.joint_count) / m;
            cell.row_marginal = static_cast<double>(nr) / m;
            cell.col_marginal = static_cast<double>(nc) / m;
            if (cell.joint_count > 0) {
                const double ratio = (static_cast<double>(cell.joint_count) * m) /
                                     (static_cast<double>(nr) * static_cast<double>(nc));
                cell.contribution = cell.joint * std::log(ratio) * scale;
            }
            // Compared on integer counts so that exact independence is exact.
            const auto observed = static_cast<long double>(cell.joint_count) * static_cast<long double>(model.total());
            const auto expected = static_cast<long double>(nr) * static_cast<long double>(nc);
            if (observed > expected * (1.0L + epsilon))
                cell.label = Label::excess;
            else if (cell.joint_count > 0 && observed < expected * (1.0L - epsilon))
                cell.label = Label::deficit;
            sum += cell.contribution;
            out.cells.push_back(cell);
        }
    }
    // Rounding can leave an exactly independent table a hair below zero.
    out.total_mi = std::max(0.0, sum);
    return out;
}

EntityReport entity_report(const ContributionReport& report, const CoclusterModel& model, const CountMatrix& matrix,
                           const EventCorpus& corpus, const CoordinateTable& coordinates, std::int32_t focus) {
    const bool spatial = model.kind() == ModelKind::spatial;
    const std::int32_t focus_count = spatial ? model.row_cluster_count() : model.col_cluster_count();
    if (focus < 0 || focus >= focus_count)
        throw Error("focus " + std::to_string(focus) + " out of range: the model has " + std::to_string(focus_count) +
                    (spatial ? " source clusters" : " segments"));
    if (report.rows != model.row_cluster_count() || report.cols != model.col_cluster_count())
        throw ModelError("contribution report does not match the model");

    const Dictionary& dict = spatial ? corpus.destinations() : corpus.sources();
    const auto& entities = spatial ? matrix.col_entities() : matrix.row_entities();
    const auto& sums = spatial ? matrix.col_sums() : matrix.row_sums();
    const auto& partition = spatial ? model.col_partition() : model.row_partition();
    std::vector<std::int32_t> slot(static_cast<std::size_t>(dict.size()), -1);
    for (std::size_t i = 0; i < entities.size(); ++i) slot[static_cast<std::size_t>(entities[i])] = static_cast<std::int32_t>(i);

    EntityReport out;
    out.focus = focus;
    for (std::int32_t e = 0; e < dict.size(); ++e) {
        EntityRecord rec;
        rec.id = dict.label(e);
        const Coordinate* pos = coordinates.find(rec.id);
        if (!pos) {
            ++out.missing_coordinates;
            continue;
        }
        rec.has_position = true;
        rec.position = *pos;
        const std::int32_t i = slot[static_cast<std::size_t>(e)];
        if (i >= 0) {
            rec.cluster = partition[static_cast<std::size_t>(i)];
            rec.calls = sums[static_cast<std::size_t>(i)];
            const Contribution& cell = spatial ? report.at(focus, rec.cluster) : report.at(rec.cluster, focus);
            rec.contribution = cell.contribution;
            rec.label = cell.label;
        }
        rec.size = std::log1p(static_cast<double>(rec.calls));
        out.entities.push_back(std::move(rec));
    }
    return out;
}

CalendarReport calendar_report(const ContributionReport& report, const CoclusterModel& model,
                               const CountMatrix& matrix, const EventCorpus& corpus) {
    if (model.kind() != ModelKind::temporal) throw ModelError("the calendar needs a temporal model");
    if (report.rows != model.row_cluster_count() || report.cols != model.col_cluster_count())
        throw ModelError("contribution report does not match the model");
    CalendarReport out;
    out.clusters = model.row_cluster_count();
    for (std::int32_t d = 0; d < matrix.cols(); ++d) {
        out.days.push_back(corpus.day_label(matrix.col_entities()[static_cast<std::size_t>(d)]));
        out.segment.push_back(model.col_partition()[static_cast<std::size_t>(d)]);
    }
    out.grid.reserve(static_cast<std::size_t>(out.clusters) * out.days.size());
    for (std::int32_t r = 0; r < out.clusters; ++r)
        for (std::int32_t s : out.segment) out.grid.push_back(report.at(r, s).label);
    return out;
}

std::string contribution_csv(const ContributionReport& report) {
    std::string out = "source_cluster,dest_cluster_or_segment,joint_count,contribution,label\n";
    for (const Contribution& c : report.cells) {
        out += std::to_string(c.row_cluster) + ',' + std::to_string(c.col_cluster) + ',' +
               std::to_string(c.joint_count) + ',' + format_double(c.contribution) + ',' + to_string(c.label) + '\n';
    }
    return out;
}

std::string calendar_csv(const CalendarReport& calendar) {
    std::string out = "cluster";
    for (const auto& d : calendar.days) out += ',' + csv_field(d);
    out += '\n';
    for (std::int32_t r = 0; r < calendar.clusters; ++r) {
        out += std::to_string(r);
        for (std::size_t d = 0; d < calendar.days.size(); ++d) out += std::string(",") + to_string(calendar.at(r, d));
        out += '\n';
    }
    return out;
}

std::string entity_geojson(const EntityReport& report) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const EntityRecord& e : report.entities) {
        nlohmann::ordered_json f;
        f["type"] = "Feature";
        f["geometry"] = {{"type", "Point"}, {"coordinates", {e.position.longitude, e.position.latitude}}};
        f["properties"] = {{"id", e.id},
                           {"cluster", e.cluster},
                           {"contribution", e.contribution},
                           {"label", to_string(e.label)},
                           {"size", e.size}};
        features.push_back(std::move(f));
    }
    nlohmann::ordered_json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    return doc.dump(2) + "\n";
}

}  // namespace coclust
