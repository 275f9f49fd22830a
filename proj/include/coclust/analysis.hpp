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
#include <string>
#include <vector>

#include "coclust/corpus.hpp"
#include "coclust/count_matrix.hpp"
#include "coclust/model.hpp"

namespace coclust {

enum class Label { excess, deficit, neutral };

const char* to_string(Label label);

/// excess when observed > expected * (1 + epsilon); deficit when
/// 0 < observed < expected * (1 - epsilon); neutral otherwise.
Label classify(double observed, double expected, double epsilon);

struct Contribution {
    std::int32_t row_cluster = 0;
    std::int32_t col_cluster = 0;  // destination cluster or segment
    std::int64_t joint_count = 0;
    double joint = 0.0;         // p(i,j)
    double row_marginal = 0.0;  // p(i)
    double col_marginal = 0.0;  // p(j)
    double contribution = 0.0;  // p(i,j) ln(p(i,j) / (p(i) p(j))), 0 when p(i,j) = 0
    Label label = Label::neutral;
};

/// Mutual information between the two partitions of a model, cell by cell.
struct ContributionReport {
    ModelKind kind = ModelKind::spatial;
    std::int32_t rows = 0;
    std::int32_t cols = 0;
    std::int64_t total = 0;
    bool bits = false;
    double epsilon = 0.05;
    std::vector<Contribution> cells;  // row-major, every bicluster
    double total_mi = 0.0;

    const Contribution& at(std::int32_t r, std::int32_t c) const {
        return cells[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)];
    }
};

ContributionReport mi_contributions(const CoclusterModel& model, double epsilon = 0.05, bool bits = false);

struct EntityRecord {
    std::string id;
    bool has_position = false;
    Coordinate position;
    std::int32_t cluster = -1;  // -1: entity without traffic
    std::int64_t calls = 0;
    double contribution = 0.0;
    Label label = Label::neutral;
    double size = 0.0;  // ln(1 + calls)
};

struct EntityReport {
    std::int32_t focus = 0;
    std::vector<EntityRecord> entities;  // entities with a known position
    std::size_t missing_coordinates = 0;
};

/// Spatial model: `focus` is a source cluster and every destination entity is
/// reported with the contribution of (focus, its cluster). Temporal model:
/// `focus` is a segment and the entities are the sources.
EntityReport entity_report(const ContributionReport& report, const CoclusterModel& model, const CountMatrix& matrix,
                           const EventCorpus& corpus, const CoordinateTable& coordinates, std::int32_t focus);

struct CalendarReport {
    std::vector<std::string> days;        // every observed day, in order
    std::vector<std::int32_t> segment;    // segment of each day
    std::int32_t clusters = 0;
    std::vector<Label> grid;              // clusters x days, row-major

    Label at(std::int32_t cluster, std::size_t day) const {
        return grid[static_cast<std::size_t>(cluster) * days.size() + day];
    }
};

CalendarReport calendar_report(const ContributionReport& report, const CoclusterModel& model,
                               const CountMatrix& matrix, const EventCorpus& corpus);

/// `source_cluster,dest_cluster_or_segment,joint_count,contribution,label`
std::string contribution_csv(const ContributionReport& report);
/// Header `cluster,<day>...`; one row per source cluster.
std::string calendar_csv(const CalendarReport& calendar);
/// FeatureCollection of Point features, coordinates in (lon, lat) order.
std::string entity_geojson(const EntityReport& report);

}  // namespace coclust
