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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace coclust {

/// One raw event (a call): who called whom, on which day, how many times.
struct EventRecord {
    std::string source_id;
    std::string destination_id;  // empty when ingesting without destinations
    std::string timestamp;       // integer day index or ISO date; empty when absent
    std::int64_t count = 1;
};

/// Dense interning of text labels in first-seen order.
class Dictionary {
public:
    std::int32_t intern(std::string_view label);
    std::optional<std::int32_t> find(std::string_view label) const;

    std::int32_t size() const { return static_cast<std::int32_t>(labels_.size()); }
    const std::string& label(std::int32_t index) const { return labels_.at(index); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::int32_t> index_;
};

enum class TimeFormat { none, day_index, iso_date };

/// Aggregated count of one (source, destination, time) triple. `time` is an
/// index into EventCorpus::days().
struct Cell {
    std::int32_t source = 0;
    std::int32_t destination = 0;
    std::int32_t time = 0;
    std::int64_t count = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Immutable sparse store of event counts with per-axis marginals.
///
/// Cells are sorted by (source, destination, time) and unique. Days are
/// stored as offsets from the earliest observed day; `day_label` restores the
/// original notation. Sources and destinations live in separate index spaces
/// even when labels coincide.
class EventCorpus {
public:
    EventCorpus() = default;

    const Dictionary& sources() const { return sources_; }
    const Dictionary& destinations() const { return destinations_; }
    /// Sorted distinct day offsets; cell.time indexes into this.
    const std::vector<std::int64_t>& days() const { return days_; }
    std::span<const Cell> cells() const { return cells_; }

    const std::vector<std::int64_t>& source_marginals() const { return source_marginals_; }
    const std::vector<std::int64_t>& destination_marginals() const { return destination_marginals_; }
    const std::vector<std::int64_t>& time_marginals() const { return time_marginals_; }
    std::int64_t total() const { return total_; }

    bool has_destinations() const { return has_destinations_; }
    TimeFormat time_format() const { return time_format_; }
    bool has_time() const { return time_format_ != TimeFormat::none; }
    std::int64_t day_origin() const { return day_origin_; }

    /// Label of the day with index `time` (ISO date or integer, as ingested).
    std::string day_label(std::int32_t time) const;

    /// Order-independent FNV-1a digest of the labelled count multiset.
    std::string digest() const;

    friend class CorpusBuilder;
    friend EventCorpus project_spatial(const EventCorpus& corpus);
    friend EventCorpus project_temporal(const EventCorpus& corpus);

private:
    Dictionary sources_;
    Dictionary destinations_;
    std::vector<std::int64_t> days_;
    std::vector<Cell> cells_;
    std::vector<std::int64_t> source_marginals_;
    std::vector<std::int64_t> destination_marginals_;
    std::vector<std::int64_t> time_marginals_;
    std::int64_t total_ = 0;
    bool has_destinations_ = true;
    TimeFormat time_format_ = TimeFormat::none;
    std::int64_t day_origin_ = 0;
};

/// Accumulates records and produces an EventCorpus. Duplicate triples are
/// summed. Throws InputError on a non-positive count or an unparseable or
/// mixed-format timestamp.
class CorpusBuilder {
public:
    CorpusBuilder(bool with_destinations, bool with_time);

    void add(const EventRecord& record);
    void add(std::string_view source, std::string_view destination, std::string_view timestamp,
             std::int64_t count = 1);

    /// Registers an entity that may end up with zero traffic.
    void declare_source(std::string_view label) { sources_.intern(label); }
    void declare_destination(std::string_view label) { destinations_.intern(label); }

    /// Throws InputError("empty corpus") when nothing was added.
    EventCorpus build() &&;

private:
    struct RawCell {
        std::int32_t source;
        std::int32_t destination;
        std::int64_t day;
        std::int64_t count;
    };

    std::int64_t parse_day(std::string_view text);

    bool with_destinations_;
    bool with_time_;
    TimeFormat format_ = TimeFormat::none;
    Dictionary sources_;
    Dictionary destinations_;
    std::vector<RawCell> raw_;
};

/// Column mapping for CSV ingestion.
struct CsvSchema {
    std::string source_column = "source";
    std::string destination_column = "destination";  // empty: no destinations
    std::string time_column = "date";                // empty: no timestamps
    std::string count_column;                         // empty: every line counts once
    char separator = ',';
    /// Entity labels dropped at ingestion (e.g. off-network endpoints).
    std::unordered_set<std::string> ignored_ids;
};

EventCorpus ingest_csv(const std::filesystem::path& path, const CsvSchema& schema);
EventCorpus ingest_csv_text(std::string_view text, const CsvSchema& schema);

/// Writes `source,destination,date,count` rows (absent axes omitted). The
/// output re-ingests with `export_schema(corpus)` to the same count multiset.
void export_csv(const EventCorpus& corpus, const std::filesystem::path& path);
std::string export_csv_text(const EventCorpus& corpus);
CsvSchema export_schema(const EventCorpus& corpus);

/// Collapses the time axis: one pseudo-day, cell (i,j) = sum over t.
EventCorpus project_spatial(const EventCorpus& corpus);
/// Collapses the destination axis: one pseudo-destination, cell (i,t) = sum over j.
EventCorpus project_temporal(const EventCorpus& corpus);

/// Splits one CSV line; honours double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, char separator);

struct Coordinate {
    double latitude = 0.0;
    double longitude = 0.0;
};

/// Entity label -> position, loaded from an `id,lat,lon` CSV.
class CoordinateTable {
public:
    void insert(const std::string& id, Coordinate position);
    const Coordinate* find(const std::string& id) const;
    std::size_t size() const { return positions_.size(); }

    static CoordinateTable load(const std::filesystem::path& path);
    static CoordinateTable parse(std::string_view text);

private:
    std::unordered_map<std::string, Coordinate> positions_;
};

}  // namespace coclust
