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

#include "coclust/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "coclust/error.hpp"

namespace coclust {

namespace {

constexpr std::string_view kPseudoDestination = "*";

bool parse_int64(std::string_view text, std::int64_t& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<std::int64_t> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    std::int64_t y = 0, m = 0, d = 0;
    if (!parse_int64(text.substr(0, 4), y) || !parse_int64(text.substr(5, 2), m) ||
        !parse_int64(text.substr(8, 2), d))
        return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                                    std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days_since_epoch) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days_since_epoch}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

void fnv1a(std::uint64_t& h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
}

std::vector<std::int64_t> recount(std::size_t n, const std::vector<Cell>& cells,
                                  std::int32_t Cell::*axis) {
    std::vector<std::int64_t> out(n, 0);
    for (const Cell& c : cells) out[static_cast<std::size_t>(c.*axis)] += c.count;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dictionary

std::int32_t Dictionary::intern(std::string_view label) {
    std::string key(label);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::int32_t>(labels_.size());
    index_.emplace(key, id);
    labels_.push_back(std::move(key));
    return id;
}

std::optional<std::int32_t> Dictionary::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// EventCorpus

std::string EventCorpus::day_label(std::int32_t time) const {
    std::int64_t day = day_origin_ + days_.at(static_cast<std::size_t>(time));
    switch (time_format_) {
        case TimeFormat::iso_date: return format_iso_date(day);
        case TimeFormat::day_index: return std::to_string(day);
        case TimeFormat::none: break;
    }
    return "";
}

std::string EventCorpus::digest() const {
    std::vector<std::tuple<std::string_view, std::string_view, std::string, std::int64_t>> rows;
    rows.reserve(cells_.size());
    for (const Cell& c : cells_) {
        rows.emplace_back(sources_.label(c.source),
                          has_destinations_ ? std::string_view(destinations_.label(c.destination))
                                            : std::string_view{},
                          day_label(c.time), c.count);
    }
    std::sort(rows.begin(), rows.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [s, d, t, n] : rows) {
        fnv1a(h, s);
        fnv1a(h, "\x1f");
        fnv1a(h, d);
        fnv1a(h, "\x1f");
        fnv1a(h, t);
        fnv1a(h, "\x1f");
        fnv1a(h, std::to_string(n));
        fnv1a(h, "\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// CorpusBuilder

CorpusBuilder::CorpusBuilder(bool with_destinations, bool with_time)
    : with_destinations_(with_destinations), with_time_(with_time) {
    if (!with_destinations_ && !with_time_)
        throw InputError("corpus needs a destination or a time axis");
    if (with_time_) format_ = TimeFormat::none;  // decided by the first timestamp
}

std::int64_t CorpusBuilder::parse_day(std::string_view text) {
    text = trim(text);
    std::int64_t value = 0;
    if (parse_int64(text, value)) {
        if (format_ == TimeFormat::iso_date)
            throw InputError("mixed timestamp formats: '" + std::string(text) + "'");
        format_ = TimeFormat::day_index;
        return value;
    }
    if (auto iso = parse_iso_date(text)) {
        if (format_ == TimeFormat::day_index)
            throw InputError("mixed timestamp formats: '" + std::string(text) + "'");
        format_ = TimeFormat::iso_date;
        return *iso;
    }
    throw InputError("unparseable timestamp '" + std::string(text) + "'");
}

void CorpusBuilder::add(const EventRecord& r) {
    add(r.source_id, r.destination_id, r.timestamp, r.count);
}

void CorpusBuilder::add(std::string_view source, std::string_view destination,
                        std::string_view timestamp, std::int64_t count) {
    if (count <= 0) throw InputError("count must be positive, got " + std::to_string(count));
    if (source.empty()) throw InputError("empty source id");
    if (with_destinations_ && destination.empty()) throw InputError("empty destination id");
    RawCell cell{};
    cell.source = sources_.intern(source);
    cell.destination = with_destinations_ ? destinations_.intern(destination) : 0;
    cell.day = with_time_ ? parse_day(timestamp) : 0;
    cell.count = count;
    raw_.push_back(cell);
}

EventCorpus CorpusBuilder::build() && {
    if (raw_.empty()) throw InputError("empty corpus");

    EventCorpus corpus;
    corpus.has_destinations_ = with_destinations_;
    corpus.time_format_ = with_time_ ? format_ : TimeFormat::none;
    corpus.sources_ = std::move(sources_);
    if (with_destinations_) {
        corpus.destinations_ = std::move(destinations_);
    } else {
        corpus.destinations_.intern(kPseudoDestination);
    }

    std::int64_t origin = raw_.front().day;
    for (const RawCell& r : raw_) origin = std::min(origin, r.day);
    corpus.day_origin_ = origin;

    std::vector<std::int64_t> days;
    days.reserve(raw_.size());
    for (const RawCell& r : raw_) days.push_back(r.day - origin);
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    corpus.days_ = std::move(days);

    std::vector<Cell> cells;
    cells.reserve(raw_.size());
    for (const RawCell& r : raw_) {
        auto pos = std::lower_bound(corpus.days_.begin(), corpus.days_.end(), r.day - origin);
        cells.push_back({r.source, r.destination,
                         static_cast<std::int32_t>(pos - corpus.days_.begin()), r.count});
    }
    raw_.clear();
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return std::tie(a.source, a.destination, a.time) < std::tie(b.source, b.destination, b.time);
    });
    std::vector<Cell> merged;
    merged.reserve(cells.size());
    for (const Cell& c : cells) {
        if (!merged.empty() && merged.back().source == c.source &&
            merged.back().destination == c.destination && merged.back().time == c.time) {
            merged.back().count += c.count;
        } else {
            merged.push_back(c);
        }
    }
    corpus.cells_ = std::move(merged);

    corpus.source_marginals_ = recount(static_cast<std::size_t>(corpus.sources_.size()),
                                       corpus.cells_, &Cell::source);
    corpus.destination_marginals_ = recount(static_cast<std::size_t>(corpus.destinations_.size()),
                                            corpus.cells_, &Cell::destination);
    corpus.time_marginals_ = recount(corpus.days_.size(), corpus.cells_, &Cell::time);
    corpus.total_ = 0;
    for (const Cell& c : corpus.cells_) corpus.total_ += c.count;
    return corpus;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_csv_line(std::string_view line, char separator) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == separator) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (quoted) throw InputError("unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

EventCorpus ingest_csv_text(std::string_view text, const CsvSchema& schema) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    if (!next_line()) throw InputError("empty corpus");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    std::vector<std::string> header = split_csv_line(line, schema.separator);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        if (name.empty()) return std::nullopt;
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(header[i]) == name) return i;
        throw InputError("missing column '" + name + "' in header");
    };
    if (schema.source_column.empty()) throw InputError("schema names no source column");
    std::size_t src_col = *column(schema.source_column);
    auto dst_col = column(schema.destination_column);
    auto time_col = column(schema.time_column);
    auto count_col = column(schema.count_column);
    if (!dst_col && !time_col)
        throw InputError("schema needs a destination or a time column");

    CorpusBuilder builder(dst_col.has_value(), time_col.has_value());
    bool any = false;
    while (next_line()) {
        auto fields = [&] {
            try {
                return split_csv_line(line, schema.separator);
            } catch (const InputError& e) {
                throw InputError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }();
        if (fields.size() != header.size())
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::string_view src = trim(fields[src_col]);
        std::string_view dst = dst_col ? trim(fields[*dst_col]) : std::string_view{};
        if (schema.ignored_ids.count(std::string(src)) ||
            (dst_col && schema.ignored_ids.count(std::string(dst))))
            continue;
        std::int64_t count = 1;
        if (count_col && !parse_int64(trim(fields[*count_col]), count))
            throw InputError("line " + std::to_string(line_no) + ": bad count '" +
                             fields[*count_col] + "'");
        if (count <= 0)
            throw InputError("line " + std::to_string(line_no) + ": count must be positive");
        try {
            builder.add(src, dst, time_col ? trim(fields[*time_col]) : std::string_view{}, count);
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(line_no) + ": " + e.what());
        }
        any = true;
    }
    if (!any) throw InputError("empty corpus");
    return std::move(builder).build();
}

EventCorpus ingest_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_csv_text(buf.str(), schema);
}

namespace {

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

CsvSchema export_schema(const EventCorpus& corpus) {
    CsvSchema schema;
    schema.source_column = "source";
    schema.destination_column = corpus.has_destinations() ? "destination" : "";
    schema.time_column = corpus.has_time() ? "date" : "";
    schema.count_column = "count";
    return schema;
}

std::string export_csv_text(const EventCorpus& corpus) {
    std::string out = "source";
    if (corpus.has_destinations()) out += ",destination";
    if (corpus.has_time()) out += ",date";
    out += ",count\n";
    for (const Cell& c : corpus.cells()) {
        out += quote_field(corpus.sources().label(c.source));
        if (corpus.has_destinations()) out += "," + quote_field(corpus.destinations().label(c.destination));
        if (corpus.has_time()) out += "," + corpus.day_label(c.time);
        out += "," + std::to_string(c.count) + "\n";
    }
    return out;
}

void export_csv(const EventCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << export_csv_text(corpus);
}

// ---------------------------------------------------------------------------
// Projections

EventCorpus project_spatial(const EventCorpus& corpus) {
    if (!corpus.has_destinations()) throw InputError("spatial projection needs destinations");
    std::vector<Cell> cells;
    for (const Cell& c : corpus.cells()) {
        if (!cells.empty() && cells.back().source == c.source && cells.back().destination == c.destination)
            cells.back().count += c.count;
        else
            cells.push_back({c.source, c.destination, 0, c.count});
    }
    EventCorpus out;
    out.sources_ = corpus.sources();
    out.destinations_ = corpus.destinations();
    out.has_destinations_ = true;
    out.time_format_ = TimeFormat::none;
    out.day_origin_ = 0;
    out.days_ = {0};
    out.cells_ = std::move(cells);
    out.source_marginals_ = corpus.source_marginals();
    out.destination_marginals_ = corpus.destination_marginals();
    out.time_marginals_ = {corpus.total()};
    out.total_ = corpus.total();
    return out;
}

EventCorpus project_temporal(const EventCorpus& corpus) {
    if (!corpus.has_time()) throw InputError("temporal projection needs timestamps");
    std::vector<Cell> cells;
    cells.reserve(corpus.cells().size());
    for (const Cell& c : corpus.cells()) cells.push_back({c.source, 0, c.time, c.count});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return std::tie(a.source, a.time) < std::tie(b.source, b.time);
    });
    std::vector<Cell> merged;
    for (const Cell& c : cells) {
        if (!merged.empty() && merged.back().source == c.source && merged.back().time == c.time)
            merged.back().count += c.count;
        else
            merged.push_back(c);
    }
    EventCorpus out;
    out.sources_ = corpus.sources();
    out.destinations_.intern(kPseudoDestination);
    out.has_destinations_ = false;
    out.time_format_ = corpus.time_format();
    out.day_origin_ = corpus.day_origin();
    out.days_ = corpus.days();
    out.cells_ = std::move(merged);
    out.source_marginals_ = corpus.source_marginals();
    out.destination_marginals_ = {corpus.total()};
    out.time_marginals_ = corpus.time_marginals();
    out.total_ = corpus.total();
    return out;
}

// ---------------------------------------------------------------------------
// Coordinates

void CoordinateTable::insert(const std::string& id, Coordinate p) {
    if (!(p.latitude >= -90.0 && p.latitude <= 90.0))
        throw InputError("latitude out of range for '" + id + "'");
    if (!(p.longitude >= -180.0 && p.longitude <= 180.0))
        throw InputError("longitude out of range for '" + id + "'");
    positions_[id] = p;
}

const Coordinate* CoordinateTable::find(const std::string& id) const {
    auto it = positions_.find(id);
    return it == positions_.end() ? nullptr : &it->second;
}

CoordinateTable CoordinateTable::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    CoordinateTable table;
    std::size_t id_col = 0, lat_col = 0, lon_col = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line, ',');
        if (header.empty()) {
            header = fields;
            auto find = [&](std::string_view name) {
                for (std::size_t i = 0; i < header.size(); ++i)
                    if (trim(header[i]) == name) return i;
                throw InputError("coordinate file lacks column '" + std::string(name) + "'");
            };
            id_col = find("id");
            lat_col = find("lat");
            lon_col = find("lon");
            continue;
        }
        if (fields.size() != header.size())
            throw InputError("coordinates line " + std::to_string(line_no) + ": wrong field count");
        Coordinate p;
        try {
            p.latitude = std::stod(fields[lat_col]);
            p.longitude = std::stod(fields[lon_col]);
        } catch (const std::exception&) {
            throw InputError("coordinates line " + std::to_string(line_no) + ": bad number");
        }
        table.insert(std::string(trim(fields[id_col])), p);
    }
    return table;
}

CoordinateTable CoordinateTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace coclust
