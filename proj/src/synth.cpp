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

#include "coclust/synth.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include "coclust/error.hpp"

namespace coclust::synth {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(n)); }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

using Key = std::tuple<std::int32_t, std::int32_t, std::int32_t>;

std::string label(char prefix, std::int64_t i) { return prefix + std::to_string(i); }

std::string iso_day(std::int32_t offset) {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{year{2024} / January / 1} + days{offset}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

EventCorpus assemble(std::int32_t sources, std::int32_t destinations, const std::map<Key, std::int64_t>& counts,
                     bool with_time, bool iso) {
    CorpusBuilder builder(true, with_time);
    for (std::int32_t s = 0; s < sources; ++s) builder.declare_source(label('s', s));
    for (std::int32_t d = 0; d < destinations; ++d) builder.declare_destination(label('d', d));
    for (const auto& [key, n] : counts) {
        const auto [s, d, t] = key;
        builder.add(label('s', s), label('d', d), with_time ? (iso ? iso_day(t) : std::to_string(t)) : "", n);
    }
    return std::move(builder).build();
}

void check_positive(std::int64_t v, const char* what) {
    if (v < 1) throw Error(std::string(what) + " must be >= 1");
}

}  // namespace

EventCorpus planted_blocks(const PlantedBlocks& spec) {
    check_positive(spec.sources, "sources");
    check_positive(spec.destinations, "destinations");
    check_positive(spec.source_blocks, "source_blocks");
    check_positive(spec.destination_blocks, "destination_blocks");
    check_positive(spec.calls, "calls");
    if (spec.source_blocks > spec.sources || spec.destination_blocks > spec.destinations)
        throw Error("more blocks than entities");
    if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) throw Error("noise must lie in [0, 1]");

    // Destination block b spans [first[b], first[b + 1]).
    std::vector<std::int32_t> first(static_cast<std::size_t>(spec.destination_blocks) + 1);
    for (std::int32_t b = 0; b <= spec.destination_blocks; ++b)
        first[static_cast<std::size_t>(b)] = static_cast<std::int32_t>(
            (static_cast<std::int64_t>(b) * spec.destinations + spec.destination_blocks - 1) / spec.destination_blocks);

    Rng rng(spec.seed);
    std::map<Key, std::int64_t> counts;
    for (std::int64_t c = 0; c < spec.calls; ++c) {
        const auto s = static_cast<std::int32_t>(rng.below(spec.sources));
        std::int32_t d;
        if (rng.unit() < spec.noise) {
            d = static_cast<std::int32_t>(rng.below(spec.destinations));
        } else {
            const auto block = static_cast<std::int32_t>(static_cast<std::int64_t>(s) * spec.source_blocks /
                                                         spec.sources % spec.destination_blocks);
            const std::int32_t lo = first[static_cast<std::size_t>(block)];
            const std::int32_t hi = first[static_cast<std::size_t>(block) + 1];
            d = lo + static_cast<std::int32_t>(rng.below(hi - lo));
        }
        ++counts[{s, d, 0}];
    }
    return assemble(spec.sources, spec.destinations, counts, false, false);
}

EventCorpus two_block(std::int64_t calls_per_pair) {
    check_positive(calls_per_pair, "calls_per_pair");
    CorpusBuilder builder(true, false);
    for (int s = 1; s <= 4; ++s) builder.declare_source(label('s', s));
    for (int d = 1; d <= 4; ++d) builder.declare_destination(label('d', d));
    for (int s = 1; s <= 4; ++s)
        for (int d = 1; d <= 4; ++d)
            if ((s <= 2) == (d <= 2)) builder.add(label('s', s), label('d', d), "", calls_per_pair);
    return std::move(builder).build();
}

EventCorpus uniform(std::int32_t sources, std::int32_t destinations, std::int64_t calls, std::uint64_t seed) {
    check_positive(sources, "sources");
    check_positive(destinations, "destinations");
    check_positive(calls, "calls");
    Rng rng(seed);
    std::map<Key, std::int64_t> counts;
    for (std::int64_t c = 0; c < calls; ++c) {
        const auto s = static_cast<std::int32_t>(rng.below(sources));
        const auto d = static_cast<std::int32_t>(rng.below(destinations));
        ++counts[{s, d, 0}];
    }
    return assemble(sources, destinations, counts, false, false);
}

EventCorpus two_regime(std::int64_t calls_per_day, std::int32_t days_per_regime) {
    check_positive(calls_per_day, "calls_per_day");
    check_positive(days_per_regime, "days_per_regime");
    CorpusBuilder builder(false, true);
    builder.declare_source("A");
    builder.declare_source("B");
    for (std::int32_t day = 1; day <= 2 * days_per_regime; ++day)
        builder.add(day <= days_per_regime ? "A" : "B", "", std::to_string(day), calls_per_day);
    return std::move(builder).build();
}

EventCorpus seasonal(const Seasonal& spec) {
    check_positive(spec.sources, "sources");
    check_positive(spec.destinations, "destinations");
    check_positive(spec.days, "days");
    check_positive(spec.calls, "calls");
    Rng rng(spec.seed);
    std::map<Key, std::int64_t> counts;
    for (std::int64_t c = 0; c < spec.calls; ++c) {
        const auto s = static_cast<std::int32_t>(rng.below(spec.sources));
        const bool weekend_group = s >= spec.sources / 2;
        // 2024-01-01 is a Monday: offsets 5 and 6 mod 7 are weekend days.
        std::int32_t t;
        for (;;) {
            t = static_cast<std::int32_t>(rng.below(spec.days));
            const bool weekend = t % 7 >= 5;
            const double keep = weekend == weekend_group ? 1.0 : 0.2;
            if (rng.unit() < keep) break;
        }
        const auto d = static_cast<std::int32_t>(rng.below(spec.destinations));
        ++counts[{s, d, t}];
    }
    return assemble(spec.sources, spec.destinations, counts, true, true);
}

EventCorpus constant_rate(std::int32_t sources, std::int32_t days, std::int64_t calls, std::uint64_t seed) {
    check_positive(sources, "sources");
    check_positive(days, "days");
    check_positive(calls, "calls");
    Rng rng(seed);
    std::map<Key, std::int64_t> counts;
    for (std::int64_t c = 0; c < calls; ++c) {
        const auto s = static_cast<std::int32_t>(rng.below(sources));
        const auto t = static_cast<std::int32_t>(rng.below(days));
        ++counts[{s, 0, t + 1}];
    }
    return assemble(sources, 1, counts, true, false);
}

}  // namespace coclust::synth
