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

#include "coclust/corpus.hpp"

// Seeded generators of corpora with known structure, for tests and benchmarks.
// Output depends only on the arguments (no std:: distributions involved).

namespace coclust::synth {

struct PlantedBlocks {
    std::int32_t sources = 100;
    std::int32_t destinations = 100;
    std::int32_t source_blocks = 4;
    std::int32_t destination_blocks = 4;
    std::int64_t calls = 10000;
    /// Fraction of calls drawn uniformly over all pairs.
    double noise = 0.1;
    std::uint64_t seed = 0;
};

/// Source block b calls destination block b mod destination_blocks. Sources
/// are labelled s0..., destinations d0...; entity e of n falls in block
/// e * blocks / n.
EventCorpus planted_blocks(const PlantedBlocks& spec);

/// Sources s1..s4 and destinations d1..d4; {s1,s2} x {d1,d2} and
/// {s3,s4} x {d3,d4} each pair carries `calls_per_pair` calls.
EventCorpus two_block(std::int64_t calls_per_pair = 25);

/// Every call picks a source and a destination uniformly.
EventCorpus uniform(std::int32_t sources, std::int32_t destinations, std::int64_t calls, std::uint64_t seed);

/// Source A calls on days 1..days_per_regime, source B on the following
/// days_per_regime days, `calls_per_day` calls each active day. Integer days.
EventCorpus two_regime(std::int64_t calls_per_day = 5, std::int32_t days_per_regime = 10);

struct Seasonal {
    std::int32_t sources = 20;
    std::int32_t destinations = 5;
    std::int32_t days = 56;  // starting 2024-01-01
    std::int64_t calls = 5000;
    std::uint64_t seed = 0;
};

/// Two groups of sources: the first calls mostly on weekdays, the second
/// mostly on weekends. ISO dates.
EventCorpus seasonal(const Seasonal& spec);

/// Every source calls every day at the same rate, destinations uniform.
EventCorpus constant_rate(std::int32_t sources, std::int32_t days, std::int64_t calls, std::uint64_t seed);

}  // namespace coclust::synth
