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

#include <string>
#include <vector>

#include "coclust/corpus.hpp"
#include "coclust/count_matrix.hpp"
#include "coclust/hierarchy.hpp"
#include "coclust/optimizer.hpp"

// Versioned JSON documents for fitted models and dendrograms. Clusters are
// written as lists of entity labels, so a document can be loaded against any
// corpus with the same digest.

namespace coclust {

inline constexpr int kModelFormatVersion = 1;

std::string model_json(const FitResult& fit, const CountMatrix& matrix, const EventCorpus& corpus);

struct LoadedModel {
    CoclusterModel model;
    double cost = 0.0;
    double null_cost = 0.0;
    std::vector<double> restart_costs;
    std::string corpus_digest;
};

/// Throws InputError on a malformed document or a digest that differs from
/// `corpus.digest()`.
LoadedModel parse_model_json(const std::string& text, const CountMatrix& matrix, const EventCorpus& corpus);

/// FitResult view of a loaded model (empty trace, zero wall time).
FitResult to_fit_result(const LoadedModel& loaded);

std::string dendrogram_json(const MergeDendrogram& dendrogram, const EventCorpus& corpus);
/// Steps only; the leaf is taken from `leaf`.
MergeDendrogram parse_dendrogram_json(const std::string& text, const LoadedModel& leaf);

/// `clusters,tau,cost`
std::string curve_csv(const std::vector<CurvePoint>& curve);

}  // namespace coclust
