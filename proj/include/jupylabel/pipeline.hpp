/*
 * Copyright 2026 The JupyLabel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// The four-stage pipe: pre-processor -> rule classifier -> per-activity tree models ->
// post-processor (annotation). The intermediate per-cell record is the classification table.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jupylabel/activity.hpp"
#include "jupylabel/gbdt.hpp"
#include "jupylabel/notebook.hpp"
#include "jupylabel/preprocess.hpp"
#include "jupylabel/rules.hpp"

namespace jupylabel {

enum class Routing {
    /// Models run for every activity no rule asserted.
    per_activity,
    /// Models run only for cells on which no rule fired at all.
    cell_level,
};

enum class AnnotationMode { headers, tags };

enum class Provenance { rule, model };

std::string_view to_string(Routing r) noexcept;
std::string_view to_string(AnnotationMode m) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::optional<Routing> parse_routing(std::string_view name) noexcept;
std::optional<AnnotationMode> parse_annotation_mode(std::string_view name) noexcept;

struct PipelineConfig {
    Routing routing = Routing::per_activity;
    /// false disables the rule stage entirely (tree models decide every activity).
    bool use_rules = true;
    double threshold = 0.5;
};

struct CellClassification {
    std::size_t stable_index = 0;
    std::vector<OutputType> output_types;
    std::vector<RuleHit> rule_hits;
    /// Set exactly for the activities whose model ran.
    std::array<std::optional<double>, kActivityCount> probabilities{};
    LabelSet labels;
    std::array<std::optional<Provenance>, kActivityCount> provenance{};
    bool unlabeled = true;

    bool model_evaluated(ActivityLabel a) const noexcept { return probabilities[index_of(a)].has_value(); }
    LabelSet rule_positive() const { return rule_labels(rule_hits); }

    friend bool operator==(const CellClassification&, const CellClassification&) = default;
};

struct ClassificationTable {
    /// One row per code cell, ascending stable_index.
    std::vector<CellClassification> rows;

    const CellClassification* find(std::size_t stable_index) const noexcept;

    friend bool operator==(const ClassificationTable&, const ClassificationTable&) = default;
};

/// Classifies one pre-processed cell. Throws IncompleteModelSet when a needed model is absent.
CellClassification classify_cell(const PreprocessedCell& pc, const ActivityModelSet& models,
                                 const PipelineConfig& cfg = {});

/// Markdown and raw cells are skipped.
ClassificationTable classify_notebook(const Notebook& nb, const ActivityModelSet& models,
                                      const PipelineConfig& cfg = {});

/// "## ingest_data | process_data"
std::string header_text(LabelSet labels);
inline constexpr std::string_view kTagPrefix = "jupylabel:";
inline constexpr std::string_view kGeneratorKey = "jupylabel";

/// True for markdown cells carrying the generator marker in their metadata.
bool is_generated_cell(const Cell& cell);

/// Previous annotations are replaced, never stacked. Throws TableMismatch.
Notebook annotate_notebook(const Notebook& nb, const ClassificationTable& table, AnnotationMode mode);

/// Removes generated header cells and jupylabel: tags; everything else is kept.
Notebook strip_annotations(const Notebook& nb);

/// Interchange form; probabilities rounded to 6 decimal places.
nlohmann::json table_to_json(const ClassificationTable& table);
/// Throws ArtifactFormat.
ClassificationTable table_from_json(const nlohmann::json& j);

}  // namespace jupylabel
