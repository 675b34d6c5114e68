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

// Labelled datasets, splits and binary-per-activity evaluation metrics.
//
// Dataset file layout: a JSON array of records
//   {"source": "...", "output_types": ["stream"], "output_text": "...",
//    "labels": ["ingest_data"], "notebook_id": "nb-03"}
// `source` may also be an nbformat-style line array.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jupylabel/activity.hpp"
#include "jupylabel/notebook.hpp"

namespace jupylabel {

struct LabeledRecord {
    std::string source;
    std::vector<OutputType> output_types;
    std::string output_text;
    LabelSet labels;
    std::string notebook_id;

    friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

struct LabeledCellDataset {
    std::string name;
    std::vector<LabeledRecord> records;

    /// FNV-1a 64 over the canonical JSON form, hex.
    std::string fingerprint() const;
    std::vector<std::string> notebook_ids() const;

    friend bool operator==(const LabeledCellDataset&, const LabeledCellDataset&) = default;
};

/// Throws DatasetFormat.
LabeledCellDataset dataset_from_json(const nlohmann::json& j, std::string name = {});
nlohmann::json dataset_to_json(const LabeledCellDataset& ds);
/// Throws IoError or DatasetFormat. The dataset name is the file stem.
LabeledCellDataset load_dataset(const std::string& path);
void save_dataset(const LabeledCellDataset& ds, const std::string& path);

/// Builds records from notebooks whose code cells carry `jupylabel:<activity>` tags.
/// Each pair is (notebook id, notebook).
LabeledCellDataset dataset_from_tagged_notebooks(const std::vector<std::pair<std::string, Notebook>>& notebooks,
                                                 std::string name = {});

enum class SplitUnit { cell, notebook };

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 7;
    SplitUnit unit = SplitUnit::notebook;
};

/// Seeded partition; record order is preserved on both sides. Throws DegenerateSplit.
std::pair<LabeledCellDataset, LabeledCellDataset> split(const LabeledCellDataset& ds, const SplitSpec& spec);

/// Drops records whose whitespace-collapsed source equals an earlier record's.
LabeledCellDataset dedupe(const LabeledCellDataset& ds);

/// Substring patterns identifying notebook-platform interface code.
const std::vector<std::string>& default_blocklist();
/// Drops records whose source contains any of `patterns`.
LabeledCellDataset filter_blocklist(const LabeledCellDataset& ds, const std::vector<std::string>& patterns);

struct LabelDistribution {
    /// Percent per activity, averaged over notebooks.
    std::array<double, kActivityCount> percent{};
    double unlabeled_percent = 0.0;
    std::size_t notebooks = 0;
    std::size_t cells = 0;
};

LabelDistribution label_distribution(const LabeledCellDataset& ds);

struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Throws LengthMismatch.
Confusion confusion(const std::vector<LabelSet>& pred, const std::vector<LabelSet>& gold, ActivityLabel activity);

struct ActivityMetrics {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    /// Mean of the positive- and negative-class F1.
    double macro_f1 = 0.0;
    double positive_precision = 0.0;
    double positive_recall = 0.0;
    double positive_f1 = 0.0;
    double negative_precision = 0.0;
    double negative_recall = 0.0;
    double negative_f1 = 0.0;
};

struct MetricsReport {
    std::array<ActivityMetrics, kActivityCount> per_activity{};
    std::array<Confusion, kActivityCount> confusion{};
    /// Unweighted mean over the eight activities.
    ActivityMetrics overall;
};

/// Ratios with an empty denominator count as 0.
ActivityMetrics activity_metrics(const Confusion& c);
MetricsReport metrics(const std::array<Confusion, kActivityCount>& per_activity);
MetricsReport evaluate_predictions(const std::vector<LabelSet>& pred, const std::vector<LabelSet>& gold);

std::string render_metrics(const MetricsReport& report);
nlohmann::json metrics_to_json(const MetricsReport& report);
std::string render_distribution(const LabelDistribution& dist);

}  // namespace jupylabel
