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

// End-to-end training and evaluation over labelled datasets.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jupylabel/evalkit.hpp"
#include "jupylabel/gbdt.hpp"
#include "jupylabel/pipeline.hpp"

namespace jupylabel {

struct TrainingConfig {
    /// Inner split used to pick the learning rate.
    SplitSpec split;
    std::vector<double> learning_rate_grid = kDefaultLearningRateGrid;
    Hyperparams hyperparams;
    TokenizerConfig tokenizer;
    /// Refit each model on the whole input with the chosen rate. Otherwise the final model is
    /// the one trained on the inner training side.
    bool refit_on_full = true;
};

struct ActivityTrainingReport {
    ActivityLabel activity = ActivityLabel::setup_notebook;
    std::size_t train_positives = 0;
    std::size_t train_negatives = 0;
    std::size_t resampled_size = 0;
    std::size_t val_positives = 0;
    std::size_t val_negatives = 0;
    /// Empty when the inner split could not support a search (one class on a side).
    std::vector<std::pair<double, double>> grid_scores;
    double learning_rate = 0.0;
    double val_f1 = 0.0;
    std::size_t vocabulary_size = 0;
    /// Accuracy of the final model on its own (un-resampled) training records.
    double train_accuracy = 0.0;
};

struct TrainingReport {
    std::string dataset_fingerprint;
    std::size_t records = 0;
    std::size_t inner_train_records = 0;
    std::size_t inner_val_records = 0;
    std::vector<ActivityTrainingReport> activities;
    /// Human-readable record of what was resampled and what was left untouched.
    std::vector<std::string> audit;
};

struct TrainingResult {
    ActivityModelSet models;
    TrainingReport report;
};

/// Throws EmptyCorpus, EmptyVocabulary, SingleClass, DegenerateSplit or InvalidHyperparams.
TrainingResult train_model_set(const LabeledCellDataset& ds, const TrainingConfig& cfg);

nlohmann::json training_report_to_json(const TrainingReport& report);

struct Evaluation {
    std::vector<LabelSet> predicted;
    std::vector<LabelSet> gold;
    std::vector<CellClassification> rows;
    MetricsReport metrics;
};

/// Runs the classification pipeline on every record and scores it against the gold labels.
Evaluation evaluate_dataset(const LabeledCellDataset& ds, const ActivityModelSet& models,
                            const PipelineConfig& cfg = {});

}  // namespace jupylabel
