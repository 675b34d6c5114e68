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

// Binary gradient-boosted decision trees with second-order (Newton) boosting on the
// logistic loss. Trees are grown greedily with exact split enumeration over the observed
// count values. A sample goes left iff its feature value is < threshold, so absent (zero)
// counts always take the left branch when the threshold is positive.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jupylabel/activity.hpp"
#include "jupylabel/vectorizer.hpp"

namespace jupylabel {

struct Hyperparams {
    int rounds = 100;
    int max_depth = 6;
    double learning_rate = 0.3;
    double l2_lambda = 1.0;
    double min_child_weight = 1.0;
    double gamma = 0.0;
    std::uint64_t seed = 7;

    /// Throws InvalidHyperparams when a field is out of range.
    void validate() const;

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct TreeNode {
    /// -1 marks a leaf.
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    /// Leaf output in log-odds, before the learning-rate scale.
    double weight = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Flat tree; nodes[0] is the root.
struct Tree {
    std::vector<TreeNode> nodes;

    /// Raw (unscaled) leaf weight reached by `v`.
    double leaf_weight(const CountVector& v) const;
    int depth() const;
    std::size_t leaf_count() const;

    friend bool operator==(const Tree&, const Tree&) = default;
};

struct GbdtModel {
    ActivityLabel activity = ActivityLabel::setup_notebook;
    std::vector<Tree> trees;
    double base_score = 0.0;
    double learning_rate = 0.3;
    /// Expected CountVector dimension (the vocabulary size once one is attached).
    std::uint32_t dimension = 0;
    Vocabulary vocabulary;
    TokenizerConfig tokenizer;
    Hyperparams hyperparams;

    /// base_score + learning_rate * sum of leaf weights. Throws DimensionMismatch.
    double margin(const CountVector& v) const;

    friend bool operator==(const GbdtModel&, const GbdtModel&) = default;
};

struct Example {
    CountVector features;
    bool label = false;
};

/// Numerically safe logistic function, strictly inside (0, 1).
double sigmoid(double x) noexcept;

/// Random oversampling with replacement of the minority class until both classes have the
/// majority's count, followed by a seeded shuffle. Throws SingleClass.
std::vector<Example> resample(const std::vector<Example>& examples, std::uint64_t seed);

/// Throws SingleClass, DimensionMismatch or InvalidHyperparams. The returned model has no
/// vocabulary attached; the caller owns feature extraction.
GbdtModel train(const std::vector<Example>& examples, const Hyperparams& hp);

double predict_proba(const GbdtModel& model, const CountVector& v);
bool predict(const GbdtModel& model, const CountVector& v, double threshold = 0.5);

/// Convenience: tokenise + vectorise `text` with the model's own vocabulary first.
double predict_proba_text(const GbdtModel& model, std::string_view text);

inline const std::vector<double> kDefaultLearningRateGrid = {0.05, 0.1, 0.2, 0.3};

struct GridSearchResult {
    double learning_rate = 0.0;
    double val_f1 = 0.0;
    /// (learning rate, validation F1) for every grid value, ascending by rate.
    std::vector<std::pair<double, double>> scores;
};

/// Positive-class F1 of `model` on `examples` at the 0.5 threshold (0 when undefined).
double positive_f1(const GbdtModel& model, const std::vector<Example>& examples);

/// Trains one model per grid value and keeps the rate with the best validation F1; ties go to
/// the smaller rate. Throws InvalidHyperparams on an empty grid.
GridSearchResult grid_search_learning_rate(const std::vector<Example>& train_split,
                                           const std::vector<Example>& val_split,
                                           const std::vector<double>& grid, const Hyperparams& hp_base);

inline constexpr int kArtifactFormatVersion = 1;

struct ActivityModelSet {
    std::map<ActivityLabel, GbdtModel> models;
    int version = kArtifactFormatVersion;
    std::string training_fingerprint;
    std::uint64_t seed = 0;

    bool complete() const noexcept;
    /// Throws IncompleteModelSet when the activity is missing.
    const GbdtModel& at(ActivityLabel a) const;

    friend bool operator==(const ActivityModelSet&, const ActivityModelSet&) = default;
};

}  // namespace jupylabel
