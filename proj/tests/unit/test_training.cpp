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

#include <doctest.h>

#include "jupylabel/error.hpp"
#include "jupylabel/model_io.hpp"
#include "jupylabel/training.hpp"
#include "test_support.hpp"

using namespace jupylabel;

namespace {

LabeledCellDataset small_dataset() {
    auto ds = dedupe(filter_blocklist(testsupport::fixture_dataset(), default_blocklist()));
    ds.records.resize(160);
    return ds;
}

TrainingConfig quick_config() {
    TrainingConfig cfg;
    cfg.hyperparams.rounds = 15;
    cfg.learning_rate_grid = {0.1, 0.3};
    return cfg;
}

}  // namespace

TEST_CASE("training produces a complete, self-describing model set") {
    const auto ds = small_dataset();
    const auto result = train_model_set(ds, quick_config());
    const auto& set = result.models;
    CHECK(set.complete());
    CHECK(set.training_fingerprint == ds.fingerprint());
    CHECK(set.seed == 7);
    const auto& report = result.report;
    CHECK(report.records == ds.records.size());
    CHECK(report.inner_train_records + report.inner_val_records == ds.records.size());
    REQUIRE(report.activities.size() == kActivityCount);
    CHECK_FALSE(report.audit.empty());
    for (const auto& a : report.activities) {
        CAPTURE(to_string(a.activity));
        const auto& m = set.at(a.activity);
        CHECK(m.activity == a.activity);
        CHECK(m.trees.size() == 15);
        CHECK(m.dimension == m.vocabulary.size());
        CHECK(a.vocabulary_size == m.vocabulary.size());
        CHECK(m.tokenizer == TokenizerConfig::improved());
        CHECK((a.learning_rate == 0.1 || a.learning_rate == 0.3));
        CHECK(m.learning_rate == a.learning_rate);
        if (!a.grid_scores.empty()) {
            CHECK(a.resampled_size == 2 * std::max(a.train_positives, a.train_negatives));
            CHECK(a.grid_scores.size() == 2);
        }
        CHECK(a.train_accuracy >= 0.9);
    }
    const auto j = training_report_to_json(report);
    CHECK(j.at("activities").size() == kActivityCount);
}

TEST_CASE("training is reproducible to the byte") {
    const auto ds = small_dataset();
    CHECK(serialize_model_set(train_model_set(ds, quick_config()).models) ==
          serialize_model_set(train_model_set(ds, quick_config()).models));
}

TEST_CASE("training rejects unusable input") {
    LabeledCellDataset empty;
    CHECK_THROWS(train_model_set(empty, quick_config()));
    auto cfg = quick_config();
    cfg.learning_rate_grid.clear();
    CHECK_THROWS_AS(train_model_set(small_dataset(), cfg), InvalidHyperparams);

    // An activity with no positive example anywhere cannot be learnt.
    auto ds = small_dataset();
    for (auto& r : ds.records) r.labels.erase(ActivityLabel::transfer_results);
    CHECK_THROWS_AS(train_model_set(ds, quick_config()), SingleClass);
}

TEST_CASE("evaluating a dataset lines rows up with records") {
    const auto ds = small_dataset();
    const auto set = train_model_set(ds, quick_config()).models;
    const auto ev = evaluate_dataset(ds, set);
    REQUIRE(ev.rows.size() == ds.records.size());
    CHECK(ev.predicted.size() == ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(ev.rows[i].stable_index == i);
        CHECK(ev.gold[i] == ds.records[i].labels);
        CHECK(ev.predicted[i] == ev.rows[i].labels);
    }
    CHECK(ev.metrics.overall.macro_f1 > 0.8);
    PipelineConfig no_rules;
    no_rules.use_rules = false;
    const auto ablated = evaluate_dataset(ds, set, no_rules);
    for (const auto& r : ablated.rows) CHECK(r.rule_hits.empty());
}
