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

#include "jupylabel/training.hpp"

#include <optional>
#include <tuple>

#include "jupylabel/error.hpp"
#include "jupylabel/preprocess.hpp"

namespace jupylabel {

namespace {

std::vector<std::string> processed_sources(const LabeledCellDataset& ds) {
    std::vector<std::string> out;
    out.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        out.push_back(preprocess_source(r.source, r.output_types, r.output_text).processed_source);
    }
    return out;
}

std::vector<Example> examples_for(const std::vector<std::string>& texts, const LabeledCellDataset& ds,
                                  ActivityLabel a, const Vocabulary& vocab, const TokenizerConfig& tok) {
    std::vector<Example> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        out.push_back(Example{vectorize(texts[i], vocab, tok), ds.records[i].labels.contains(a)});
    }
    return out;
}

bool has_both_classes(const std::vector<Example>& ex) {
    bool pos = false, neg = false;
    for (const auto& e : ex) (e.label ? pos : neg) = true;
    return pos && neg;
}

std::pair<std::size_t, std::size_t> class_counts(const std::vector<Example>& ex) {
    std::size_t pos = 0;
    for (const auto& e : ex) pos += e.label ? 1 : 0;
    return {pos, ex.size() - pos};
}

double accuracy_on(const GbdtModel& m, const std::vector<Example>& ex) {
    if (ex.empty()) return 0.0;
    std::size_t ok = 0;
    for (const auto& e : ex) ok += predict(m, e.features) == e.label ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(ex.size());
}

}  // namespace

TrainingResult train_model_set(const LabeledCellDataset& ds, const TrainingConfig& cfg) {
    cfg.hyperparams.validate();
    if (ds.records.empty()) throw EmptyCorpus("training dataset has no records");

    TrainingResult result;
    auto& report = result.report;
    report.dataset_fingerprint = ds.fingerprint();
    report.records = ds.records.size();

    const auto [inner_train, inner_val] = split(ds, cfg.split);
    report.inner_train_records = inner_train.records.size();
    report.inner_val_records = inner_val.records.size();

    const auto all_texts = processed_sources(ds);
    const auto train_texts = processed_sources(inner_train);
    const auto val_texts = processed_sources(inner_val);
    const auto inner_vocab = fit_vocabulary(train_texts, cfg.tokenizer);
    const auto full_vocab = cfg.refit_on_full ? fit_vocabulary(all_texts, cfg.tokenizer) : inner_vocab;

    result.models.seed = cfg.hyperparams.seed;
    result.models.training_fingerprint = report.dataset_fingerprint;

    for (auto a : kAllActivities) {
        ActivityTrainingReport ar;
        ar.activity = a;
        const auto name = std::string(to_string(a));
        // Distinct but reproducible resampling stream per activity.
        const std::uint64_t resample_seed = cfg.hyperparams.seed * 31 + index_of(a);

        const auto train_ex = examples_for(train_texts, inner_train, a, inner_vocab, cfg.tokenizer);
        const auto val_ex = examples_for(val_texts, inner_val, a, inner_vocab, cfg.tokenizer);
        std::tie(ar.train_positives, ar.train_negatives) = class_counts(train_ex);
        std::tie(ar.val_positives, ar.val_negatives) = class_counts(val_ex);

        Hyperparams hp = cfg.hyperparams;
        std::optional<GbdtModel> inner_model;
        if (has_both_classes(train_ex) && ar.val_positives > 0) {
            const auto resampled = resample(train_ex, resample_seed);
            ar.resampled_size = resampled.size();
            const auto gs = grid_search_learning_rate(resampled, val_ex, cfg.learning_rate_grid, hp);
            ar.grid_scores = gs.scores;
            ar.val_f1 = gs.val_f1;
            hp.learning_rate = gs.learning_rate;
            report.audit.push_back(name + ": resampled inner train " + std::to_string(train_ex.size()) + " -> " +
                                   std::to_string(resampled.size()) + "; inner validation " +
                                   std::to_string(val_ex.size()) + " records left as-is");
            if (!cfg.refit_on_full) inner_model = train(resampled, hp);
        } else {
            report.audit.push_back(name + ": inner split lacks a class; learning rate kept at " +
                                   std::to_string(hp.learning_rate));
        }
        ar.learning_rate = hp.learning_rate;

        GbdtModel model;
        std::vector<Example> fit_ex;
        if (cfg.refit_on_full) {
            fit_ex = examples_for(all_texts, ds, a, full_vocab, cfg.tokenizer);
            const auto resampled = resample(fit_ex, resample_seed + 0x9e3779b97f4a7c15ULL);
            report.audit.push_back(name + ": refit on " + std::to_string(fit_ex.size()) + " records resampled to " +
                                   std::to_string(resampled.size()));
            model = train(resampled, hp);
            model.vocabulary = full_vocab;
        } else {
            fit_ex = train_ex;
            model = inner_model ? std::move(*inner_model) : train(resample(train_ex, resample_seed), hp);
            model.vocabulary = inner_vocab;
        }
        model.activity = a;
        model.tokenizer = cfg.tokenizer;
        ar.vocabulary_size = model.vocabulary.size();
        ar.train_accuracy = accuracy_on(model, fit_ex);
        result.models.models.emplace(a, std::move(model));
        report.activities.push_back(std::move(ar));
    }
    return result;
}

nlohmann::json training_report_to_json(const TrainingReport& report) {
    Json acts = Json::array();
    for (const auto& a : report.activities) {
        Json grid = Json::array();
        for (const auto& [rate, f1] : a.grid_scores) grid.push_back(Json{{"learning_rate", rate}, {"val_f1", f1}});
        acts.push_back(Json{
            {"activity", std::string(to_string(a.activity))},
            {"train_positives", a.train_positives},
            {"train_negatives", a.train_negatives},
            {"resampled_size", a.resampled_size},
            {"val_positives", a.val_positives},
            {"val_negatives", a.val_negatives},
            {"grid", std::move(grid)},
            {"learning_rate", a.learning_rate},
            {"val_f1", a.val_f1},
            {"vocabulary_size", a.vocabulary_size},
            {"train_accuracy", a.train_accuracy},
        });
    }
    return Json{
        {"dataset_fingerprint", report.dataset_fingerprint},
        {"records", report.records},
        {"inner_train_records", report.inner_train_records},
        {"inner_val_records", report.inner_val_records},
        {"activities", std::move(acts)},
        {"audit", report.audit},
    };
}

Evaluation evaluate_dataset(const LabeledCellDataset& ds, const ActivityModelSet& models, const PipelineConfig& cfg) {
    if (!models.complete()) {
        throw IncompleteModelSet("model set holds " + std::to_string(models.models.size()) + " of 8 activity models");
    }
    Evaluation ev;
    ev.rows.reserve(ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const auto& r = ds.records[i];
        ev.rows.push_back(classify_cell(preprocess_source(r.source, r.output_types, r.output_text, i), models, cfg));
        ev.predicted.push_back(ev.rows.back().labels);
        ev.gold.push_back(r.labels);
    }
    ev.metrics = evaluate_predictions(ev.predicted, ev.gold);
    return ev;
}

}  // namespace jupylabel
