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

#include "jupylabel/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include "jupylabel/error.hpp"
#include "jupylabel/fileio.hpp"
#include "jupylabel/random.hpp"
#include "jupylabel/vectorizer.hpp"

namespace jupylabel {

namespace {

LabeledRecord record_from_json(const Json& j, std::size_t index) {
    const auto where = "record " + std::to_string(index);
    if (!j.is_object()) throw DatasetFormat(where + " is not an object");
    LabeledRecord r;
    auto src = j.find("source");
    if (src == j.end() || !(src->is_string() || src->is_array())) throw DatasetFormat(where + " has no source");
    r.source = join_multiline(*src);
    if (auto t = j.find("output_types"); t != j.end()) {
        if (!t->is_array()) throw DatasetFormat(where + " output_types is not an array");
        for (const auto& name : *t) {
            if (!name.is_string()) throw DatasetFormat(where + " output_types holds a non-string");
            r.output_types.push_back(parse_output_type(name.get<std::string>()));
        }
        std::sort(r.output_types.begin(), r.output_types.end());
        r.output_types.erase(std::unique(r.output_types.begin(), r.output_types.end()), r.output_types.end());
    }
    if (auto t = j.find("output_text"); t != j.end()) {
        if (!(t->is_string() || t->is_array())) throw DatasetFormat(where + " output_text is not text");
        r.output_text = join_multiline(*t);
    }
    auto labels = j.find("labels");
    if (labels == j.end() || !labels->is_array()) throw DatasetFormat(where + " has no labels array");
    for (const auto& name : *labels) {
        if (!name.is_string()) throw DatasetFormat(where + " labels holds a non-string");
        auto a = parse_activity(name.get<std::string>());
        if (!a) throw DatasetFormat(where + " has unknown label '" + name.get<std::string>() + "'");
        r.labels.insert(*a);
    }
    if (auto id = j.find("notebook_id"); id != j.end()) {
        if (!id->is_string()) throw DatasetFormat(where + " notebook_id is not a string");
        r.notebook_id = id->get<std::string>();
    }
    return r;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            pending = !out.empty();
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(c);
    }
    return out;
}

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

std::string LabeledCellDataset::fingerprint() const { return corpus_fingerprint({dataset_to_json(*this).dump()}); }

std::vector<std::string> LabeledCellDataset::notebook_ids() const {
    std::set<std::string> ids;
    for (const auto& r : records) ids.insert(r.notebook_id);
    return {ids.begin(), ids.end()};
}

LabeledCellDataset dataset_from_json(const Json& j, std::string name) {
    if (!j.is_array()) throw DatasetFormat("dataset root is not an array");
    LabeledCellDataset ds;
    ds.name = std::move(name);
    ds.records.reserve(j.size());
    std::size_t i = 0;
    for (const auto& r : j) ds.records.push_back(record_from_json(r, i++));
    return ds;
}

Json dataset_to_json(const LabeledCellDataset& ds) {
    Json out = Json::array();
    for (const auto& r : ds.records) {
        Json types = Json::array();
        for (auto t : r.output_types) types.push_back(std::string(to_string(t)));
        out.push_back(Json{
            {"source", r.source},
            {"output_types", std::move(types)},
            {"output_text", r.output_text},
            {"labels", r.labels.names()},
            {"notebook_id", r.notebook_id},
        });
    }
    return out;
}

LabeledCellDataset load_dataset(const std::string& path) {
    const auto text = read_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DatasetFormat(path + ": " + e.what());
    }
    return dataset_from_json(j, std::filesystem::path(path).stem().string());
}

void save_dataset(const LabeledCellDataset& ds, const std::string& path) {
    write_file_atomic(path, dataset_to_json(ds).dump(1, ' ', false, Json::error_handler_t::replace) + "\n");
}

LabeledCellDataset dataset_from_tagged_notebooks(const std::vector<std::pair<std::string, Notebook>>& notebooks,
                                                 std::string name) {
    LabeledCellDataset ds;
    ds.name = std::move(name);
    for (const auto& [id, nb] : notebooks) {
        for (const auto& cell : nb.cells) {
            if (cell.kind != CellKind::code) continue;
            LabeledRecord r;
            r.source = cell.source;
            r.notebook_id = id;
            std::vector<std::string> texts;
            for (const auto& o : cell.outputs) {
                r.output_types.push_back(o.output_type);
                if (o.output_type == OutputType::stream || o.output_type == OutputType::execute_result) {
                    texts.push_back(o.text_payload);
                }
            }
            std::sort(r.output_types.begin(), r.output_types.end());
            r.output_types.erase(std::unique(r.output_types.begin(), r.output_types.end()), r.output_types.end());
            for (std::size_t i = 0; i < texts.size(); ++i) r.output_text += (i ? "\n" : "") + texts[i];
            for (const auto& tag : cell.tags()) {
                if (tag.rfind("jupylabel:", 0) != 0) continue;
                auto a = parse_activity(std::string_view(tag).substr(10));
                if (!a) throw DatasetFormat(id + ": unknown label tag '" + tag + "'");
                r.labels.insert(*a);
            }
            ds.records.push_back(std::move(r));
        }
    }
    return ds;
}

std::pair<LabeledCellDataset, LabeledCellDataset> split(const LabeledCellDataset& ds, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw DegenerateSplit("train fraction must lie strictly between 0 and 1");
    }
    if (ds.records.empty()) throw DegenerateSplit("cannot split an empty dataset");

    std::mt19937_64 rng(spec.seed);
    std::vector<bool> to_train(ds.records.size(), false);
    if (spec.unit == SplitUnit::notebook) {
        auto ids = ds.notebook_ids();
        seeded_shuffle(ids, rng);
        const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(ids.size())));
        if (n_train == 0 || n_train >= ids.size()) {
            throw DegenerateSplit(std::to_string(ids.size()) + " notebooks cannot be split at fraction " +
                                  std::to_string(spec.train_fraction));
        }
        std::unordered_set<std::string> train_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
        for (std::size_t i = 0; i < ds.records.size(); ++i) to_train[i] = train_ids.count(ds.records[i].notebook_id) > 0;
    } else {
        std::vector<std::size_t> order(ds.records.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        seeded_shuffle(order, rng);
        const auto n_train =
            static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(order.size())));
        if (n_train == 0 || n_train >= order.size()) {
            throw DegenerateSplit(std::to_string(order.size()) + " cells cannot be split at fraction " +
                                  std::to_string(spec.train_fraction));
        }
        for (std::size_t k = 0; k < n_train; ++k) to_train[order[k]] = true;
    }

    std::pair<LabeledCellDataset, LabeledCellDataset> out;
    out.first.name = ds.name + ".train";
    out.second.name = ds.name + ".val";
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        (to_train[i] ? out.first : out.second).records.push_back(ds.records[i]);
    }
    return out;
}

LabeledCellDataset dedupe(const LabeledCellDataset& ds) {
    LabeledCellDataset out;
    out.name = ds.name;
    std::unordered_set<std::string> seen;
    for (const auto& r : ds.records) {
        if (seen.insert(collapse_whitespace(r.source)).second) out.records.push_back(r);
    }
    return out;
}

const std::vector<std::string>& default_blocklist() {
    static const std::vector<std::string> patterns = {
        "learntools", ".hint()", ".solution()", ".check()", "binder.bind(", "kaggle_secrets",
    };
    return patterns;
}

LabeledCellDataset filter_blocklist(const LabeledCellDataset& ds, const std::vector<std::string>& patterns) {
    LabeledCellDataset out;
    out.name = ds.name;
    for (const auto& r : ds.records) {
        const bool blocked = std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
            return !p.empty() && r.source.find(p) != std::string::npos;
        });
        if (!blocked) out.records.push_back(r);
    }
    return out;
}

LabelDistribution label_distribution(const LabeledCellDataset& ds) {
    struct Tally {
        std::size_t cells = 0;
        std::size_t unlabeled = 0;
        std::array<std::size_t, kActivityCount> per{};
    };
    std::map<std::string, Tally> by_notebook;
    for (const auto& r : ds.records) {
        auto& t = by_notebook[r.notebook_id];
        ++t.cells;
        if (r.labels.empty()) ++t.unlabeled;
        for (auto a : r.labels.labels()) ++t.per[index_of(a)];
    }
    LabelDistribution d;
    d.notebooks = by_notebook.size();
    d.cells = ds.records.size();
    if (by_notebook.empty()) return d;
    for (const auto& [id, t] : by_notebook) {
        for (std::size_t i = 0; i < kActivityCount; ++i) d.percent[i] += ratio(t.per[i], t.cells);
        d.unlabeled_percent += ratio(t.unlabeled, t.cells);
    }
    const auto n = static_cast<double>(by_notebook.size());
    for (auto& p : d.percent) p = 100.0 * p / n;
    d.unlabeled_percent = 100.0 * d.unlabeled_percent / n;
    return d;
}

Confusion confusion(const std::vector<LabelSet>& pred, const std::vector<LabelSet>& gold, ActivityLabel activity) {
    if (pred.size() != gold.size()) {
        throw LengthMismatch(std::to_string(pred.size()) + " predictions vs " + std::to_string(gold.size()) +
                             " gold labels");
    }
    Confusion c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i].contains(activity);
        const bool g = gold[i].contains(activity);
        if (p && g) {
            ++c.tp;
        } else if (p) {
            ++c.fp;
        } else if (g) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

ActivityMetrics activity_metrics(const Confusion& c) {
    ActivityMetrics m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.positive_precision = ratio(c.tp, c.tp + c.fp);
    m.positive_recall = ratio(c.tp, c.tp + c.fn);
    m.positive_f1 = harmonic(m.positive_precision, m.positive_recall);
    m.negative_precision = ratio(c.tn, c.tn + c.fn);
    m.negative_recall = ratio(c.tn, c.tn + c.fp);
    m.negative_f1 = harmonic(m.negative_precision, m.negative_recall);
    m.macro_precision = (m.positive_precision + m.negative_precision) / 2.0;
    m.macro_recall = (m.positive_recall + m.negative_recall) / 2.0;
    m.macro_f1 = (m.positive_f1 + m.negative_f1) / 2.0;
    return m;
}

MetricsReport metrics(const std::array<Confusion, kActivityCount>& per_activity) {
    MetricsReport r;
    r.confusion = per_activity;
    auto& o = r.overall;
    for (std::size_t i = 0; i < kActivityCount; ++i) {
        const auto m = activity_metrics(per_activity[i]);
        r.per_activity[i] = m;
        o.accuracy += m.accuracy;
        o.macro_precision += m.macro_precision;
        o.macro_recall += m.macro_recall;
        o.macro_f1 += m.macro_f1;
        o.positive_precision += m.positive_precision;
        o.positive_recall += m.positive_recall;
        o.positive_f1 += m.positive_f1;
        o.negative_precision += m.negative_precision;
        o.negative_recall += m.negative_recall;
        o.negative_f1 += m.negative_f1;
    }
    const double n = static_cast<double>(kActivityCount);
    for (double* v : {&o.accuracy, &o.macro_precision, &o.macro_recall, &o.macro_f1, &o.positive_precision,
                      &o.positive_recall, &o.positive_f1, &o.negative_precision, &o.negative_recall, &o.negative_f1}) {
        *v /= n;
    }
    return r;
}

MetricsReport evaluate_predictions(const std::vector<LabelSet>& pred, const std::vector<LabelSet>& gold) {
    std::array<Confusion, kActivityCount> c{};
    for (auto a : kAllActivities) c[index_of(a)] = confusion(pred, gold, a);
    return metrics(c);
}

namespace {

void append_row(std::string& out, std::string_view name, const ActivityMetrics& m) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-18.*s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n", static_cast<int>(name.size()),
                  name.data(), m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1, m.positive_precision,
                  m.positive_recall, m.positive_f1);
    out += buf;
}

Json metrics_json(const ActivityMetrics& m) {
    return Json{
        {"accuracy", m.accuracy},
        {"macro_precision", m.macro_precision},
        {"macro_recall", m.macro_recall},
        {"macro_f1", m.macro_f1},
        {"positive_precision", m.positive_precision},
        {"positive_recall", m.positive_recall},
        {"positive_f1", m.positive_f1},
        {"negative_precision", m.negative_precision},
        {"negative_recall", m.negative_recall},
        {"negative_f1", m.negative_f1},
    };
}

}  // namespace

std::string render_metrics(const MetricsReport& report) {
    std::string out;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-18s %8s %8s %8s %8s %8s %8s %8s\n", "activity", "acc", "macro_p", "macro_r",
                  "macro_f1", "pos_p", "pos_r", "pos_f1");
    out += buf;
    for (auto a : kAllActivities) append_row(out, to_string(a), report.per_activity[index_of(a)]);
    append_row(out, "overall", report.overall);
    return out;
}

Json metrics_to_json(const MetricsReport& report) {
    Json per = Json::object();
    for (auto a : kAllActivities) {
        const auto& c = report.confusion[index_of(a)];
        auto m = metrics_json(report.per_activity[index_of(a)]);
        m["confusion"] = Json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
        per[std::string(to_string(a))] = std::move(m);
    }
    return Json{{"per_activity", std::move(per)}, {"overall", metrics_json(report.overall)}};
}

std::string render_distribution(const LabelDistribution& dist) {
    std::string out;
    char buf[128];
    for (auto a : kAllActivities) {
        const auto name = to_string(a);
        std::snprintf(buf, sizeof buf, "%-18.*s %6.2f %%\n", static_cast<int>(name.size()), name.data(),
                      dist.percent[index_of(a)]);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-18s %6.2f %%\n", "not_labeled", dist.unlabeled_percent);
    out += buf;
    std::snprintf(buf, sizeof buf, "(%zu cells in %zu notebooks)\n", dist.cells, dist.notebooks);
    out += buf;
    return out;
}

}  // namespace jupylabel
