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

#include "jupylabel/pipeline.hpp"

#include <cmath>
#include <map>

#include "jupylabel/error.hpp"

namespace jupylabel {

std::string_view to_string(Routing r) noexcept {
    return r == Routing::cell_level ? "cell_level" : "per_activity";
}

std::string_view to_string(AnnotationMode m) noexcept { return m == AnnotationMode::tags ? "tags" : "headers"; }

std::string_view to_string(Provenance p) noexcept { return p == Provenance::model ? "model" : "rule"; }

std::optional<Routing> parse_routing(std::string_view name) noexcept {
    if (name == "per_activity") return Routing::per_activity;
    if (name == "cell_level") return Routing::cell_level;
    return std::nullopt;
}

std::optional<AnnotationMode> parse_annotation_mode(std::string_view name) noexcept {
    if (name == "headers") return AnnotationMode::headers;
    if (name == "tags") return AnnotationMode::tags;
    return std::nullopt;
}

const CellClassification* ClassificationTable::find(std::size_t stable_index) const noexcept {
    for (const auto& r : rows) {
        if (r.stable_index == stable_index) return &r;
    }
    return nullptr;
}

CellClassification classify_cell(const PreprocessedCell& pc, const ActivityModelSet& models,
                                 const PipelineConfig& cfg) {
    CellClassification row;
    row.stable_index = pc.stable_index;
    row.output_types = pc.output_types;
    if (cfg.use_rules) row.rule_hits = classify_by_rules(pc);

    const LabelSet by_rule = rule_labels(row.rule_hits);
    const bool skip_models = cfg.routing == Routing::cell_level && !by_rule.empty();

    // Models usually share one tokenizer; tokenise once per distinct config.
    std::vector<std::pair<const TokenizerConfig*, std::vector<std::string>>> token_cache;
    auto tokens_for = [&](const TokenizerConfig& tc) -> const std::vector<std::string>& {
        for (const auto& [cfg_ptr, toks] : token_cache) {
            if (*cfg_ptr == tc) return toks;
        }
        token_cache.emplace_back(&tc, tokenize(pc.processed_source, tc));
        return token_cache.back().second;
    };

    for (auto a : kAllActivities) {
        const auto i = index_of(a);
        if (by_rule.contains(a)) {
            row.labels.insert(a);
            row.provenance[i] = Provenance::rule;
            continue;
        }
        if (skip_models) continue;
        const auto& model = models.at(a);
        const double p = predict_proba(model, vectorize_tokens(tokens_for(model.tokenizer), model.vocabulary));
        row.probabilities[i] = p;
        if (p >= cfg.threshold) {
            row.labels.insert(a);
            row.provenance[i] = Provenance::model;
        }
    }
    row.unlabeled = row.labels.empty();
    return row;
}

ClassificationTable classify_notebook(const Notebook& nb, const ActivityModelSet& models, const PipelineConfig& cfg) {
    if (!models.complete()) {
        throw IncompleteModelSet("model set holds " + std::to_string(models.models.size()) + " of 8 activity models");
    }
    ClassificationTable table;
    for (const auto& cell : nb.cells) {
        if (cell.kind != CellKind::code) continue;
        table.rows.push_back(classify_cell(preprocess_cell(cell), models, cfg));
    }
    return table;
}

std::string header_text(LabelSet labels) {
    std::string out = "## ";
    bool first = true;
    for (const auto& name : labels.names()) {
        if (!first) out += " | ";
        out += name;
        first = false;
    }
    return out;
}

bool is_generated_cell(const Cell& cell) {
    if (cell.kind != CellKind::markdown || !cell.metadata.is_object()) return false;
    auto it = cell.metadata.find(std::string(kGeneratorKey));
    if (it == cell.metadata.end() || !it->is_object()) return false;
    auto g = it->find("generated");
    return g != it->end() && g->is_boolean() && g->get<bool>();
}

namespace {

bool is_generated_tag(const Json& t) {
    return t.is_string() && t.get_ref<const std::string&>().rfind(kTagPrefix, 0) == 0;
}

// Set on code cells whose tag list was created by tag annotation, so strip can drop it again.
constexpr std::string_view kCreatedTagsKey = "created_tags";

bool take_created_tags_marker(Cell& cell) {
    auto it = cell.metadata.find(std::string(kGeneratorKey));
    if (it == cell.metadata.end() || !it->is_object() || !it->contains(kCreatedTagsKey)) return false;
    const bool created = (*it)[std::string(kCreatedTagsKey)] == true;
    it->erase(std::string(kCreatedTagsKey));
    if (it->empty()) cell.metadata.erase(std::string(kGeneratorKey));
    return created;
}

// Drops jupylabel: tags. The tag list itself goes only if annotation created it.
void strip_tags(Cell& cell) {
    if (!cell.metadata.is_object()) return;
    const bool created = take_created_tags_marker(cell);
    auto it = cell.metadata.find("tags");
    if (it == cell.metadata.end() || !it->is_array()) return;
    Json kept = Json::array();
    for (const auto& t : *it) {
        if (!is_generated_tag(t)) kept.push_back(t);
    }
    if (kept.empty() && created) {
        cell.metadata.erase("tags");
    } else {
        *it = std::move(kept);
    }
}

void add_tags(Cell& cell, LabelSet labels) {
    if (!cell.metadata.is_object()) cell.metadata = Json::object();
    auto it = cell.metadata.find("tags");
    if (it == cell.metadata.end() || !it->is_array()) {
        cell.metadata["tags"] = Json::array();
        cell.metadata[std::string(kGeneratorKey)][std::string(kCreatedTagsKey)] = true;
    }
    auto& tags = cell.metadata["tags"];
    for (const auto& name : labels.names()) tags.push_back(std::string(kTagPrefix) + name);
}

// `ordinal` counts code cells only, so the id survives header insertion.
Cell make_header_cell(const Cell& code_cell, std::size_t ordinal, LabelSet labels, int format_minor) {
    Cell h;
    h.kind = CellKind::markdown;
    h.source = header_text(labels);
    h.metadata = Json::object();
    h.metadata[std::string(kGeneratorKey)] = Json{{"generated", true}};
    if (format_minor >= 5) {
        std::string base;
        if (auto id = code_cell.extra.find("id"); id != code_cell.extra.end() && id->is_string()) {
            base = id->get<std::string>();
        } else {
            base = "code-" + std::to_string(ordinal);
        }
        // nbformat ids are limited to 64 characters.
        h.extra["id"] = ("jl-" + base).substr(0, 64);
    }
    return h;
}

void check_table(const Notebook& nb, const ClassificationTable& table) {
    std::size_t code = 0;
    for (const auto& c : nb.cells) {
        if (c.kind != CellKind::code) continue;
        if (code >= table.rows.size() || table.rows[code].stable_index != c.stable_index) {
            throw TableMismatch("no table row for code cell " + std::to_string(c.stable_index));
        }
        ++code;
    }
    if (code != table.rows.size()) {
        throw TableMismatch("table has " + std::to_string(table.rows.size()) + " rows, notebook has " +
                            std::to_string(code) + " code cells");
    }
}

}  // namespace

Notebook annotate_notebook(const Notebook& nb, const ClassificationTable& table, AnnotationMode mode) {
    check_table(nb, table);
    Notebook out = nb;
    out.cells.clear();
    std::size_t row = 0;
    for (const auto& cell : nb.cells) {
        if (is_generated_cell(cell)) continue;
        Cell c = cell;
        if (c.kind == CellKind::code) {
            strip_tags(c);
            const std::size_t ordinal = row++;
            const LabelSet labels = table.rows[ordinal].labels;
            if (!labels.empty()) {
                if (mode == AnnotationMode::headers) {
                    out.cells.push_back(make_header_cell(c, ordinal, labels, nb.format_minor));
                } else {
                    add_tags(c, labels);
                }
            }
        }
        out.cells.push_back(std::move(c));
    }
    out.renumber();
    return out;
}

Notebook strip_annotations(const Notebook& nb) {
    Notebook out = nb;
    out.cells.clear();
    for (const auto& cell : nb.cells) {
        if (is_generated_cell(cell)) continue;
        Cell c = cell;
        strip_tags(c);
        out.cells.push_back(std::move(c));
    }
    out.renumber();
    return out;
}

namespace {

double round6(double p) { return std::round(p * 1e6) / 1e6; }

}  // namespace

Json table_to_json(const ClassificationTable& table) {
    Json cells = Json::array();
    for (const auto& r : table.rows) {
        Json types = Json::array();
        for (auto t : r.output_types) types.push_back(std::string(to_string(t)));
        Json hits = Json::array();
        for (const auto& h : r.rule_hits) {
            hits.push_back(Json{{"rule_id", std::string(to_string(h.rule_id))},
                                {"label", std::string(to_string(h.label))},
                                {"evidence", h.evidence}});
        }
        Json probs = Json::object();
        Json prov = Json::object();
        for (auto a : kAllActivities) {
            const auto i = index_of(a);
            if (r.probabilities[i]) probs[std::string(to_string(a))] = round6(*r.probabilities[i]);
            if (r.provenance[i]) prov[std::string(to_string(a))] = std::string(to_string(*r.provenance[i]));
        }
        cells.push_back(Json{
            {"stable_index", r.stable_index},
            {"output_types", std::move(types)},
            {"rule_hits", std::move(hits)},
            {"probabilities", std::move(probs)},
            {"labels", r.labels.names()},
            {"provenance", std::move(prov)},
            {"unlabeled", r.unlabeled},
        });
    }
    return Json{{"format", "jupylabel-table"}, {"cells", std::move(cells)}};
}

namespace {

ActivityLabel activity_or_throw(const std::string& name) {
    auto a = parse_activity(name);
    if (!a) throw ArtifactFormat("unknown activity '" + name + "' in table");
    return *a;
}

RuleId rule_or_throw(const std::string& name) {
    static const std::map<std::string, RuleId, std::less<>> ids = {
        {"R1_IMPORT", RuleId::R1_IMPORT},
        {"R1_MAGIC", RuleId::R1_MAGIC},
        {"R1_CONSTANT", RuleId::R1_CONSTANT},
        {"R2_DISPLAY_DATA", RuleId::R2_DISPLAY_DATA},
        {"R3_KEYWORD", RuleId::R3_KEYWORD},
        {"R3_IMPLICIT_RETURN", RuleId::R3_IMPLICIT_RETURN},
        {"R3_PRINT", RuleId::R3_PRINT},
    };
    auto it = ids.find(name);
    if (it == ids.end()) throw ArtifactFormat("unknown rule id '" + name + "' in table");
    return it->second;
}

}  // namespace

ClassificationTable table_from_json(const Json& j) {
    if (!j.is_object() || j.value("format", std::string{}) != "jupylabel-table") {
        throw ArtifactFormat("not a jupylabel classification table");
    }
    ClassificationTable table;
    try {
        for (const auto& c : j.at("cells")) {
            CellClassification r;
            r.stable_index = c.at("stable_index").get<std::size_t>();
            for (const auto& t : c.at("output_types")) r.output_types.push_back(parse_output_type(t.get<std::string>()));
            for (const auto& h : c.at("rule_hits")) {
                r.rule_hits.push_back(RuleHit{activity_or_throw(h.at("label").get<std::string>()),
                                              rule_or_throw(h.at("rule_id").get<std::string>()),
                                              h.at("evidence").get<std::string>()});
            }
            for (const auto& [name, p] : c.at("probabilities").items()) {
                r.probabilities[index_of(activity_or_throw(name))] = p.get<double>();
            }
            for (const auto& name : c.at("labels")) r.labels.insert(activity_or_throw(name.get<std::string>()));
            for (const auto& [name, p] : c.at("provenance").items()) {
                const auto s = p.get<std::string>();
                if (s != "rule" && s != "model") throw ArtifactFormat("unknown provenance '" + s + "'");
                r.provenance[index_of(activity_or_throw(name))] = s == "rule" ? Provenance::rule : Provenance::model;
            }
            r.unlabeled = c.at("unlabeled").get<bool>();
            table.rows.push_back(std::move(r));
        }
    } catch (const Json::exception& e) {
        throw ArtifactFormat(e.what());
    }
    return table;
}

}  // namespace jupylabel
