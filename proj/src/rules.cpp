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

#include "jupylabel/rules.hpp"

#include <array>
#include <cctype>

#include "jupylabel/lexer.hpp"

namespace jupylabel {

std::string_view to_string(RuleId id) noexcept {
    switch (id) {
        case RuleId::R1_IMPORT: return "R1_IMPORT";
        case RuleId::R1_MAGIC: return "R1_MAGIC";
        case RuleId::R1_CONSTANT: return "R1_CONSTANT";
        case RuleId::R2_DISPLAY_DATA: return "R2_DISPLAY_DATA";
        case RuleId::R3_KEYWORD: return "R3_KEYWORD";
        case RuleId::R3_IMPLICIT_RETURN: return "R3_IMPLICIT_RETURN";
        case RuleId::R3_PRINT: return "R3_PRINT";
    }
    return "";
}

ActivityLabel rule_activity(RuleId id) noexcept {
    switch (id) {
        case RuleId::R1_IMPORT:
        case RuleId::R1_MAGIC:
        case RuleId::R1_CONSTANT: return ActivityLabel::setup_notebook;
        case RuleId::R2_DISPLAY_DATA: return ActivityLabel::visualize_data;
        case RuleId::R3_KEYWORD:
        case RuleId::R3_IMPLICIT_RETURN:
        case RuleId::R3_PRINT: return ActivityLabel::validate_data;
    }
    return ActivityLabel::validate_data;
}

std::string find_validation_keyword(std::string_view text) {
    constexpr std::array<std::string_view, 3> kKeywords = {"assert", "verify", "check"};
    std::size_t i = 0;
    while (i < text.size()) {
        if (!lexer::is_ident_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && lexer::is_ident_char(text[j])) ++j;
        const auto token = text.substr(i, j - i);
        for (auto kw : kKeywords) {
            if (token.size() != kw.size()) continue;
            bool same = true;
            for (std::size_t k = 0; k < kw.size() && same; ++k) {
                same = std::tolower(static_cast<unsigned char>(token[k])) == kw[k];
            }
            if (same) return std::string(token);
        }
        i = j;
    }
    return {};
}

std::vector<RuleHit> classify_by_rules(const PreprocessedCell& pc) {
    std::vector<RuleHit> hits;
    auto hit = [&](RuleId id, std::string evidence) {
        hits.push_back({rule_activity(id), id, std::move(evidence)});
    };

    const auto& f = pc.flags;
    if (f.has_setup_token) hit(RuleId::R1_IMPORT, "has_setup_token");
    if (f.has_magic) hit(RuleId::R1_MAGIC, "has_magic");
    if (f.has_constant_decl) hit(RuleId::R1_CONSTANT, "has_constant_decl");

    if (pc.has_output_type(OutputType::display_data)) hit(RuleId::R2_DISPLAY_DATA, "output_type=display_data");

    if (auto kw = find_validation_keyword(pc.processed_source); !kw.empty()) {
        hit(RuleId::R3_KEYWORD, "source:" + kw);
    } else if (auto out_kw = find_validation_keyword(pc.output_text); !out_kw.empty()) {
        hit(RuleId::R3_KEYWORD, "output:" + out_kw);
    }
    if (f.has_validation_token) hit(RuleId::R3_IMPLICIT_RETURN, "has_validation_token");
    if (f.has_print_call) hit(RuleId::R3_PRINT, "has_print_call");
    return hits;
}

LabelSet rule_labels(const std::vector<RuleHit>& hits) {
    LabelSet out;
    for (const auto& h : hits) out.insert(h.label);
    return out;
}

}  // namespace jupylabel
