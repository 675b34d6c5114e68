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

#include "jupylabel/vectorizer.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <regex>
#include <set>

#include "jupylabel/error.hpp"

namespace jupylabel {

namespace {

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_word_char(char c) { return is_ascii_letter(c) || (c >= '0' && c <= '9') || c == '_'; }

void lower_in_place(std::string& s) {
    for (auto& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
}

void tokenize_improved(std::string_view text, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (is_ascii_letter(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ascii_letter(text[j])) ++j;
            out.emplace_back(text.substr(i, j - i));
            i = j;
        } else {
            if (c == '=' || c == '[' || c == ']') out.emplace_back(1, c);
            ++i;
        }
    }
}

// \b\w\w+\b selects exactly the maximal word-character runs of length >= 2.
void tokenize_legacy(std::string_view text, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_char(text[j])) ++j;
        if (j - i >= 2) out.emplace_back(text.substr(i, j - i));
        i = j;
    }
}

}  // namespace

TokenizerConfig TokenizerConfig::improved() { return {}; }

TokenizerConfig TokenizerConfig::default_legacy() {
    TokenizerConfig cfg;
    cfg.mode = TokenizerMode::default_legacy;
    cfg.pattern = std::string(kLegacyPattern);
    return cfg;
}

TokenizerConfig TokenizerConfig::custom(std::string pattern, bool lowercase) {
    TokenizerConfig cfg;
    cfg.mode = TokenizerMode::custom;
    cfg.pattern = std::move(pattern);
    cfg.lowercase = lowercase;
    return cfg;
}

std::string_view to_string(TokenizerMode m) noexcept {
    switch (m) {
        case TokenizerMode::improved: return "improved";
        case TokenizerMode::default_legacy: return "default_legacy";
        case TokenizerMode::custom: return "custom";
    }
    return "improved";
}

TokenizerMode parse_tokenizer_mode(std::string_view name) {
    if (name == "improved") return TokenizerMode::improved;
    if (name == "default_legacy") return TokenizerMode::default_legacy;
    if (name == "custom") return TokenizerMode::custom;
    throw ArtifactFormat("unknown tokenizer mode '" + std::string(name) + "'");
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
    std::vector<std::string> tokens;
    switch (cfg.mode) {
        case TokenizerMode::improved:
            tokenize_improved(text, tokens);
            break;
        case TokenizerMode::default_legacy:
            tokenize_legacy(text, tokens);
            break;
        case TokenizerMode::custom: {
            const std::regex re(cfg.pattern);
            const std::string owned(text);
            for (auto it = std::sregex_iterator(owned.begin(), owned.end(), re); it != std::sregex_iterator(); ++it) {
                if (it->length() > 0) tokens.push_back(it->str());
            }
            break;
        }
    }
    if (cfg.lowercase) {
        for (auto& t : tokens) lower_in_place(t);
    }
    return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_tokens, std::string fitted_on)
    : tokens_(std::move(sorted_tokens)), fitted_on_(std::move(fitted_on)) {
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (i > 0 && !(tokens_[i - 1] < tokens_[i])) {
            throw ArtifactFormat("vocabulary tokens are not strictly increasing at position " + std::to_string(i));
        }
        index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
    }
}

std::int64_t Vocabulary::index_of(std::string_view token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::uint32_t CountVector::at(std::uint32_t column) const noexcept {
    auto it = std::lower_bound(entries.begin(), entries.end(), column,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    return it != entries.end() && it->first == column ? it->second : 0;
}

std::uint64_t CountVector::total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& e : entries) sum += e.second;
    return sum;
}

std::string corpus_fingerprint(const std::vector<std::string>& corpus) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (const auto& doc : corpus) {
        for (char c : doc) mix(static_cast<unsigned char>(c));
        mix(0xFF);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Vocabulary fit_vocabulary(const std::vector<std::string>& corpus, const TokenizerConfig& cfg) {
    if (corpus.empty()) throw EmptyCorpus("cannot fit a vocabulary on zero documents");
    std::set<std::string> unique;
    for (const auto& doc : corpus) {
        for (auto& t : tokenize(doc, cfg)) unique.insert(std::move(t));
    }
    if (unique.empty()) throw EmptyVocabulary("no token matched in " + std::to_string(corpus.size()) + " documents");
    return Vocabulary(std::vector<std::string>(unique.begin(), unique.end()), corpus_fingerprint(corpus));
}

CountVector vectorize(std::string_view text, const Vocabulary& vocab, const TokenizerConfig& cfg) {
    return vectorize_tokens(tokenize(text, cfg), vocab);
}

CountVector vectorize_tokens(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& t : tokens) {
        const auto idx = vocab.index_of(t);
        if (idx >= 0) ++counts[static_cast<std::uint32_t>(idx)];
    }
    CountVector v;
    v.dimension = static_cast<std::uint32_t>(vocab.size());
    v.entries.assign(counts.begin(), counts.end());
    return v;
}

}  // namespace jupylabel
