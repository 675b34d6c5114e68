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

// Bag-of-words features over pre-processed code.
//
// The improved token pattern is `[a-zA-Z]{1,}|[=\[\]]`: letter runs plus the three operator
// characters that separate data processing from everything else. The legacy pattern is the
// usual `\b\w\w+\b`. Both built-in patterns are matched by hand-written scanners; any other
// pattern goes through std::regex.

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace jupylabel {

enum class TokenizerMode { improved, default_legacy, custom };

inline constexpr std::string_view kImprovedPattern = R"([a-zA-Z]{1,}|[=\[\]])";
inline constexpr std::string_view kLegacyPattern = R"(\b\w\w+\b)";

struct TokenizerConfig {
    TokenizerMode mode = TokenizerMode::improved;
    std::string pattern = std::string(kImprovedPattern);
    bool lowercase = true;

    static TokenizerConfig improved();
    static TokenizerConfig default_legacy();
    static TokenizerConfig custom(std::string pattern, bool lowercase = true);

    friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

std::string_view to_string(TokenizerMode m) noexcept;
TokenizerMode parse_tokenizer_mode(std::string_view name);

/// All non-overlapping left-to-right matches of the configured pattern.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

class Vocabulary {
public:
    Vocabulary() = default;
    /// `sorted_tokens` must be strictly increasing; index = position.
    Vocabulary(std::vector<std::string> sorted_tokens, std::string fitted_on);

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& fitted_on() const noexcept { return fitted_on_; }
    /// -1 when out of vocabulary.
    std::int64_t index_of(std::string_view token) const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.tokens_ == b.tokens_ && a.fitted_on_ == b.fitted_on_;
    }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
    std::string fitted_on_;
};

/// Sparse count vector. Entries sorted by column, counts >= 1, columns < dimension.
struct CountVector {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
    std::uint32_t dimension = 0;

    /// Count stored for `column` (0 when absent).
    std::uint32_t at(std::uint32_t column) const noexcept;
    std::uint64_t total() const noexcept;

    friend bool operator==(const CountVector&, const CountVector&) = default;
};

/// Throws EmptyCorpus for an empty corpus and EmptyVocabulary when no token matched.
Vocabulary fit_vocabulary(const std::vector<std::string>& corpus, const TokenizerConfig& cfg);

/// Out-of-vocabulary tokens are dropped.
CountVector vectorize(std::string_view text, const Vocabulary& vocab, const TokenizerConfig& cfg);

/// Counts already-tokenised input; lets callers tokenise once for several vocabularies.
CountVector vectorize_tokens(const std::vector<std::string>& tokens, const Vocabulary& vocab);

/// 64-bit FNV-1a over the corpus (documents separated by a 0xFF byte), rendered as hex.
std::string corpus_fingerprint(const std::vector<std::string>& corpus);

}  // namespace jupylabel
