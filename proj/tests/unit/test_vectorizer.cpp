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

#include <regex>
#include <set>

#include "jupylabel/error.hpp"
#include "jupylabel/vectorizer.hpp"
#include "test_support.hpp"

using namespace jupylabel;

namespace {

std::vector<std::string> regex_tokens(const std::string& text, const std::string& pattern, bool lower) {
    const std::regex re(pattern);
    std::vector<std::string> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
        auto t = it->str();
        if (lower) {
            for (auto& c : t) {
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
            }
        }
        out.push_back(t);
    }
    return out;
}

std::string random_text(testsupport::CodeGen& g) {
    static const std::string alphabet = "abcXYZ_019 =[](){}.,:;'\"\n\t#-+*/\\\xc3\xa4";
    std::string s;
    const auto n = g.below(80);
    for (std::size_t i = 0; i < n; ++i) s += alphabet[g.below(alphabet.size())];
    return s;
}

}  // namespace

TEST_CASE("improved tokenizer examples") {
    const auto cfg = TokenizerConfig::improved();
    CHECK(tokenize("df['age'] = df2.fillna(0)", cfg) ==
          std::vector<std::string>{"df", "[", "age", "]", "=", "df", "fillna"});
    CHECK(tokenize("X_train", cfg) == std::vector<std::string>{"x", "train"});
    CHECK(tokenize("a == b", cfg) == std::vector<std::string>{"a", "=", "=", "b"});
    CHECK(tokenize("123 + 4.5", cfg).empty());
    CHECK(tokenize("", cfg).empty());
}

TEST_CASE("legacy tokenizer examples") {
    const auto cfg = TokenizerConfig::default_legacy();
    CHECK(tokenize("df['age'] = df2.fillna(0)", cfg) == std::vector<std::string>{"df", "age", "df2", "fillna"});
    CHECK(tokenize("X_train = x", cfg) == std::vector<std::string>{"x_train"});
    CHECK(tokenize("a == b", cfg).empty());
}

TEST_CASE("built-in scanners agree with std::regex (property)") {
    testsupport::CodeGen g(3);
    for (int i = 0; i < 3000; ++i) {
        const auto text = g.coin(0.5) ? g.cell() : random_text(g);
        CAPTURE(text);
        for (bool lower : {true, false}) {
            auto imp = TokenizerConfig::improved();
            imp.lowercase = lower;
            CHECK(tokenize(text, imp) == regex_tokens(text, std::string(kImprovedPattern), lower));
            auto leg = TokenizerConfig::default_legacy();
            leg.lowercase = lower;
            CHECK(tokenize(text, leg) == regex_tokens(text, std::string(kLegacyPattern), lower));
        }
    }
}

TEST_CASE("custom pattern goes through std::regex") {
    const auto cfg = TokenizerConfig::custom(R"([a-z]+\d)", false);
    CHECK(tokenize("abc1 de2 F3 x", cfg) == std::vector<std::string>{"abc1", "de2"});
    CHECK(tokenize("a b", TokenizerConfig::custom("x*")).empty());
}

TEST_CASE("tokenizer mode names round trip") {
    for (auto m : {TokenizerMode::improved, TokenizerMode::default_legacy, TokenizerMode::custom}) {
        CHECK(parse_tokenizer_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_tokenizer_mode("bogus"), ArtifactFormat);
}

TEST_CASE("vocabulary is lexicographic and covers the corpus") {
    const std::vector<std::string> corpus = {"b = a[0]", "c = B", "zeta"};
    const auto vocab = fit_vocabulary(corpus, TokenizerConfig::improved());
    CHECK(vocab.tokens() == std::vector<std::string>{"=", "[", "]", "a", "b", "c", "zeta"});
    CHECK(vocab.index_of("zeta") == 6);
    CHECK(vocab.index_of("missing") == -1);
    CHECK(vocab.fitted_on() == corpus_fingerprint(corpus));
    CHECK_THROWS_AS(fit_vocabulary({}, TokenizerConfig::improved()), EmptyCorpus);
    CHECK_THROWS_AS(fit_vocabulary({"123", "+"}, TokenizerConfig::improved()), EmptyVocabulary);
    CHECK_THROWS_AS(Vocabulary({"b", "a"}, ""), ArtifactFormat);
    CHECK_THROWS_AS(Vocabulary({"a", "a"}, ""), ArtifactFormat);
}

TEST_CASE("corpus fingerprint is FNV-1a with a document separator") {
    CHECK(corpus_fingerprint({}) == "cbf29ce484222325");
    // Reference values from a direct byte-by-byte evaluation.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : std::string("ab\xff" "c\xff")) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    CHECK(corpus_fingerprint({"ab", "c"}) == buf);
    CHECK(corpus_fingerprint({"ab", "c"}) != corpus_fingerprint({"a", "bc"}));
}

TEST_CASE("vectorize counts in-vocabulary tokens") {
    const auto cfg = TokenizerConfig::improved();
    const auto vocab = fit_vocabulary({"df = df[x]"}, cfg);
    const auto v = vectorize("df df unknown [ = =", vocab, cfg);
    CHECK(v.dimension == vocab.size());
    CHECK(v.at(static_cast<std::uint32_t>(vocab.index_of("df"))) == 2);
    CHECK(v.at(static_cast<std::uint32_t>(vocab.index_of("="))) == 2);
    CHECK(v.at(static_cast<std::uint32_t>(vocab.index_of("x"))) == 0);
    CHECK(v.total() == 5);
    CHECK(vectorize("", vocab, cfg) == CountVector{{}, static_cast<std::uint32_t>(vocab.size())});
}

TEST_CASE("vector invariants over the fixture corpus (property)") {
    const auto ds = testsupport::fixture_dataset();
    std::vector<std::string> corpus;
    for (const auto& r : ds.records) corpus.push_back(r.source);
    for (const auto& cfg : {TokenizerConfig::improved(), TokenizerConfig::default_legacy()}) {
        const auto vocab = fit_vocabulary({corpus.begin(), corpus.begin() + corpus.size() / 2}, cfg);
        for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
            const auto tokens = tokenize(corpus[i], cfg);
            const auto v = vectorize(corpus[i], vocab, cfg);
            CHECK(v.dimension == vocab.size());
            std::uint64_t in_vocab = 0;
            for (const auto& t : tokens) in_vocab += vocab.index_of(t) >= 0;
            CHECK(v.total() == in_vocab);
            for (std::size_t k = 0; k < v.entries.size(); ++k) {
                CHECK(v.entries[k].second >= 1);
                CHECK(v.entries[k].first < v.dimension);
                if (k) CHECK(v.entries[k - 1].first < v.entries[k].first);
            }
            // Counting is additive under whitespace-separated concatenation.
            const auto joined = vectorize(corpus[i] + "\n" + corpus[i + 1], vocab, cfg);
            const auto next = vectorize(corpus[i + 1], vocab, cfg);
            bool additive = true;
            for (std::uint32_t c = 0; c < v.dimension; ++c) additive &= joined.at(c) == v.at(c) + next.at(c);
            CHECK(additive);
            CHECK(vectorize_tokens(tokens, vocab) == v);
        }
    }
}
