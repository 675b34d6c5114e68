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

#include "jupylabel/lexer.hpp"
#include "test_support.hpp"

using namespace jupylabel::lexer;

namespace {

std::vector<std::pair<SpanKind, std::string>> kinds(std::string_view text) {
    std::vector<std::pair<SpanKind, std::string>> out;
    for (const auto& s : lex(text)) out.emplace_back(s.kind, std::string(text.substr(s.begin, s.size())));
    return out;
}

}  // namespace

TEST_CASE("code, strings and comments are separated") {
    const auto k = kinds("x = 'a#b'  # note\ny");
    REQUIRE(k.size() == 5);
    CHECK(k[0] == std::pair{SpanKind::code, std::string("x = ")});
    CHECK(k[1] == std::pair{SpanKind::string, std::string("'a#b'")});
    CHECK(k[2] == std::pair{SpanKind::code, std::string("  ")});
    CHECK(k[3] == std::pair{SpanKind::comment, std::string("# note")});
    CHECK(k[4] == std::pair{SpanKind::code, std::string("\ny")});
}

TEST_CASE("string prefixes and triple quotes") {
    const std::string text = "a = rb'\\d' + f\"{x}\" + '''t\n# in'''";
    const auto spans = lex(text);
    std::vector<Span> strings;
    for (const auto& s : spans) {
        if (s.kind == SpanKind::string) strings.push_back(s);
    }
    REQUIRE(strings.size() == 3);
    CHECK(strings[0].is_raw);
    CHECK_FALSE(strings[0].is_fstring);
    CHECK(text.substr(strings[0].content_begin, strings[0].content_end - strings[0].content_begin) == "\\d");
    CHECK(strings[1].is_fstring);
    CHECK(text.substr(strings[2].content_begin, strings[2].content_end - strings[2].content_begin) == "t\n# in");
    for (const auto& s : strings) CHECK(s.terminated);
}

TEST_CASE("identifiers ending in a prefix letter are not string prefixes") {
    const auto k = kinds("buf'x'");
    REQUIRE(k.size() == 2);
    CHECK(k[0].second == "buf");
    CHECK(k[1].second == "'x'");
}

TEST_CASE("escaped quotes stay inside the literal") {
    const auto k = kinds(R"(s = 'it\'s' # c)");
    REQUIRE(k.size() == 4);
    CHECK(k[1].second == R"('it\'s')");
    CHECK(k[3].first == SpanKind::comment);
}

TEST_CASE("unterminated literals stop at the line end or text end") {
    const auto spans = lex("s = 'open\nx = 1");
    REQUIRE(spans.size() == 3);
    CHECK(spans[1].kind == SpanKind::string);
    CHECK_FALSE(spans[1].terminated);
    CHECK(spans[2].kind == SpanKind::code);

    const auto triple = lex("s = '''never closed\n# still string");
    REQUIRE(triple.size() == 2);
    CHECK(triple[1].kind == SpanKind::string);
    CHECK_FALSE(triple[1].terminated);
}

TEST_CASE("f-string placeholder expressions") {
    CHECK(fstring_expressions("Accuracy: {acc:.3f}") == std::vector<std::string>{"acc"});
    CHECK(fstring_expressions("{name} has {len(df)} rows") == std::vector<std::string>{"name", "len(df)"});
    CHECK(fstring_expressions("{{literal}} {x!r}") == std::vector<std::string>{"x"});
    CHECK(fstring_expressions("{x=}") == std::vector<std::string>{"x"});
    CHECK(fstring_expressions("{d['k']}") == std::vector<std::string>{"d['k']"});
    CHECK(fstring_expressions("plain").empty());
}

TEST_CASE("blank_literals preserves length and newlines") {
    const std::string text = "a = 'x\\ny' # c\nb = \"\"\"1\n2\"\"\"";
    const auto blanked = blank_literals(text, lex(text));
    REQUIRE(blanked.size() == text.size());
    CHECK(blanked.find('\'') == std::string::npos);
    CHECK(blanked.find('#') == std::string::npos);
    CHECK(std::count(blanked.begin(), blanked.end(), '\n') == std::count(text.begin(), text.end(), '\n'));
}

TEST_CASE("spans always form a contiguous cover (property)") {
    testsupport::CodeGen g(99);
    for (int i = 0; i < 2000; ++i) {
        std::string text = g.cell();
        // Splice in raw noise bytes as well.
        for (std::size_t k = 0, n = g.below(4); k < n; ++k) text.insert(g.below(text.size() + 1), 1, "'\"#\\{}\n"[g.below(8)]);
        CAPTURE(text);
        const auto spans = lex(text);
        std::size_t pos = 0;
        for (const auto& s : spans) {
            CHECK(s.begin == pos);
            CHECK(s.end > s.begin);
            if (s.kind == SpanKind::string) {
                CHECK(s.content_begin >= s.begin);
                CHECK(s.content_end <= s.end);
                CHECK(s.content_begin <= s.content_end);
            }
            pos = s.end;
        }
        CHECK(pos == text.size());
    }
}
