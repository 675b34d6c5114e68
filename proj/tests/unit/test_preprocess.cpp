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

#include "jupylabel/lexer.hpp"
#include "jupylabel/preprocess.hpp"
#include "test_support.hpp"

using namespace jupylabel;

namespace {

struct GoldenCase {
    std::string name;
    std::string source;
    std::string expected;
    PreprocessFlags flags;
};

std::vector<GoldenCase> golden_cases() {
    std::vector<GoldenCase> out;
    for (const auto& c : testsupport::load_json(testsupport::fixture("golden/preprocess_cases.json"))) {
        const auto& f = c.at("flags");
        out.push_back({c.at("name"), c.at("source"), c.at("expected"),
                       PreprocessFlags{f.at("has_setup_token"), f.at("has_validation_token"), f.at("has_print_call"),
                                       f.at("has_magic"), f.at("has_constant_decl")}});
    }
    return out;
}

std::vector<std::string> corpus_sources() {
    std::vector<std::string> out;
    for (const auto& r : testsupport::fixture_dataset().records) out.push_back(r.source);
    for (const auto& c : golden_cases()) out.push_back(c.source);
    return out;
}

std::string process(std::string_view s) { return preprocess_source(s, {}, "").processed_source; }

std::size_t count_word(const std::string& text, const std::string& word) {
    const std::regex re("\\b" + word + "\\b");
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

void check_structural_invariants(const std::string& original, const PreprocessedCell& pc) {
    const auto& p = pc.processed_source;
    CHECK(p.find("\n\n") == std::string::npos);
    CHECK(p.find('\r') == std::string::npos);
    if (!p.empty()) {
        CHECK(p.front() != '\n');
        CHECK(p.back() != '\n');
    }
    for (const auto& s : lexer::lex(p)) CHECK(s.kind != lexer::SpanKind::comment);
    for (const auto& line : split_source_lines(p)) {
        std::string body = line;
        if (!body.empty() && body.back() == '\n') body.pop_back();
        CHECK_FALSE(body.empty());
        CHECK(body.find_last_not_of(" \t") == body.size() - 1);
    }

    // Token flags against an independent regex scan of literal-free text.
    const auto structural = lexer::blank_literals(p, lexer::lex(p));
    CHECK(pc.flags.has_setup_token == (count_word(structural, "SETUP") > 0));
    CHECK(pc.flags.has_validation_token == (count_word(structural, "VALIDATION") > 0));
    static const std::regex print_re(R"((^|[^A-Za-z0-9_.])print\s*\()");
    CHECK(pc.flags.has_print_call == std::regex_search(structural, print_re));

    // Size bound: only inserted keywords can make the text longer.
    const auto inserted = 5 * count_word(p, "SETUP") + 4 * count_word(p, "PATH") + 10 * count_word(p, "VALIDATION");
    CHECK(p.size() <= original.size() + inserted);
}

}  // namespace

TEST_CASE("golden pre-processing cases") {
    const auto cases = golden_cases();
    REQUIRE(cases.size() >= 50);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const auto pc = preprocess_source(c.source, {}, "");
        CHECK(pc.processed_source == c.expected);
        CHECK(pc.flags == c.flags);
    }
}

TEST_CASE("implicit return detection") {
    for (const char* yes : {"df", "df.columns", "df['age']", "df.loc[0]['age']", "data.shape[0]", "  df  ", "df[df.age == 1]"}) {
        CAPTURE(yes);
        CHECK(detect_implicit_return(yes));
    }
    for (const char* no : {"df.head()", "x = df.columns", "pass", "return", "None", "df[f(x)]", "df;", "", "1",
                           "'text'", "df + 1", "import os", "SETUP", "PATH", "lambda: x", "a, b"}) {
        CAPTURE(no);
        CHECK_FALSE(detect_implicit_return(no));
    }
}

TEST_CASE("constant declarations") {
    using rewrite::is_constant_declaration;
    for (const char* yes : {"MAX_LEN = 128", "NAMES = ['a', 'b']", "RATE = 1e-3", "SIZE = (224, 224)", "FLAG = True",
                            "DIR = PATH", "N_2 = -1", "N_COLS = len(cols)", "DF = pd.read_csv(PATH)", "LR=0.1"}) {
        CAPTURE(yes);
        CHECK(is_constant_declaration(yes));
    }
    for (const char* no : {"x = 5", "X = 5", "N = 100", "MAX == 5", "X = df.drop('y')", "  MAX = 5", "Max = 5",
                           "MAX += 1", "MAX =", "MAX = # nothing", "MAX_len = 3", "_MAX = 3"}) {
        CAPTURE(no);
        CHECK_FALSE(is_constant_declaration(no));
    }
}

TEST_CASE("path literal detection") {
    using rewrite::is_path_literal;
    CHECK(is_path_literal("data/train.csv", false));
    CHECK(is_path_literal("/kaggle/input", false));
    CHECK(is_path_literal("model.h5", false));
    CHECK(is_path_literal("C:\\\\data\\\\x", false));
    CHECK(is_path_literal("C:\\data\\x", true));
    CHECK_FALSE(is_path_literal("a\\nb", false));
    CHECK_FALSE(is_path_literal("\\d+", true));
    CHECK_FALSE(is_path_literal("Age", false));
    CHECK_FALSE(is_path_literal("", false));
    CHECK_FALSE(is_path_literal("csv", false));
}

TEST_CASE("pre-processing is idempotent and keeps its invariants on the fixture corpus") {
    const auto sources = corpus_sources();
    REQUIRE(sources.size() > 200);
    for (const auto& s : sources) {
        CAPTURE(s);
        const auto pc = preprocess_source(s, {}, "");
        CHECK(process(pc.processed_source) == pc.processed_source);
        check_structural_invariants(s, pc);
    }
}

TEST_CASE("pre-processing shrinks the corpus on average") {
    std::int64_t delta = 0;
    const auto sources = corpus_sources();
    for (const auto& s : sources) delta += static_cast<std::int64_t>(process(s).size()) - static_cast<std::int64_t>(s.size());
    CHECK(delta < 0);
}

TEST_CASE("no string literal survives inside a print call") {
    for (const auto& s : corpus_sources()) {
        const auto p = process(s);
        const auto spans = lexer::lex(p);
        const auto structural = lexer::blank_literals(p, spans);
        static const std::regex print_re(R"((^|[^A-Za-z0-9_.])print\s*\()");
        for (auto it = std::sregex_iterator(structural.begin(), structural.end(), print_re); it != std::sregex_iterator(); ++it) {
            std::size_t open = static_cast<std::size_t>(it->position() + it->length()) - 1;
            int depth = 0;
            std::size_t close = open;
            for (; close < structural.size(); ++close) {
                if (structural[close] == '(') ++depth;
                if (structural[close] == ')' && --depth == 0) break;
            }
            for (const auto& sp : spans) {
                CAPTURE(p);
                CHECK_FALSE((sp.kind == lexer::SpanKind::string && sp.begin > open && sp.begin < close));
            }
        }
    }
}

TEST_CASE("masked path literals leave no trace") {
    // Independent extraction: quoted runs without spaces or brackets that contain a slash or a data-file suffix.
    static const std::regex lit(R"re((['"])([^'"\s\[\]()]*(/|\.csv|\.json|\.pkl|\.h5|\.xlsx|\.parquet|\.png)[^'"\s\[\]()]*)\1)re");
    std::size_t checked = 0;
    for (const auto& s : corpus_sources()) {
        const auto p = process(s);
        for (auto it = std::sregex_iterator(s.begin(), s.end(), lit); it != std::sregex_iterator(); ++it) {
            const auto content = (*it)[2].str();
            if (content.size() < 3) continue;
            CAPTURE(s);
            CAPTURE(content);
            CHECK(p.find(content) == std::string::npos);
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("random code-like input never breaks the invariants (property)") {
    testsupport::CodeGen g(7);
    for (int i = 0; i < 3000; ++i) {
        const auto s = g.cell();
        CAPTURE(s);
        const auto pc = preprocess_source(s, {}, "");
        CHECK(process(pc.processed_source) == pc.processed_source);
        check_structural_invariants(s, pc);
    }
}

TEST_CASE("preprocess_cell collects output types and text") {
    Cell cell;
    cell.stable_index = 4;
    cell.source = "df.describe()\n";
    CellOutput stream{OutputType::stream, "checked 3 rows\n", Json::object()};
    CellOutput err{OutputType::error, "AssertionError: boom", Json::object()};
    CellOutput result{OutputType::execute_result, "count 3", Json::object()};
    CellOutput image{OutputType::display_data, "", Json::object()};
    cell.outputs = {result, stream, err, image, stream};
    const auto pc = preprocess_cell(cell);
    CHECK(pc.stable_index == 4);
    CHECK(pc.original_source == cell.source);
    CHECK(pc.output_types == std::vector<OutputType>{OutputType::stream, OutputType::display_data,
                                                     OutputType::execute_result, OutputType::error});
    CHECK(pc.output_text == "count 3\nchecked 3 rows\n\nchecked 3 rows\n");
    CHECK(pc.has_output_type(OutputType::display_data));
    CHECK_FALSE(pc.has_output_type(OutputType::unknown));
}
