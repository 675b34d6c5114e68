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

#include "jupylabel/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace jupylabel::lexer {

namespace {

bool is_string_prefix(std::string_view ident) {
    if (ident.empty() || ident.size() > 2) return false;
    bool seen_b = false, seen_r = false, seen_f = false, seen_u = false;
    for (char c : ident) {
        switch (std::tolower(static_cast<unsigned char>(c))) {
            case 'b': if (seen_b || seen_f || seen_u) return false; seen_b = true; break;
            case 'r': if (seen_r || seen_u) return false; seen_r = true; break;
            case 'f': if (seen_f || seen_b || seen_u) return false; seen_f = true; break;
            case 'u': if (ident.size() != 1) return false; seen_u = true; break;
            default: return false;
        }
    }
    return true;
}

// Scans a literal whose opening quote starts at `quote_pos`. Fills the string fields of `s`.
void scan_string(std::string_view text, std::size_t quote_pos, Span& s) {
    const char q = text[quote_pos];
    const bool triple = quote_pos + 2 < text.size() && text[quote_pos + 1] == q && text[quote_pos + 2] == q;
    const std::size_t qlen = triple ? 3 : 1;
    std::size_t i = quote_pos + qlen;
    s.content_begin = i;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\\') {
            i += 2;
            continue;
        }
        if (!triple && c == '\n') {
            s.content_end = i;
            s.end = i;
            s.terminated = false;
            return;
        }
        if (c == q) {
            if (!triple) {
                s.content_end = i;
                s.end = i + 1;
                return;
            }
            if (i + 2 < text.size() && text[i + 1] == q && text[i + 2] == q) {
                s.content_end = i;
                s.end = i + 3;
                return;
            }
        }
        ++i;
    }
    s.content_end = std::min(i, text.size());
    s.end = text.size();
    s.terminated = false;
}

}  // namespace

std::vector<Span> lex(std::string_view text) {
    std::vector<Span> spans;
    std::size_t code_start = 0;
    auto flush_code = [&](std::size_t upto) {
        if (upto > code_start) {
            Span s;
            s.kind = SpanKind::code;
            s.begin = code_start;
            s.end = upto;
            spans.push_back(s);
        }
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '#') {
            flush_code(i);
            Span s;
            s.kind = SpanKind::comment;
            s.begin = i;
            auto nl = text.find('\n', i);
            s.end = nl == std::string_view::npos ? text.size() : nl;
            spans.push_back(s);
            i = code_start = s.end;
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            const auto ident = text.substr(i, j - i);
            if (j < text.size() && (text[j] == '"' || text[j] == '\'') && is_string_prefix(ident)) {
                flush_code(i);
                Span s;
                s.kind = SpanKind::string;
                s.begin = i;
                for (char p : ident) {
                    const auto lower = std::tolower(static_cast<unsigned char>(p));
                    if (lower == 'f') s.is_fstring = true;
                    if (lower == 'r') s.is_raw = true;
                }
                scan_string(text, j, s);
                spans.push_back(s);
                i = code_start = s.end;
                continue;
            }
            i = j;
            continue;
        }
        if (c == '"' || c == '\'') {
            flush_code(i);
            Span s;
            s.kind = SpanKind::string;
            s.begin = i;
            scan_string(text, i, s);
            spans.push_back(s);
            i = code_start = s.end;
            continue;
        }
        ++i;
    }
    flush_code(text.size());
    return spans;
}

std::vector<std::string> fstring_expressions(std::string_view content) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < content.size()) {
        const char c = content[i];
        if (c == '{') {
            if (i + 1 < content.size() && content[i + 1] == '{') {
                i += 2;
                continue;
            }
            // Find the matching close brace, tracking nesting and quotes.
            int depth = 1;
            std::size_t j = i + 1;
            std::size_t expr_end = std::string_view::npos;
            char quote = 0;
            int bracket_depth = 0;
            for (; j < content.size() && depth > 0; ++j) {
                const char d = content[j];
                if (quote) {
                    if (d == quote) quote = 0;
                    continue;
                }
                if (d == '"' || d == '\'') {
                    quote = d;
                } else if (d == '{') {
                    ++depth;
                } else if (d == '}') {
                    --depth;
                    if (depth == 0 && expr_end == std::string_view::npos) expr_end = j;
                } else if (depth == 1 && (d == '(' || d == '[')) {
                    ++bracket_depth;
                } else if (depth == 1 && (d == ')' || d == ']')) {
                    --bracket_depth;
                } else if (depth == 1 && bracket_depth == 0 && expr_end == std::string_view::npos) {
                    const bool conversion = d == '!' && !(j + 1 < content.size() && content[j + 1] == '=');
                    const bool spec = d == ':';
                    if (conversion || spec) expr_end = j;
                }
            }
            if (expr_end == std::string_view::npos) expr_end = j;
            auto expr = content.substr(i + 1, expr_end - (i + 1));
            // Self-documenting "{x=}".
            while (!expr.empty() && std::isspace(static_cast<unsigned char>(expr.back()))) expr.remove_suffix(1);
            if (!expr.empty() && expr.back() == '=' &&
                !(expr.size() >= 2 && (expr[expr.size() - 2] == '=' || expr[expr.size() - 2] == '!' ||
                                       expr[expr.size() - 2] == '<' || expr[expr.size() - 2] == '>'))) {
                expr.remove_suffix(1);
            }
            while (!expr.empty() && std::isspace(static_cast<unsigned char>(expr.front()))) expr.remove_prefix(1);
            while (!expr.empty() && std::isspace(static_cast<unsigned char>(expr.back()))) expr.remove_suffix(1);
            if (!expr.empty()) out.emplace_back(expr);
            i = j;
            continue;
        }
        ++i;
    }
    return out;
}

std::string blank_literals(std::string_view text, const std::vector<Span>& spans) {
    std::string out(text);
    for (const auto& s : spans) {
        if (s.kind == SpanKind::code) continue;
        for (std::size_t k = s.begin; k < s.end; ++k) {
            if (out[k] != '\n') out[k] = ' ';
        }
    }
    return out;
}

}  // namespace jupylabel::lexer
