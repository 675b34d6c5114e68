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

// A string-aware splitter for Python-ish source. It is not a tokenizer: it only separates
// string literals and `#` comments from everything else, which is all the cell rewrites need.
// Malformed input never fails; an unterminated literal simply runs to the end of its line
// (or of the text, for triple-quoted literals).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jupylabel::lexer {

enum class SpanKind { code, string, comment };

struct Span {
    SpanKind kind = SpanKind::code;
    std::size_t begin = 0;  // byte offsets into the lexed text, [begin, end)
    std::size_t end = 0;

    // Only meaningful for strings.
    std::size_t content_begin = 0;
    std::size_t content_end = 0;
    bool is_fstring = false;
    bool is_raw = false;
    bool terminated = true;

    std::size_t size() const noexcept { return end - begin; }
};

/// Contiguous cover of `text`: every byte belongs to exactly one span.
std::vector<Span> lex(std::string_view text);

inline bool is_ident_start(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_ident_char(char c) noexcept { return is_ident_start(c) || (c >= '0' && c <= '9'); }

/// Top-level expressions inside the `{...}` placeholders of an f-string body.
/// Format specs and `!r`-style conversions are dropped; `{{` / `}}` escapes are skipped.
std::vector<std::string> fstring_expressions(std::string_view content);

/// Text with every string literal and comment replaced by spaces of the same length.
/// Useful for structural scans (brackets, keywords) that must ignore literal content.
std::string blank_literals(std::string_view text, const std::vector<Span>& spans);

}  // namespace jupylabel::lexer
