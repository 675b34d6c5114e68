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

#include "jupylabel/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "jupylabel/lexer.hpp"

namespace jupylabel {

namespace {

using lexer::is_ident_char;
using lexer::is_ident_start;
using lexer::Span;
using lexer::SpanKind;

constexpr std::array<std::string_view, 35> kPythonKeywords = {
    "False", "None",   "True",    "and",      "as",     "assert", "async", "await", "break",
    "class", "continue", "def",   "del",      "elif",   "else",   "except", "finally", "for",
    "from",  "global", "if",      "import",   "in",     "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",    "while",  "with",  "yield",
};

bool is_keyword(std::string_view word) {
    return std::find(kPythonKeywords.begin(), kPythonKeywords.end(), word) != kPythonKeywords.end();
}

bool is_mask_token(std::string_view word) {
    return word == kSetupToken || word == kPathToken || word == kValidationToken;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (is_blank(s.front()) || s.front() == '\n')) s.remove_prefix(1);
    while (!s.empty() && (is_blank(s.back()) || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

std::string_view rtrim(std::string_view s) {
    while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
    return s;
}

struct Line {
    std::size_t begin;
    std::size_t end;  // excludes '\n'
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0;
    while (true) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back({start, text.size()});
            break;
        }
        lines.push_back({start, nl});
        start = nl + 1;
    }
    return lines;
}

// in_literal[i] is true when byte i belongs to a string literal.
std::vector<bool> literal_mask(std::size_t size, const std::vector<Span>& spans) {
    std::vector<bool> mask(size, false);
    for (const auto& s : spans) {
        if (s.kind != SpanKind::string) continue;
        for (std::size_t k = s.begin; k < s.end; ++k) mask[k] = true;
    }
    return mask;
}

bool line_starts_in_literal(const Line& line, const std::vector<bool>& in_literal) {
    return line.begin > 0 && in_literal[line.begin - 1];
}

// Net change in ([{ nesting over `blanked`.
int bracket_delta(std::string_view blanked) {
    int depth = 0;
    for (char c : blanked) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
    }
    return depth;
}

// Index of the bracket closing the one at `open`, or npos.
std::size_t matching_close(std::string_view blanked, std::size_t open) {
    int depth = 0;
    for (std::size_t k = open; k < blanked.size(); ++k) {
        const char c = blanked[k];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') {
            if (--depth == 0) return k;
        }
    }
    return std::string_view::npos;
}

bool starts_with_word(std::string_view s, std::string_view word) {
    return s.size() > word.size() && s.substr(0, word.size()) == word && !is_ident_char(s[word.size()]);
}

bool is_import_statement(std::string_view stripped) {
    if (starts_with_word(stripped, "import")) {
        const char next = stripped[6];
        return is_blank(next) || next == '(';
    }
    if (!starts_with_word(stripped, "from")) return false;
    // from <module> import ...
    std::size_t i = 4;
    while (i < stripped.size() && is_blank(stripped[i])) ++i;
    const std::size_t module_start = i;
    while (i < stripped.size() && (is_ident_char(stripped[i]) || stripped[i] == '.')) ++i;
    if (i == module_start) return false;
    while (i < stripped.size() && is_blank(stripped[i])) ++i;
    auto rest = stripped.substr(i);
    return starts_with_word(rest, "import") || rest == "import";
}

// Identifier occurrences of `word` in code spans of `blanked` (word boundaries on both sides).
bool has_code_word(std::string_view blanked, std::string_view word) {
    std::size_t pos = 0;
    while ((pos = blanked.find(word, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || !is_ident_char(blanked[pos - 1]);
        const std::size_t after = pos + word.size();
        const bool right_ok = after >= blanked.size() || !is_ident_char(blanked[after]);
        if (left_ok && right_ok) return true;
        pos = after;
    }
    return false;
}

// Position of the '(' of the next `print(` call at or after `from`, or npos.
// `print_at` receives the offset of the identifier.
std::size_t find_print_call(std::string_view blanked, std::size_t from, std::size_t& print_at) {
    constexpr std::string_view kPrint = "print";
    std::size_t pos = from;
    while ((pos = blanked.find(kPrint, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || (!is_ident_char(blanked[pos - 1]) && blanked[pos - 1] != '.');
        std::size_t j = pos + kPrint.size();
        const bool right_ok = j >= blanked.size() || !is_ident_char(blanked[j]);
        if (left_ok && right_ok) {
            while (j < blanked.size() && is_blank(blanked[j])) ++j;
            if (j < blanked.size() && blanked[j] == '(') {
                print_at = pos;
                return j;
            }
        }
        pos += kPrint.size();
    }
    return std::string_view::npos;
}

bool contains_word_char(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](char c) { return is_ident_start(c); });
}

std::string clean_print_argument(std::string_view arg) {
    constexpr std::string_view kLeading = "+%*,.";
    constexpr std::string_view kTrailing = "+%*,";
    while (true) {
        arg = trim(arg);
        if (!arg.empty() && kLeading.find(arg.front()) != std::string_view::npos) {
            arg.remove_prefix(1);
            continue;
        }
        if (!arg.empty() && kTrailing.find(arg.back()) != std::string_view::npos) {
            arg.remove_suffix(1);
            continue;
        }
        break;
    }
    // "...".format(x) leaves "format(x)" behind once the literal is gone.
    constexpr std::string_view kFormat = "format(";
    if (arg.size() > kFormat.size() && arg.substr(0, kFormat.size()) == kFormat && arg.back() == ')') {
        return clean_print_argument(arg.substr(kFormat.size(), arg.size() - kFormat.size() - 1));
    }
    // Keyword arguments whose value was a literal (sep="", end="\n") and arguments with no
    // identifier left ("-" * 50) carry nothing.
    if (arg.empty() || arg.back() == '=' || !contains_word_char(arg)) return {};
    return std::string(arg);
}

// Rebuilds [begin, end) of `text` without string literals; f-strings become their expressions.
std::string strip_literals(std::string_view text, const std::vector<Span>& spans, std::size_t begin,
                           std::size_t end) {
    std::string out;
    for (const auto& s : spans) {
        if (s.end <= begin || s.begin >= end) continue;
        const auto lo = std::max(s.begin, begin);
        const auto hi = std::min(s.end, end);
        switch (s.kind) {
            case SpanKind::code:
                out.append(text.substr(lo, hi - lo));
                break;
            case SpanKind::string:
                if (s.is_fstring) {
                    auto exprs = lexer::fstring_expressions(
                        text.substr(s.content_begin, s.content_end - s.content_begin));
                    for (std::size_t k = 0; k < exprs.size(); ++k) {
                        out += k == 0 ? " " : ", ";
                        out += exprs[k];
                    }
                    out += ' ';
                }
                break;
            case SpanKind::comment:
                break;
        }
    }
    return out;
}

std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

}  // namespace

namespace rewrite {

SetupMaskResult mask_setup_lines(std::string_view text) {
    SetupMaskResult result;
    const auto spans = lexer::lex(text);
    const auto blanked = lexer::blank_literals(text, spans);
    const auto in_literal = literal_mask(text.size(), spans);
    const auto lines = split_lines(text);

    std::vector<std::string> out;
    out.reserve(lines.size());
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& line = lines[li];
        const auto raw = text.substr(line.begin, line.end - line.begin);
        if (line_starts_in_literal(line, in_literal)) {
            out.emplace_back(raw);
            continue;
        }
        const auto indent_len = raw.find_first_not_of(" \t");
        if (indent_len == std::string_view::npos) {
            out.emplace_back(raw);
            continue;
        }
        const auto indent = raw.substr(0, indent_len);
        const auto stripped = raw.substr(indent_len);
        if (stripped.front() == '%' || stripped.front() == '!') {
            result.found_magic = true;
            out.push_back(std::string(indent) + std::string(kSetupToken));
            continue;
        }
        const auto blanked_line = std::string_view(blanked).substr(line.begin, line.end - line.begin);
        if (!is_import_statement(blanked_line.substr(indent_len))) {
            out.emplace_back(raw);
            continue;
        }
        result.found_import = true;
        // Swallow parenthesised or backslash-continued import lists.
        int depth = bracket_delta(blanked_line);
        bool continued = !rtrim(blanked_line).empty() && rtrim(blanked_line).back() == '\\';
        while ((depth > 0 || continued) && li + 1 < lines.size()) {
            ++li;
            const auto next = std::string_view(blanked).substr(lines[li].begin, lines[li].end - lines[li].begin);
            depth += bracket_delta(next);
            continued = !rtrim(next).empty() && rtrim(next).back() == '\\';
        }
        out.push_back(std::string(indent) + std::string(kSetupToken));
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i) result.text.push_back('\n');
        result.text += out[i];
    }
    return result;
}

std::string delete_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const auto& s : lexer::lex(text)) {
        if (s.kind != SpanKind::comment) out.append(text.substr(s.begin, s.size()));
    }
    return out;
}

std::string clear_print_strings(std::string_view text) {
    const auto spans = lexer::lex(text);
    const auto blanked = lexer::blank_literals(text, spans);

    std::string out;
    std::size_t copied = 0;
    std::size_t search = 0;
    std::size_t print_at = 0;
    std::size_t open;
    while ((open = find_print_call(blanked, search, print_at)) != std::string_view::npos) {
        const auto close = matching_close(blanked, open);
        const std::size_t args_end = close == std::string_view::npos ? text.size() : close;

        std::vector<std::string> args;
        std::size_t arg_begin = open + 1;
        int depth = 0;
        for (std::size_t k = open + 1; k <= args_end; ++k) {
            const char c = k < args_end ? blanked[k] : ',';
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            if (c == ',' && depth == 0) {
                auto cleaned = clean_print_argument(strip_literals(text, spans, arg_begin, k));
                if (!cleaned.empty()) args.push_back(std::move(cleaned));
                arg_begin = k + 1;
            }
        }

        out.append(text.substr(copied, print_at - copied));
        out += "print(";
        for (std::size_t k = 0; k < args.size(); ++k) {
            if (k) out += ", ";
            out += args[k];
        }
        out += ')';
        copied = close == std::string_view::npos ? text.size() : close + 1;
        search = copied;
    }
    out.append(text.substr(copied));
    return out;
}

bool is_path_literal(std::string_view content, bool raw) {
    if (content.empty()) return false;
    if (content.find('/') != std::string_view::npos) return true;

    // Backslash separators: a literal backslash ("\\" in a normal literal, "\" in a raw one)
    // splitting at least two non-empty segments. Escapes such as "\n" or r"\d+" do not qualify.
    const std::string_view sep = raw ? "\\" : "\\\\";
    if (content.find(sep) != std::string_view::npos) {
        std::size_t segments = 0;
        std::size_t start = 0;
        while (true) {
            auto hit = content.find(sep, start);
            auto seg = content.substr(start, hit == std::string_view::npos ? std::string_view::npos : hit - start);
            if (!seg.empty()) ++segments;
            if (hit == std::string_view::npos) break;
            start = hit + sep.size();
        }
        if (segments >= 2) return true;
    }

    constexpr std::array<std::string_view, 10> kExtensions = {
        ".csv", ".json", ".txt", ".parquet", ".xlsx", ".zip", ".h5", ".pkl", ".png", ".jpg",
    };
    std::string lower(content);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return std::any_of(kExtensions.begin(), kExtensions.end(), [&](std::string_view ext) {
        return lower.size() >= ext.size() && lower.compare(lower.size() - ext.size(), ext.size(), ext) == 0;
    });
}

std::string mask_paths(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const auto& s : lexer::lex(text)) {
        if (s.kind == SpanKind::string &&
            is_path_literal(text.substr(s.content_begin, s.content_end - s.content_begin), s.is_raw)) {
            out += kPathToken;
        } else {
            out.append(text.substr(s.begin, s.size()));
        }
    }
    return out;
}

std::string mask_implicit_return(std::string_view text) {
    const auto spans = lexer::lex(text);
    const auto blanked = lexer::blank_literals(text, spans);
    const auto in_literal = literal_mask(text.size(), spans);
    const auto lines = split_lines(text);

    std::size_t last = lines.size();
    for (std::size_t i = lines.size(); i-- > 0;) {
        if (!trim(text.substr(lines[i].begin, lines[i].end - lines[i].begin)).empty()) {
            last = i;
            break;
        }
    }
    if (last == lines.size()) return std::string(text);

    const auto& line = lines[last];
    const auto raw = text.substr(line.begin, line.end - line.begin);
    // Only a top-level statement of its own is displayed by the kernel.
    if (line_starts_in_literal(line, in_literal) || is_blank(raw.front())) return std::string(text);
    if (bracket_delta(std::string_view(blanked).substr(0, line.begin)) > 0) return std::string(text);
    for (std::size_t i = last; i-- > 0;) {
        const auto prev = rtrim(std::string_view(blanked).substr(lines[i].begin, lines[i].end - lines[i].begin));
        if (prev.empty()) continue;
        if (prev.back() == '\\') return std::string(text);
        break;
    }
    if (!detect_implicit_return(raw)) return std::string(text);

    std::string out(text.substr(0, line.begin));
    out += kValidationToken;
    out.append(text.substr(line.end));
    return out;
}

std::string collapse_blank_lines(std::string_view text) {
    std::string out;
    for (const auto& line : split_lines(text)) {
        const auto content = rtrim(text.substr(line.begin, line.end - line.begin));
        if (content.find_first_not_of(" \t\r\f\v") == std::string_view::npos) continue;
        if (!out.empty()) out.push_back('\n');
        out.append(content);
    }
    return out;
}

// Top-level assignment to an UPPER_SNAKE name of at least two characters.
bool is_constant_declaration(std::string_view line) {
    if (line.empty() || !(line[0] >= 'A' && line[0] <= 'Z')) return false;
    std::size_t i = 0;
    while (i < line.size() && ((line[i] >= 'A' && line[i] <= 'Z') || std::isdigit(static_cast<unsigned char>(line[i])) ||
                               line[i] == '_')) {
        ++i;
    }
    if (i < line.size() && is_ident_char(line[i])) return false;  // lowercase letter in the name
    if (i < 2) return false;
    while (i < line.size() && is_blank(line[i])) ++i;
    if (i >= line.size() || line[i] != '=') return false;
    if (i + 1 < line.size() && line[i + 1] == '=') return false;
    const auto rhs = trim(line.substr(i + 1));
    return !rhs.empty() && rhs.front() != '#';
}

PreprocessFlags scan_flags(std::string_view processed) {
    PreprocessFlags flags;
    const auto spans = lexer::lex(processed);
    const auto blanked = lexer::blank_literals(processed, spans);
    flags.has_setup_token = has_code_word(blanked, kSetupToken);
    flags.has_validation_token = has_code_word(blanked, kValidationToken);
    std::size_t print_at = 0;
    flags.has_print_call = find_print_call(blanked, 0, print_at) != std::string_view::npos;
    const auto in_literal = literal_mask(processed.size(), spans);
    for (const auto& line : split_lines(processed)) {
        if (line_starts_in_literal(line, in_literal)) continue;
        if (is_constant_declaration(processed.substr(line.begin, line.end - line.begin))) {
            flags.has_constant_decl = true;
            break;
        }
    }
    return flags;
}

}  // namespace rewrite

bool detect_implicit_return(std::string_view last_line) {
    auto line = trim(last_line);
    if (line.empty()) return false;
    const auto spans = lexer::lex(line);
    std::string blanked = lexer::blank_literals(line, spans);
    for (const auto& s : spans) {
        if (s.kind == SpanKind::comment) {
            blanked.resize(s.begin);
            break;
        }
    }
    const std::string_view b = trim(blanked);
    if (b.empty() || b.back() == ';') return false;

    auto read_ident = [&](std::size_t& i) -> std::string_view {
        const std::size_t start = i;
        if (i >= b.size() || !is_ident_start(b[i])) return {};
        while (i < b.size() && is_ident_char(b[i])) ++i;
        return b.substr(start, i - start);
    };
    auto skip_blanks = [&](std::size_t& i) {
        while (i < b.size() && is_blank(b[i])) ++i;
    };

    std::size_t i = 0;
    const auto head = read_ident(i);
    if (head.empty() || is_keyword(head) || is_mask_token(head)) return false;

    while (true) {
        skip_blanks(i);
        if (i >= b.size()) return true;
        if (b[i] == '.') {
            ++i;
            skip_blanks(i);
            const auto attr = read_ident(i);
            if (attr.empty() || is_keyword(attr)) return false;
        } else if (b[i] == '[') {
            const auto close = matching_close(b, i);
            if (close == std::string_view::npos) return false;
            const auto inner = b.substr(i + 1, close - i - 1);
            for (std::size_t k = 0; k < inner.size(); ++k) {
                const char c = inner[k];
                if (c == '(') {
                    std::size_t p = k;
                    while (p > 0 && is_blank(inner[p - 1])) --p;
                    if (p > 0 && (is_ident_char(inner[p - 1]) || inner[p - 1] == ')' || inner[p - 1] == ']')) {
                        return false;  // call inside the subscript
                    }
                }
                if (c == '=') {
                    const char before = k > 0 ? inner[k - 1] : ' ';
                    const char after = k + 1 < inner.size() ? inner[k + 1] : ' ';
                    const bool comparison = before == '=' || before == '!' || before == '<' || before == '>' ||
                                            after == '=';
                    if (!comparison) return false;
                }
            }
            i = close + 1;
        } else {
            return false;
        }
    }
}

bool PreprocessedCell::has_output_type(OutputType t) const noexcept {
    return std::find(output_types.begin(), output_types.end(), t) != output_types.end();
}

PreprocessedCell preprocess_source(std::string_view source, std::vector<OutputType> output_types,
                                   std::string output_text, std::size_t stable_index) {
    PreprocessedCell pc;
    pc.stable_index = stable_index;
    pc.original_source = std::string(source);

    const auto normalized = normalize_newlines(source);
    auto setup = rewrite::mask_setup_lines(normalized);
    auto text = rewrite::delete_comments(setup.text);
    text = rewrite::clear_print_strings(text);
    text = rewrite::mask_paths(text);
    text = rewrite::mask_implicit_return(text);
    pc.processed_source = rewrite::collapse_blank_lines(text);

    pc.flags = rewrite::scan_flags(pc.processed_source);
    pc.flags.has_magic = setup.found_magic;

    std::sort(output_types.begin(), output_types.end());
    output_types.erase(std::unique(output_types.begin(), output_types.end()), output_types.end());
    pc.output_types = std::move(output_types);
    pc.output_text = std::move(output_text);
    return pc;
}

PreprocessedCell preprocess_cell(const Cell& cell) {
    std::vector<OutputType> types;
    std::string output_text;
    for (const auto& o : cell.outputs) {
        types.push_back(o.output_type);
        if (o.output_type == OutputType::stream || o.output_type == OutputType::execute_result) {
            if (!output_text.empty()) output_text.push_back('\n');
            output_text += o.text_payload;
        }
    }
    return preprocess_source(cell.source, std::move(types), std::move(output_text), cell.stable_index);
}

}  // namespace jupylabel
