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

// Cell pre-processing: reduces a code cell to the form the rule and tree classifiers read.
//
// The rewrites run in a fixed order:
//   1. magic commands and import statements  -> SETUP
//   2. `#` comments deleted
//   3. string literals inside print(...) deleted (f-string placeholders kept as expressions)
//   4. path-like string literals            -> PATH
//   5. a trailing bare value access         -> VALIDATION
//   6. blank lines and trailing whitespace removed
// All steps are line-based text rewrites over a string-aware lexer, never a Python parse, so
// any input is accepted.

#include <string>
#include <string_view>
#include <vector>

#include "jupylabel/notebook.hpp"

namespace jupylabel {

inline constexpr std::string_view kSetupToken = "SETUP";
inline constexpr std::string_view kPathToken = "PATH";
inline constexpr std::string_view kValidationToken = "VALIDATION";

struct PreprocessFlags {
    bool has_setup_token = false;
    bool has_validation_token = false;
    bool has_print_call = false;
    bool has_magic = false;
    bool has_constant_decl = false;

    friend bool operator==(const PreprocessFlags&, const PreprocessFlags&) = default;
};

struct PreprocessedCell {
    std::size_t stable_index = 0;
    std::string original_source;
    std::string processed_source;
    /// Sorted, duplicate-free.
    std::vector<OutputType> output_types;
    /// Text of stream and execute_result outputs, newline-joined.
    std::string output_text;
    PreprocessFlags flags;

    bool has_output_type(OutputType t) const noexcept;
};

PreprocessedCell preprocess_cell(const Cell& cell);

/// Same pipeline for sources that do not come from a notebook (labelled dataset records).
PreprocessedCell preprocess_source(std::string_view source, std::vector<OutputType> output_types,
                                   std::string output_text, std::size_t stable_index = 0);

/// True iff `last_line` is an identifier followed only by attribute accesses and/or subscripts:
/// no call, no assignment, no statement keyword ("df", "df.columns", "df['age']").
bool detect_implicit_return(std::string_view last_line);

namespace rewrite {

struct SetupMaskResult {
    std::string text;
    bool found_magic = false;
    bool found_import = false;
};

SetupMaskResult mask_setup_lines(std::string_view text);
std::string delete_comments(std::string_view text);
std::string clear_print_strings(std::string_view text);
std::string mask_paths(std::string_view text);
std::string mask_implicit_return(std::string_view text);
std::string collapse_blank_lines(std::string_view text);

/// `content` is the literal body without prefix and quotes.
bool is_path_literal(std::string_view content, bool raw);

/// Flags derivable from processed text (everything except has_magic).
PreprocessFlags scan_flags(std::string_view processed);

bool is_constant_declaration(std::string_view line);

}  // namespace rewrite

}  // namespace jupylabel
