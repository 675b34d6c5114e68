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

// In-memory model of nbformat-4 notebooks.
//
// Only the fields the classifier consults are lifted into typed members. Everything else
// (cell ids, attachments, widget state, output payloads) rides along as JSON and is written
// back unchanged, so a parse/serialize cycle is lossless up to key order and whitespace.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace jupylabel {

using Json = nlohmann::json;

enum class CellKind { code, markdown, raw };

enum class OutputType { stream, display_data, execute_result, error, unknown };

std::string_view to_string(CellKind k) noexcept;
std::string_view to_string(OutputType t) noexcept;
/// Unrecognised names map to OutputType::unknown.
OutputType parse_output_type(std::string_view name) noexcept;

struct CellOutput {
    OutputType output_type = OutputType::unknown;
    /// Concatenated textual content; empty for purely binary payloads.
    std::string text_payload;
    /// The complete output object as read from disk. Serialization emits this verbatim.
    Json raw_payload = Json::object();

    friend bool operator==(const CellOutput&, const CellOutput&) = default;
};

struct Cell {
    CellKind kind = CellKind::code;
    /// Logical source with `\n` line separators.
    std::string source;
    std::vector<CellOutput> outputs;
    std::optional<std::int64_t> execution_count;
    Json metadata = Json::object();
    /// Fields of the cell object not modelled above (e.g. "id", "attachments").
    Json extra = Json::object();
    std::size_t stable_index = 0;

    std::vector<std::string> tags() const;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Notebook {
    int format_major = 4;
    int format_minor = 5;
    Json metadata = Json::object();
    std::vector<Cell> cells;
    /// Unrecognised top-level fields.
    Json extra = Json::object();

    /// Reassigns stable_index to 0..n-1 in cell order.
    void renumber();

    friend bool operator==(const Notebook&, const Notebook&) = default;
};

/// Throws MalformedJson, UnsupportedFormat or SchemaViolation.
Notebook parse_notebook(std::string_view text);
Notebook notebook_from_json(const Json& doc);

/// nbformat-style JSON (one-space indent, sorted keys, trailing newline).
std::string serialize_notebook(const Notebook& nb);
Json notebook_to_json(const Notebook& nb);

/// Code cells in notebook order (copies; the notebook itself is never touched).
std::vector<Cell> code_cells(const Notebook& nb);

/// Splits logical text into nbformat's line array ("a\n", "b").
std::vector<std::string> split_source_lines(std::string_view text);
/// Joins a JSON string or array-of-strings multiline value.
std::string join_multiline(const Json& value);

Notebook read_notebook_file(const std::string& path);

}  // namespace jupylabel
