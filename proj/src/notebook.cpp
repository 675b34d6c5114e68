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

#include "jupylabel/notebook.hpp"

#include "jupylabel/error.hpp"
#include "jupylabel/fileio.hpp"

namespace jupylabel {

std::string_view to_string(CellKind k) noexcept {
    switch (k) {
        case CellKind::code: return "code";
        case CellKind::markdown: return "markdown";
        case CellKind::raw: return "raw";
    }
    return "code";
}

std::string_view to_string(OutputType t) noexcept {
    switch (t) {
        case OutputType::stream: return "stream";
        case OutputType::display_data: return "display_data";
        case OutputType::execute_result: return "execute_result";
        case OutputType::error: return "error";
        case OutputType::unknown: return "unknown";
    }
    return "unknown";
}

OutputType parse_output_type(std::string_view name) noexcept {
    if (name == "stream") return OutputType::stream;
    if (name == "display_data") return OutputType::display_data;
    if (name == "execute_result") return OutputType::execute_result;
    if (name == "error") return OutputType::error;
    return OutputType::unknown;
}

std::vector<std::string> Cell::tags() const {
    std::vector<std::string> out;
    if (!metadata.is_object()) return out;
    auto it = metadata.find("tags");
    if (it == metadata.end() || !it->is_array()) return out;
    for (const auto& t : *it) {
        if (t.is_string()) out.push_back(t.get<std::string>());
    }
    return out;
}

void Notebook::renumber() {
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i].stable_index = i;
}

std::vector<std::string> split_source_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start + 1));
        start = nl + 1;
    }
    return lines;
}

std::string join_multiline(const Json& value) {
    if (value.is_string()) return value.get<std::string>();
    std::string out;
    if (value.is_array()) {
        for (const auto& part : value) {
            if (part.is_string()) out += part.get_ref<const std::string&>();
        }
    }
    return out;
}

namespace {

CellOutput parse_output(const Json& j, std::size_t cell_index) {
    if (!j.is_object()) {
        throw SchemaViolation("output of cell " + std::to_string(cell_index) + " is not an object");
    }
    CellOutput out;
    out.raw_payload = j;
    auto type_it = j.find("output_type");
    if (type_it != j.end() && type_it->is_string()) {
        out.output_type = parse_output_type(type_it->get_ref<const std::string&>());
    }
    switch (out.output_type) {
        case OutputType::stream:
            if (auto t = j.find("text"); t != j.end()) out.text_payload = join_multiline(*t);
            break;
        case OutputType::display_data:
        case OutputType::execute_result:
            if (auto d = j.find("data"); d != j.end() && d->is_object()) {
                if (auto t = d->find("text/plain"); t != d->end()) out.text_payload = join_multiline(*t);
            }
            break;
        case OutputType::error: {
            auto ename = j.value("ename", std::string{});
            auto evalue = j.value("evalue", std::string{});
            out.text_payload = ename + ": " + evalue;
            break;
        }
        case OutputType::unknown:
            break;
    }
    return out;
}

Cell parse_cell(const Json& j, std::size_t index) {
    const auto where = "cell " + std::to_string(index);
    if (!j.is_object()) throw SchemaViolation(where + " is not an object");
    auto type_it = j.find("cell_type");
    if (type_it == j.end() || !type_it->is_string()) throw SchemaViolation(where + " has no cell_type");

    Cell cell;
    cell.stable_index = index;
    const auto& type = type_it->get_ref<const std::string&>();
    if (type == "code") {
        cell.kind = CellKind::code;
    } else if (type == "markdown") {
        cell.kind = CellKind::markdown;
    } else if (type == "raw") {
        cell.kind = CellKind::raw;
    } else {
        throw SchemaViolation(where + " has unsupported cell_type '" + type + "'");
    }

    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& key = it.key();
        if (key == "cell_type") continue;
        if (key == "source") {
            if (!it->is_string() && !it->is_array()) throw SchemaViolation(where + " source is not text");
            cell.source = join_multiline(*it);
        } else if (key == "metadata") {
            if (!it->is_object()) throw SchemaViolation(where + " metadata is not an object");
            cell.metadata = *it;
        } else if (cell.kind == CellKind::code && key == "outputs") {
            if (!it->is_array()) throw SchemaViolation(where + " outputs is not an array");
            for (const auto& o : *it) cell.outputs.push_back(parse_output(o, index));
        } else if (cell.kind == CellKind::code && key == "execution_count") {
            if (it->is_number_integer()) {
                cell.execution_count = it->get<std::int64_t>();
            } else if (!it->is_null()) {
                throw SchemaViolation(where + " execution_count is not an integer");
            }
        } else {
            cell.extra[key] = *it;
        }
    }
    return cell;
}

Json cell_to_json(const Cell& cell) {
    Json j = cell.extra;
    if (!j.is_object()) j = Json::object();
    j["cell_type"] = std::string(to_string(cell.kind));
    j["metadata"] = cell.metadata;
    j["source"] = split_source_lines(cell.source);
    if (cell.kind == CellKind::code) {
        j["execution_count"] = cell.execution_count ? Json(*cell.execution_count) : Json(nullptr);
        Json outputs = Json::array();
        for (const auto& o : cell.outputs) outputs.push_back(o.raw_payload);
        j["outputs"] = std::move(outputs);
    }
    return j;
}

}  // namespace

Notebook notebook_from_json(const Json& doc) {
    if (!doc.is_object()) throw SchemaViolation("notebook root is not an object");

    auto major_it = doc.find("nbformat");
    if (major_it == doc.end() || !major_it->is_number_integer()) {
        throw SchemaViolation("missing integer 'nbformat'");
    }
    Notebook nb;
    nb.format_major = major_it->get<int>();
    if (nb.format_major != 4) {
        throw UnsupportedFormat("nbformat " + std::to_string(nb.format_major) + " (only 4 is supported)");
    }

    auto cells_it = doc.find("cells");
    if (cells_it == doc.end() || !cells_it->is_array()) throw SchemaViolation("missing 'cells' array");

    nb.format_minor = 0;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto& key = it.key();
        if (key == "nbformat" || key == "cells") continue;
        if (key == "nbformat_minor") {
            if (!it->is_number_integer()) throw SchemaViolation("'nbformat_minor' is not an integer");
            nb.format_minor = it->get<int>();
        } else if (key == "metadata") {
            if (!it->is_object()) throw SchemaViolation("notebook metadata is not an object");
            nb.metadata = *it;
        } else {
            nb.extra[key] = *it;
        }
    }

    nb.cells.reserve(cells_it->size());
    std::size_t index = 0;
    for (const auto& c : *cells_it) nb.cells.push_back(parse_cell(c, index++));
    return nb;
}

Notebook parse_notebook(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw MalformedJson(e.what());
    }
    return notebook_from_json(doc);
}

Json notebook_to_json(const Notebook& nb) {
    Json j = nb.extra;
    if (!j.is_object()) j = Json::object();
    j["nbformat"] = nb.format_major;
    j["nbformat_minor"] = nb.format_minor;
    j["metadata"] = nb.metadata;
    Json cells = Json::array();
    for (const auto& c : nb.cells) cells.push_back(cell_to_json(c));
    j["cells"] = std::move(cells);
    return j;
}

std::string serialize_notebook(const Notebook& nb) {
    // Keep non-ASCII text as-is, like Jupyter does; replace invalid UTF-8 instead of throwing.
    auto text = notebook_to_json(nb).dump(1, ' ', false, Json::error_handler_t::replace);
    text.push_back('\n');
    return text;
}

std::vector<Cell> code_cells(const Notebook& nb) {
    std::vector<Cell> out;
    for (const auto& c : nb.cells) {
        if (c.kind == CellKind::code) out.push_back(c);
    }
    return out;
}

Notebook read_notebook_file(const std::string& path) { return parse_notebook(read_file(path)); }

}  // namespace jupylabel
