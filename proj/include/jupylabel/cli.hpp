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

// Command-line front end: label, train, eval, bench and strip.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "jupylabel/gbdt.hpp"
#include "jupylabel/pipeline.hpp"

namespace jupylabel {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitIo = 2,
    kExitModel = 3,
    kExitPartial = 4,
};

inline constexpr const char* kModelEnvVar = "JUPYLABEL_MODEL";

/// Parses argv and runs the selected command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct NotebookInput {
    std::filesystem::path path;
    /// Path below the directory it was found in (the file name for file inputs).
    std::filesystem::path relative;
};

/// Files are taken as given; directories are searched recursively for *.ipynb, skipping
/// checkpoint folders and files this tool generated. Sorted by path. Throws IoError.
std::vector<NotebookInput> discover_notebooks(const std::vector<std::string>& inputs);

struct BenchResult {
    std::size_t notebooks = 0;
    int repeats = 0;
    double total_seconds = 0.0;
    double mean_seconds_per_notebook = 0.0;
};

/// Parse, classify, annotate and serialize every notebook `repeat` times, in memory.
BenchResult bench_corpus(const std::vector<std::string>& notebook_texts, const ActivityModelSet& models,
                         const PipelineConfig& cfg, AnnotationMode mode, int repeat);

}  // namespace jupylabel
