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

#include "jupylabel/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "jupylabel/error.hpp"
#include "jupylabel/evalkit.hpp"
#include "jupylabel/fileio.hpp"
#include "jupylabel/model_io.hpp"
#include "jupylabel/training.hpp"

namespace fs = std::filesystem;

namespace jupylabel {

namespace {

constexpr std::string_view kLabeledSuffix = ".labeled.ipynb";
constexpr std::string_view kStrippedSuffix = ".stripped.ipynb";

// Keeps the benchmarked work observable.
volatile std::size_t bench_sink = 0;

struct Options {
    std::vector<std::string> inputs;
    std::string output_dir;
    bool in_place = false;
    std::string model;
    std::string mode = "headers";
    std::string routing = "per_activity";
    bool debug = false;
    bool export_table = false;
    std::uint64_t seed = 7;
    unsigned jobs = 1;
    int repeat = 1;
    std::string blocklist;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
    if (dynamic_cast<const ArtifactVersionMismatch*>(&e) || dynamic_cast<const ArtifactFormat*>(&e) ||
        dynamic_cast<const IncompleteModelSet*>(&e) || dynamic_cast<const UnsupportedFormat*>(&e)) {
        return kExitModel;
    }
    return kExitIo;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_generated_output(const fs::path& p) {
    const auto name = p.filename().string();
    return ends_with(name, kLabeledSuffix) || ends_with(name, kStrippedSuffix);
}

// `a.ipynb` -> `a<suffix>` next to it, or the mirrored path under --output-dir.
fs::path output_path_for(const NotebookInput& in, const Options& opts, std::string_view suffix) {
    if (opts.in_place) return in.path;
    if (!opts.output_dir.empty()) return fs::path(opts.output_dir) / in.relative;
    return in.path.parent_path() / (in.path.stem().string() + std::string(suffix));
}

fs::path table_path_for(const fs::path& notebook_out) {
    return notebook_out.parent_path() / (notebook_out.stem().string() + ".table.json");
}

std::string resolve_model_path(const Options& opts) {
    if (!opts.model.empty()) return opts.model;
    if (const char* env = std::getenv(kModelEnvVar); env != nullptr && *env != '\0') return env;
    throw UsageError(std::string("no model artifact: pass --model or set ") + kModelEnvVar);
}

PipelineConfig pipeline_config(const Options& opts) {
    PipelineConfig cfg;
    cfg.routing = parse_routing(opts.routing).value_or(Routing::per_activity);
    return cfg;
}

std::vector<std::string> load_blocklist(const Options& opts) {
    if (opts.blocklist.empty()) return default_blocklist();
    std::vector<std::string> patterns;
    std::istringstream in(read_file(opts.blocklist));
    for (std::string line; std::getline(in, line);) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty() && line.front() != '#') patterns.push_back(line);
    }
    return patterns;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string debug_row(const std::string& where, const CellClassification& row) {
    std::string line = where + " cell " + std::to_string(row.stable_index) + ": rules=[";
    for (std::size_t i = 0; i < row.rule_hits.size(); ++i) {
        const auto& h = row.rule_hits[i];
        if (i) line += ", ";
        line += std::string(to_string(h.rule_id)) + "->" + std::string(to_string(h.label)) + " (" + h.evidence + ")";
    }
    line += "] models={";
    bool first = true;
    for (auto a : kAllActivities) {
        const auto& p = row.probabilities[index_of(a)];
        if (!p) continue;
        if (!first) line += ", ";
        line += std::string(to_string(a)) + ": " + fmt("%.6f", *p);
        first = false;
    }
    line += "} labels=";
    line += row.unlabeled ? std::string("(none)") : header_text(row.labels).substr(3);
    return line + "\n";
}

struct Outcome {
    int code = kExitOk;
    std::string message;
    std::string debug;
};

template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
    const auto workers = static_cast<std::size_t>(std::clamp<unsigned>(jobs, 1u, 256u));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) body(i);
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < std::min(workers, n); ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

// Runs `one` per notebook, then reports in path order so output never depends on scheduling.
template <typename F>
int run_batch(const std::vector<NotebookInput>& inputs, const Options& opts, std::ostream& out, std::ostream& err,
              F&& one) {
    if (inputs.empty()) {
        err << "error: no notebooks found\n";
        return kExitIo;
    }
    std::vector<Outcome> outcomes(inputs.size());
    parallel_for(inputs.size(), opts.jobs, [&](std::size_t i) {
        try {
            outcomes[i] = one(inputs[i]);
        } catch (const std::exception& e) {
            outcomes[i].code = exit_code_for(e);
            outcomes[i].message = e.what();
        }
    });
    std::size_t failed = 0;
    int first_code = kExitOk;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& o = outcomes[i];
        err << o.debug;
        if (o.code != kExitOk) {
            ++failed;
            if (first_code == kExitOk) first_code = o.code;
            err << "error: " << inputs[i].path.string() << ": " << o.message << "\n";
        } else {
            out << o.message << "\n";
        }
    }
    if (failed == 0) return kExitOk;
    return failed == inputs.size() ? first_code : kExitPartial;
}

void check_output_flags(const Options& opts) {
    if (opts.in_place && !opts.output_dir.empty()) throw UsageError("--in-place and --output-dir are exclusive");
}

int cmd_label(const Options& opts, std::ostream& out, std::ostream& err) {
    check_output_flags(opts);
    const auto mode = parse_annotation_mode(opts.mode).value_or(AnnotationMode::headers);
    const auto cfg = pipeline_config(opts);
    const auto models = load_model_set(resolve_model_path(opts));
    const auto inputs = discover_notebooks(opts.inputs);
    return run_batch(inputs, opts, out, err, [&](const NotebookInput& in) {
        Outcome o;
        const auto nb = read_notebook_file(in.path.string());
        const auto table = classify_notebook(nb, models, cfg);
        const auto annotated = annotate_notebook(nb, table, mode);
        const auto target = output_path_for(in, opts, kLabeledSuffix);
        write_file_atomic(target.string(), serialize_notebook(annotated));
        if (opts.export_table) {
            write_file_atomic(table_path_for(target).string(), table_to_json(table).dump(1) + "\n");
        }
        if (opts.debug) {
            for (const auto& row : table.rows) o.debug += debug_row(in.path.string(), row);
        }
        const auto unlabeled = std::count_if(table.rows.begin(), table.rows.end(),
                                             [](const CellClassification& r) { return r.unlabeled; });
        o.message = "labeled " + in.path.string() + " -> " + target.string() + " (" +
                    std::to_string(table.rows.size()) + " code cells, " + std::to_string(unlabeled) + " unlabeled)";
        return o;
    });
}

int cmd_strip(const Options& opts, std::ostream& out, std::ostream& err) {
    check_output_flags(opts);
    const auto inputs = discover_notebooks(opts.inputs);
    return run_batch(inputs, opts, out, err, [&](const NotebookInput& in) {
        Outcome o;
        const auto nb = read_notebook_file(in.path.string());
        const auto stripped = strip_annotations(nb);
        const auto target = output_path_for(in, opts, kStrippedSuffix);
        write_file_atomic(target.string(), serialize_notebook(stripped));
        o.message = "stripped " + in.path.string() + " -> " + target.string() + " (" +
                    std::to_string(nb.cells.size() - stripped.cells.size()) + " header cells removed)";
        return o;
    });
}

LabeledCellDataset load_clean_dataset(const Options& opts, std::ostream& out) {
    if (opts.inputs.size() != 1) throw UsageError("expects exactly one labelled dataset in --input");
    const auto raw = load_dataset(opts.inputs.front());
    auto ds = dedupe(filter_blocklist(raw, load_blocklist(opts)));
    out << "dataset " << raw.name << ": " << raw.records.size() << " records, " << ds.records.size()
        << " after blocklist and dedupe\n";
    return ds;
}

int cmd_train(const Options& opts, std::ostream& out, std::ostream& err) {
    std::string artifact = opts.model;
    if (artifact.empty()) {
        if (opts.output_dir.empty()) throw UsageError("train needs --model or --output-dir for the artifact");
        artifact = (fs::path(opts.output_dir) / "jupylabel-model.json").string();
    }
    const auto ds = load_clean_dataset(opts, out);
    TrainingConfig cfg;
    cfg.split.seed = opts.seed;
    cfg.hyperparams.seed = opts.seed;
    const auto result = train_model_set(ds, cfg);
    save_model_set(result.models, artifact);
    const fs::path ap(artifact);
    const auto report_path = ap.parent_path() / (ap.stem().string() + ".report.json");
    write_file_atomic(report_path.string(), training_report_to_json(result.report).dump(1) + "\n");
    for (const auto& a : result.report.activities) {
        out << "  " << to_string(a.activity) << ": learning_rate " << fmt("%.2f", a.learning_rate) << ", inner val F1 "
            << fmt("%.4f", a.val_f1) << ", train accuracy " << fmt("%.4f", a.train_accuracy) << "\n";
    }
    if (opts.debug) {
        for (const auto& line : result.report.audit) err << line << "\n";
    }
    out << "wrote " << artifact << " and " << report_path.string() << "\n";
    return kExitOk;
}

int cmd_eval(const Options& opts, std::ostream& out, std::ostream& err) {
    const auto models = load_model_set(resolve_model_path(opts));
    const auto ds = load_clean_dataset(opts, out);
    const auto ev = evaluate_dataset(ds, models, pipeline_config(opts));
    const auto dist = label_distribution(ds);
    out << "gold label distribution\n" << render_distribution(dist) << "\n" << render_metrics(ev.metrics);
    if (opts.debug) {
        for (const auto& row : ev.rows) {
            err << debug_row(ds.records[row.stable_index].notebook_id, row);
        }
    }
    if (!opts.output_dir.empty()) {
        const auto dir = fs::path(opts.output_dir);
        write_file_atomic((dir / "metrics.json").string(), metrics_to_json(ev.metrics).dump(1) + "\n");
        if (opts.export_table) {
            ClassificationTable t{ev.rows};
            write_file_atomic((dir / "eval.table.json").string(), table_to_json(t).dump(1) + "\n");
        }
        out << "wrote " << (dir / "metrics.json").string() << "\n";
    }
    return kExitOk;
}

int cmd_bench(const Options& opts, std::ostream& out, std::ostream&) {
    if (opts.repeat < 1) throw UsageError("--repeat must be at least 1");
    const auto inputs = discover_notebooks(opts.inputs);
    if (inputs.empty()) throw IoError("no notebooks found");
    std::vector<std::string> texts;
    for (const auto& in : inputs) texts.push_back(read_file(in.path.string()));

    const auto t0 = std::chrono::steady_clock::now();
    const auto models = load_model_set(resolve_model_path(opts));
    const std::chrono::duration<double> load = std::chrono::steady_clock::now() - t0;

    const auto r = bench_corpus(texts, models, pipeline_config(opts),
                                parse_annotation_mode(opts.mode).value_or(AnnotationMode::headers), opts.repeat);
    out << "model load: " << fmt("%.4f", load.count()) << " s\n";
    out << "notebooks: " << r.notebooks << " x " << r.repeats << " repeats\n";
    out << "total: " << fmt("%.4f", r.total_seconds) << " s\n";
    out << "mean: " << fmt("%.6f", r.mean_seconds_per_notebook) << " s/notebook\n";
    return kExitOk;
}

}  // namespace

std::vector<NotebookInput> discover_notebooks(const std::vector<std::string>& inputs) {
    std::map<fs::path, fs::path> found;
    for (const auto& raw : inputs) {
        const fs::path p(raw);
        std::error_code ec;
        if (fs::is_regular_file(p, ec)) {
            found.emplace(p, p.filename());
            continue;
        }
        if (!fs::is_directory(p, ec)) throw IoError("no such file or directory: " + raw);
        auto it = fs::recursive_directory_iterator(p, fs::directory_options::skip_permission_denied, ec);
        if (ec) throw IoError("cannot read directory " + raw + ": " + ec.message());
        for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
            if (ec) throw IoError("cannot read directory " + raw + ": " + ec.message());
            const auto& entry = it->path();
            if (it->is_directory() && entry.filename() == ".ipynb_checkpoints") {
                it.disable_recursion_pending();
                continue;
            }
            if (!it->is_regular_file() || entry.extension() != ".ipynb" || is_generated_output(entry)) continue;
            found.emplace(entry, fs::relative(entry, p));
        }
    }
    std::vector<NotebookInput> out;
    out.reserve(found.size());
    for (auto& [path, rel] : found) out.push_back(NotebookInput{path, rel});
    return out;
}

BenchResult bench_corpus(const std::vector<std::string>& notebook_texts, const ActivityModelSet& models,
                         const PipelineConfig& cfg, AnnotationMode mode, int repeat) {
    BenchResult r;
    r.notebooks = notebook_texts.size();
    r.repeats = repeat;
    std::size_t sink = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < repeat; ++k) {
        for (const auto& text : notebook_texts) {
            const auto nb = parse_notebook(text);
            const auto table = classify_notebook(nb, models, cfg);
            sink += serialize_notebook(annotate_notebook(nb, table, mode)).size();
        }
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    r.total_seconds = elapsed.count();
    const auto runs = static_cast<double>(r.notebooks) * repeat;
    r.mean_seconds_per_notebook = runs > 0 ? r.total_seconds / runs : 0.0;
    bench_sink = sink;
    return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Labels Jupyter notebook code cells with machine-learning activities.", "jupylabel"};
    app.require_subcommand(1);
    Options opts;

    auto add_inputs = [&](CLI::App* sub, const char* what) {
        sub->add_option("--input", opts.inputs, what)->required();
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", opts.model, std::string("Model artifact (falls back to $") + kModelEnvVar + ")");
    };
    auto add_routing = [&](CLI::App* sub) {
        sub->add_option("--routing", opts.routing, "per_activity or cell_level")
            ->check(CLI::IsMember({"per_activity", "cell_level"}));
    };
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", opts.mode, "headers or tags")->check(CLI::IsMember({"headers", "tags"}));
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output-dir", opts.output_dir, "Write outputs under this directory");
        sub->add_flag("--in-place", opts.in_place, "Overwrite the input notebooks");
        sub->add_option("--jobs", opts.jobs, "Notebooks processed in parallel")->check(CLI::Range(1u, 256u));
    };

    auto* label = app.add_subcommand("label", "Annotate notebooks");
    add_inputs(label, "Notebook files or directories");
    add_model(label);
    add_mode(label);
    add_routing(label);
    add_output(label);
    label->add_flag("--debug", opts.debug, "Print per-cell rule hits and model probabilities to stderr");
    label->add_flag("--export-table", opts.export_table, "Write the classification table next to each output");
    label->add_option("--seed", opts.seed, "Accepted for symmetry; labelling is deterministic");

    auto* train = app.add_subcommand("train", "Train the eight activity models");
    add_inputs(train, "Labelled dataset JSON");
    train->add_option("--model", opts.model, "Artifact path to write");
    train->add_option("--output-dir", opts.output_dir, "Directory for jupylabel-model.json when --model is absent");
    train->add_option("--seed", opts.seed, "Split, resampling and model seed");
    train->add_option("--blocklist", opts.blocklist, "File of source patterns to exclude (one per line)");
    train->add_flag("--debug", opts.debug, "Print the resampling audit to stderr");

    auto* eval = app.add_subcommand("eval", "Score a model set against a labelled dataset");
    add_inputs(eval, "Labelled dataset JSON");
    add_model(eval);
    add_routing(eval);
    eval->add_option("--output-dir", opts.output_dir, "Write metrics.json here");
    eval->add_option("--blocklist", opts.blocklist, "File of source patterns to exclude (one per line)");
    eval->add_flag("--debug", opts.debug, "Print per-cell rule hits and model probabilities to stderr");
    eval->add_flag("--export-table", opts.export_table, "Also write eval.table.json to --output-dir");

    auto* bench = app.add_subcommand("bench", "Time labelling over a notebook corpus");
    add_inputs(bench, "Notebook files or directories");
    add_model(bench);
    add_mode(bench);
    add_routing(bench);
    bench->add_option("--repeat", opts.repeat, "Passes over the corpus")->check(CLI::PositiveNumber);

    auto* strip = app.add_subcommand("strip", "Remove generated annotations");
    add_inputs(strip, "Notebook files or directories");
    add_output(strip);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (label->parsed()) return cmd_label(opts, out, err);
        if (train->parsed()) return cmd_train(opts, out, err);
        if (eval->parsed()) return cmd_eval(opts, out, err);
        if (bench->parsed()) return cmd_bench(opts, out, err);
        return cmd_strip(opts, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace jupylabel
