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

#include "jupylabel/model_io.hpp"

#include "jupylabel/error.hpp"
#include "jupylabel/fileio.hpp"

namespace jupylabel {

using Json = nlohmann::json;

namespace {

Json tree_node_to_json(const Tree& tree, std::int32_t id) {
    const auto& n = tree.nodes.at(static_cast<std::size_t>(id));
    if (n.is_leaf()) return Json{{"leaf", n.weight}};
    return Json{
        {"feature", n.feature},
        {"threshold", n.threshold},
        {"left", tree_node_to_json(tree, n.left)},
        {"right", tree_node_to_json(tree, n.right)},
    };
}

std::int32_t tree_node_from_json(const Json& j, Tree& tree, std::uint32_t dimension, int depth) {
    if (depth > 64) throw ArtifactFormat("tree deeper than 64 levels");
    if (!j.is_object()) throw ArtifactFormat("tree node is not an object");
    const auto id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    if (auto leaf = j.find("leaf"); leaf != j.end()) {
        if (!leaf->is_number()) throw ArtifactFormat("leaf weight is not a number");
        tree.nodes[id].weight = leaf->get<double>();
        return id;
    }
    const auto feature = j.at("feature").get<std::int64_t>();
    if (feature < 0 || feature >= static_cast<std::int64_t>(dimension)) {
        throw ArtifactFormat("split feature " + std::to_string(feature) + " outside dimension " +
                             std::to_string(dimension));
    }
    const auto threshold = j.at("threshold").get<double>();
    const auto left = tree_node_from_json(j.at("left"), tree, dimension, depth + 1);
    const auto right = tree_node_from_json(j.at("right"), tree, dimension, depth + 1);
    auto& node = tree.nodes[id];
    node.feature = static_cast<std::int32_t>(feature);
    node.threshold = threshold;
    node.left = left;
    node.right = right;
    return id;
}

Json hyperparams_to_json(const Hyperparams& hp) {
    return Json{
        {"rounds", hp.rounds},
        {"max_depth", hp.max_depth},
        {"learning_rate", hp.learning_rate},
        {"l2_lambda", hp.l2_lambda},
        {"min_child_weight", hp.min_child_weight},
        {"gamma", hp.gamma},
        {"seed", hp.seed},
    };
}

Hyperparams hyperparams_from_json(const Json& j) {
    Hyperparams hp;
    hp.rounds = j.at("rounds").get<int>();
    hp.max_depth = j.at("max_depth").get<int>();
    hp.learning_rate = j.at("learning_rate").get<double>();
    hp.l2_lambda = j.at("l2_lambda").get<double>();
    hp.min_child_weight = j.at("min_child_weight").get<double>();
    hp.gamma = j.at("gamma").get<double>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    return hp;
}

}  // namespace

Json model_to_json(const GbdtModel& model) {
    Json trees = Json::array();
    for (const auto& t : model.trees) trees.push_back(tree_node_to_json(t, 0));
    return Json{
        {"activity", std::string(to_string(model.activity))},
        {"base_score", model.base_score},
        {"learning_rate", model.learning_rate},
        {"dimension", model.dimension},
        {"hyperparams", hyperparams_to_json(model.hyperparams)},
        {"tokenizer",
         Json{{"mode", std::string(to_string(model.tokenizer.mode))},
              {"pattern", model.tokenizer.pattern},
              {"lowercase", model.tokenizer.lowercase}}},
        {"vocabulary", Json{{"fitted_on", model.vocabulary.fitted_on()}, {"tokens", model.vocabulary.tokens()}}},
        {"trees", std::move(trees)},
    };
}

GbdtModel model_from_json(const Json& j) {
    try {
        GbdtModel m;
        const auto name = j.at("activity").get<std::string>();
        auto activity = parse_activity(name);
        if (!activity) throw ArtifactFormat("unknown activity '" + name + "'");
        m.activity = *activity;
        m.base_score = j.at("base_score").get<double>();
        m.learning_rate = j.at("learning_rate").get<double>();
        m.dimension = j.at("dimension").get<std::uint32_t>();
        m.hyperparams = hyperparams_from_json(j.at("hyperparams"));

        const auto& tok = j.at("tokenizer");
        m.tokenizer.mode = parse_tokenizer_mode(tok.at("mode").get<std::string>());
        m.tokenizer.pattern = tok.at("pattern").get<std::string>();
        m.tokenizer.lowercase = tok.at("lowercase").get<bool>();

        const auto& vocab = j.at("vocabulary");
        m.vocabulary = Vocabulary(vocab.at("tokens").get<std::vector<std::string>>(),
                                  vocab.at("fitted_on").get<std::string>());
        if (m.vocabulary.size() != m.dimension) {
            throw ArtifactFormat("vocabulary size " + std::to_string(m.vocabulary.size()) + " != dimension " +
                                 std::to_string(m.dimension));
        }
        for (const auto& t : j.at("trees")) {
            Tree tree;
            tree_node_from_json(t, tree, m.dimension, 0);
            m.trees.push_back(std::move(tree));
        }
        return m;
    } catch (const Json::exception& e) {
        throw ArtifactFormat(e.what());
    }
}

Json model_set_to_json(const ActivityModelSet& set) {
    Json models = Json::object();
    for (const auto& [activity, model] : set.models) models[std::string(to_string(activity))] = model_to_json(model);
    return Json{
        {"format", std::string(kArtifactFormatName)},
        {"format_version", set.version},
        {"seed", set.seed},
        {"training_fingerprint", set.training_fingerprint},
        {"models", std::move(models)},
    };
}

ActivityModelSet model_set_from_json(const Json& j) {
    if (!j.is_object() || j.value("format", std::string{}) != kArtifactFormatName) {
        throw ArtifactFormat("not a jupylabel model artifact");
    }
    ActivityModelSet set;
    try {
        set.version = j.at("format_version").get<int>();
        if (set.version != kArtifactFormatVersion) {
            throw ArtifactVersionMismatch("artifact format version " + std::to_string(set.version) +
                                          ", this build reads version " + std::to_string(kArtifactFormatVersion));
        }
        set.seed = j.at("seed").get<std::uint64_t>();
        set.training_fingerprint = j.at("training_fingerprint").get<std::string>();
        for (const auto& [name, mj] : j.at("models").items()) {
            auto model = model_from_json(mj);
            if (to_string(model.activity) != name) throw ArtifactFormat("model key '" + name + "' mismatches activity");
            set.models.emplace(model.activity, std::move(model));
        }
    } catch (const Json::exception& e) {
        throw ArtifactFormat(e.what());
    }
    if (!set.complete()) {
        throw IncompleteModelSet("artifact holds " + std::to_string(set.models.size()) + " of 8 activity models");
    }
    return set;
}

std::string serialize_model_set(const ActivityModelSet& set) { return model_set_to_json(set).dump() + "\n"; }

ActivityModelSet parse_model_set(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ArtifactFormat(e.what());
    }
    return model_set_from_json(j);
}

void save_model_set(const ActivityModelSet& set, const std::string& path) {
    write_file_atomic(path, serialize_model_set(set));
}

ActivityModelSet load_model_set(const std::string& path) { return parse_model_set(read_file(path)); }

}  // namespace jupylabel
