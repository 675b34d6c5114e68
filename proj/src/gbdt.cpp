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

#include "jupylabel/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "jupylabel/error.hpp"
#include "jupylabel/random.hpp"

namespace jupylabel {

namespace {

struct SplitCandidate {
    double gain = 0.0;
    std::int32_t feature = -1;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<Example>& examples, const std::vector<double>& grad,
                const std::vector<double>& hess, const Hyperparams& hp)
        : examples_(examples), grad_(grad), hess_(hess), hp_(hp) {}

    Tree build() {
        Tree tree;
        std::vector<std::uint32_t> all(examples_.size());
        for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
        grow(tree, all, 0);
        return tree;
    }

private:
    std::int32_t grow(Tree& tree, const std::vector<std::uint32_t>& rows, int depth) {
        double g_sum = 0.0;
        double h_sum = 0.0;
        for (auto r : rows) {
            g_sum += grad_[r];
            h_sum += hess_[r];
        }
        const auto id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        tree.nodes[id].weight = -g_sum / (h_sum + hp_.l2_lambda);

        if (depth >= hp_.max_depth) return id;
        const auto split = best_split(rows, g_sum, h_sum);
        if (split.feature < 0) return id;

        std::vector<std::uint32_t> left_rows;
        std::vector<std::uint32_t> right_rows;
        for (auto r : rows) {
            const double value = examples_[r].features.at(static_cast<std::uint32_t>(split.feature));
            (value < split.threshold ? left_rows : right_rows).push_back(r);
        }

        const auto left = grow(tree, left_rows, depth + 1);
        const auto right = grow(tree, right_rows, depth + 1);
        auto& node = tree.nodes[id];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left;
        node.right = right;
        node.weight = 0.0;
        return id;
    }

    double score(double g, double h) const { return g * g / (h + hp_.l2_lambda); }

    SplitCandidate best_split(const std::vector<std::uint32_t>& rows, double g_sum, double h_sum) const {
        struct Entry {
            std::uint32_t feature;
            std::uint32_t value;
            std::uint32_t row;
        };
        std::vector<Entry> entries;
        for (auto r : rows) {
            for (const auto& [col, count] : examples_[r].features.entries) entries.push_back({col, count, r});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.feature != b.feature) return a.feature < b.feature;
            if (a.value != b.value) return a.value < b.value;
            return a.row < b.row;
        });

        const double parent = score(g_sum, h_sum);
        SplitCandidate best;
        std::size_t i = 0;
        while (i < entries.size()) {
            const auto feature = entries[i].feature;
            std::size_t end = i;
            double g_nonzero = 0.0;
            double h_nonzero = 0.0;
            while (end < entries.size() && entries[end].feature == feature) {
                g_nonzero += grad_[entries[end].row];
                h_nonzero += hess_[entries[end].row];
                ++end;
            }
            const std::size_t zero_rows = rows.size() - (end - i);

            // Left side starts with every row whose count is zero.
            double g_left = g_sum - g_nonzero;
            double h_left = h_sum - h_nonzero;
            double left_max = 0.0;
            bool left_has_rows = zero_rows > 0;
            std::size_t k = i;
            while (k < end) {
                const auto value = entries[k].value;
                if (left_has_rows) {
                    consider(best, feature, (left_max + value) / 2.0, g_left, h_left, g_sum, h_sum, parent);
                }
                while (k < end && entries[k].value == value) {
                    g_left += grad_[entries[k].row];
                    h_left += hess_[entries[k].row];
                    ++k;
                }
                left_max = value;
                left_has_rows = true;
            }
            i = end;
        }
        return best;
    }

    void consider(SplitCandidate& best, std::uint32_t feature, double threshold, double g_left, double h_left,
                  double g_sum, double h_sum, double parent) const {
        const double g_right = g_sum - g_left;
        const double h_right = h_sum - h_left;
        if (h_left < hp_.min_child_weight || h_right < hp_.min_child_weight) return;
        const double gain = 0.5 * (score(g_left, h_left) + score(g_right, h_right) - parent) - hp_.gamma;
        if (gain > best.gain) {
            best.gain = gain;
            best.feature = static_cast<std::int32_t>(feature);
            best.threshold = threshold;
        }
    }

    const std::vector<Example>& examples_;
    const std::vector<double>& grad_;
    const std::vector<double>& hess_;
    const Hyperparams& hp_;
};

void check_dimensions(const std::vector<Example>& examples) {
    const auto dim = examples.front().features.dimension;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& v = examples[i].features;
        if (v.dimension != dim) {
            throw DimensionMismatch("example " + std::to_string(i) + " has dimension " + std::to_string(v.dimension) +
                                    ", expected " + std::to_string(dim));
        }
        if (!v.entries.empty() && v.entries.back().first >= dim) {
            throw DimensionMismatch("example " + std::to_string(i) + " has a column beyond its dimension");
        }
    }
}

void check_both_classes(const std::vector<Example>& examples) {
    const auto positives = std::count_if(examples.begin(), examples.end(), [](const Example& e) { return e.label; });
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(examples.size())) {
        throw SingleClass(std::to_string(examples.size()) + " examples, " + std::to_string(positives) + " positive");
    }
}

}  // namespace

void Hyperparams::validate() const {
    if (rounds < 0) throw InvalidHyperparams("rounds must be >= 0");
    if (max_depth < 0) throw InvalidHyperparams("max_depth must be >= 0");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw InvalidHyperparams("learning_rate must be in (0, 1]");
    if (!(l2_lambda >= 0.0)) throw InvalidHyperparams("l2_lambda must be >= 0");
    if (!(min_child_weight >= 0.0)) throw InvalidHyperparams("min_child_weight must be >= 0");
    if (!(gamma >= 0.0)) throw InvalidHyperparams("gamma must be >= 0");
}

double Tree::leaf_weight(const CountVector& v) const {
    std::int32_t id = 0;
    while (!nodes[id].is_leaf()) {
        const auto& n = nodes[id];
        id = static_cast<double>(v.at(static_cast<std::uint32_t>(n.feature))) < n.threshold ? n.left : n.right;
    }
    return nodes[id].weight;
}

int Tree::depth() const {
    if (nodes.empty()) return 0;
    // Iterative DFS over (node, depth).
    int deepest = 0;
    std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!nodes[id].is_leaf()) {
            stack.emplace_back(nodes[id].left, d + 1);
            stack.emplace_back(nodes[id].right, d + 1);
        }
    }
    return deepest;
}

std::size_t Tree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double GbdtModel::margin(const CountVector& v) const {
    if (v.dimension != dimension) {
        throw DimensionMismatch("vector dimension " + std::to_string(v.dimension) + ", model expects " +
                                std::to_string(dimension));
    }
    double sum = 0.0;
    for (const auto& t : trees) sum += t.leaf_weight(v);
    return base_score + learning_rate * sum;
}

double sigmoid(double x) noexcept {
    double p;
    if (x >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        p = e / (1.0 + e);
    }
    constexpr double kLow = std::numeric_limits<double>::min();
    const double high = std::nextafter(1.0, 0.0);
    return std::clamp(p, kLow, high);
}

std::vector<Example> resample(const std::vector<Example>& examples, std::uint64_t seed) {
    check_both_classes(examples);
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < examples.size(); ++i) (examples[i].label ? positives : negatives).push_back(i);
    const auto& minority = positives.size() < negatives.size() ? positives : negatives;
    const auto deficit = std::max(positives.size(), negatives.size()) - minority.size();

    std::mt19937_64 rng(seed);
    std::vector<Example> out = examples;
    out.reserve(examples.size() + deficit);
    for (std::size_t k = 0; k < deficit; ++k) {
        out.push_back(examples[minority[draw_below(rng, minority.size())]]);
    }
    seeded_shuffle(out, rng);
    return out;
}

GbdtModel train(const std::vector<Example>& examples, const Hyperparams& hp) {
    hp.validate();
    if (examples.empty()) throw SingleClass("no training examples");
    check_dimensions(examples);
    check_both_classes(examples);

    GbdtModel model;
    model.learning_rate = hp.learning_rate;
    model.base_score = 0.0;
    model.dimension = examples.front().features.dimension;
    model.hyperparams = hp;
    model.trees.reserve(static_cast<std::size_t>(hp.rounds));

    const std::size_t n = examples.size();
    std::vector<double> margin(n, model.base_score);
    std::vector<double> grad(n);
    std::vector<double> hess(n);
    for (int round = 0; round < hp.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(margin[i]);
            grad[i] = p - (examples[i].label ? 1.0 : 0.0);
            hess[i] = p * (1.0 - p);
        }
        Tree tree = TreeBuilder(examples, grad, hess, hp).build();
        for (std::size_t i = 0; i < n; ++i) margin[i] += hp.learning_rate * tree.leaf_weight(examples[i].features);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

double predict_proba(const GbdtModel& model, const CountVector& v) { return sigmoid(model.margin(v)); }

bool predict(const GbdtModel& model, const CountVector& v, double threshold) {
    return predict_proba(model, v) >= threshold;
}

double predict_proba_text(const GbdtModel& model, std::string_view text) {
    return predict_proba(model, vectorize(text, model.vocabulary, model.tokenizer));
}

double positive_f1(const GbdtModel& model, const std::vector<Example>& examples) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& e : examples) {
        const bool p = predict(model, e.features);
        if (p && e.label) ++tp;
        if (p && !e.label) ++fp;
        if (!p && e.label) ++fn;
    }
    const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp) + static_cast<double>(fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

GridSearchResult grid_search_learning_rate(const std::vector<Example>& train_split,
                                           const std::vector<Example>& val_split,
                                           const std::vector<double>& grid, const Hyperparams& hp_base) {
    if (grid.empty()) throw InvalidHyperparams("empty learning-rate grid");
    const std::set<double> rates(grid.begin(), grid.end());

    GridSearchResult result;
    bool first = true;
    for (double rate : rates) {
        Hyperparams hp = hp_base;
        hp.learning_rate = rate;
        const auto model = train(train_split, hp);
        const double f1 = positive_f1(model, val_split);
        result.scores.emplace_back(rate, f1);
        if (first || f1 > result.val_f1) {
            result.learning_rate = rate;
            result.val_f1 = f1;
            first = false;
        }
    }
    return result;
}

bool ActivityModelSet::complete() const noexcept {
    for (auto a : kAllActivities) {
        if (!models.contains(a)) return false;
    }
    return models.size() == kActivityCount;
}

const GbdtModel& ActivityModelSet::at(ActivityLabel a) const {
    auto it = models.find(a);
    if (it == models.end()) throw IncompleteModelSet("no model for " + std::string(to_string(a)));
    return it->second;
}

}  // namespace jupylabel
