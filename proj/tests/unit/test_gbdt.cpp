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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "jupylabel/error.hpp"
#include "jupylabel/gbdt.hpp"
#include "test_support.hpp"

using namespace jupylabel;

namespace {

CountVector dense(const std::vector<std::uint32_t>& values) {
    CountVector v;
    v.dimension = static_cast<std::uint32_t>(values.size());
    for (std::uint32_t c = 0; c < values.size(); ++c) {
        if (values[c]) v.entries.emplace_back(c, values[c]);
    }
    return v;
}

std::vector<Example> random_examples(testsupport::CodeGen& g, std::size_t n, std::uint32_t dim) {
    std::vector<Example> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> vals(dim);
        for (auto& x : vals) x = g.coin(0.5) ? 0 : static_cast<std::uint32_t>(g.below(4));
        // Label leans on feature 0 with noise so splits carry signal.
        const bool label = (vals[0] >= 2) != g.coin(0.15);
        out.push_back({dense(vals), label});
    }
    out[0].label = true;
    out[1].label = false;
    return out;
}

double log_loss(const std::vector<Example>& ex, const std::vector<double>& margin) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const double p = sigmoid(margin[i]);
        sum -= ex[i].label ? std::log(p) : std::log(1.0 - p);
    }
    return sum / static_cast<double>(ex.size());
}

struct Stump {
    int feature = -1;
    double threshold = 0.0;
    double root = 0.0, left = 0.0, right = 0.0;
};

// Exhaustive single-split search with margins at zero.
Stump brute_force_stump(const std::vector<Example>& ex, const Hyperparams& hp) {
    const double lambda = hp.l2_lambda;
    auto score = [&](double g, double h) { return g * g / (h + lambda); };
    double G = 0.0, H = 0.0;
    for (const auto& e : ex) {
        G += 0.5 - (e.label ? 1.0 : 0.0);
        H += 0.25;
    }
    Stump best;
    best.root = -G / (H + lambda);
    double best_gain = 0.0;
    for (std::uint32_t f = 0; f < ex.front().features.dimension; ++f) {
        std::set<std::uint32_t> values;
        for (const auto& e : ex) values.insert(e.features.at(f));
        std::vector<std::uint32_t> sorted(values.begin(), values.end());
        for (std::size_t k = 1; k < sorted.size(); ++k) {
            const double t = (sorted[k - 1] + sorted[k]) / 2.0;
            double gl = 0.0, hl = 0.0;
            for (const auto& e : ex) {
                if (e.features.at(f) < t) {
                    gl += 0.5 - (e.label ? 1.0 : 0.0);
                    hl += 0.25;
                }
            }
            const double gr = G - gl, hr = H - hl;
            if (hl < hp.min_child_weight || hr < hp.min_child_weight) continue;
            const double gain = 0.5 * (score(gl, hl) + score(gr, hr) - score(G, H)) - hp.gamma;
            if (gain > best_gain) {
                best_gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = t;
                best.left = -gl / (hl + lambda);
                best.right = -gr / (hr + lambda);
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("sigmoid stays strictly inside the unit interval") {
    CHECK(sigmoid(0.0) == 0.5);
    for (double x : {-1e6, -800.0, -40.0, -1.0, 1.0, 40.0, 800.0, 1e6, std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()}) {
        CAPTURE(x);
        CHECK(sigmoid(x) > 0.0);
        CHECK(sigmoid(x) < 1.0);
    }
    CHECK(sigmoid(2.0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));
    CHECK(sigmoid(-3.0) + sigmoid(3.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("a model with zero rounds predicts exactly one half") {
    testsupport::CodeGen g(1);
    auto ex = random_examples(g, 40, 3);
    Hyperparams hp;
    hp.rounds = 0;
    const auto m = train(ex, hp);
    CHECK(m.trees.empty());
    for (const auto& e : ex) CHECK(predict_proba(m, e.features) == 0.5);
    CHECK(predict(m, ex[0].features));
    CHECK_FALSE(predict(m, ex[0].features, 0.51));
}

TEST_CASE("single split matches a brute-force oracle (property)") {
    testsupport::CodeGen g(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 8 + g.below(40);
        const auto ex = random_examples(g, n, 1 + static_cast<std::uint32_t>(g.below(5)));
        Hyperparams hp;
        hp.rounds = 1;
        hp.max_depth = 1;
        hp.learning_rate = 1.0;
        hp.l2_lambda = g.coin(0.5) ? 1.0 : 0.0;
        hp.min_child_weight = g.coin(0.5) ? 1.0 : 0.0;
        const auto oracle = brute_force_stump(ex, hp);
        const auto model = train(ex, hp);
        const auto& tree = model.trees.at(0);
        CAPTURE(trial);
        if (oracle.feature < 0) {
            REQUIRE(tree.nodes.size() == 1);
            CHECK(tree.nodes[0].weight == doctest::Approx(oracle.root).epsilon(1e-12));
            continue;
        }
        REQUIRE(tree.nodes.size() == 3);
        const auto& root = tree.nodes[0];
        CHECK(root.feature == oracle.feature);
        CHECK(root.threshold == oracle.threshold);
        CHECK(tree.nodes[root.left].weight == doctest::Approx(oracle.left).epsilon(1e-12));
        CHECK(tree.nodes[root.right].weight == doctest::Approx(oracle.right).epsilon(1e-12));
    }
}

TEST_CASE("training log-loss never increases round over round (property)") {
    testsupport::CodeGen g(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ex = random_examples(g, 30 + g.below(60), 4);
        Hyperparams hp;
        hp.rounds = 25;
        hp.learning_rate = std::vector<double>{0.05, 0.1, 0.2, 0.3}[g.below(4)];
        const auto m = train(ex, hp);
        std::vector<double> margin(ex.size(), m.base_score);
        double prev = log_loss(ex, margin);
        for (const auto& tree : m.trees) {
            for (std::size_t i = 0; i < ex.size(); ++i) margin[i] += m.learning_rate * tree.leaf_weight(ex[i].features);
            const double now = log_loss(ex, margin);
            CHECK(now <= prev + 1e-9);
            prev = now;
        }
        // The stored model reproduces the replayed margins.
        for (std::size_t i = 0; i < ex.size(); ++i) CHECK(m.margin(ex[i].features) == doctest::Approx(margin[i]).epsilon(1e-12));
    }
}

TEST_CASE("trees respect max depth and min child weight") {
    testsupport::CodeGen g(21);
    const auto ex = random_examples(g, 200, 6);
    for (int depth : {0, 1, 3, 6}) {
        Hyperparams hp;
        hp.rounds = 5;
        hp.max_depth = depth;
        for (const auto& t : train(ex, hp).trees) {
            CHECK(t.depth() <= depth);
            CHECK(t.leaf_count() * 2 == t.nodes.size() + 1);
        }
    }
    Hyperparams heavy;
    heavy.rounds = 3;
    heavy.min_child_weight = 1e9;
    for (const auto& t : train(ex, heavy).trees) CHECK(t.nodes.size() == 1);
}

TEST_CASE("separable data is fit exactly") {
    std::vector<Example> ex;
    for (std::uint32_t i = 0; i < 40; ++i) ex.push_back({dense({i % 2 ? 3u : 0u, i % 5}), i % 2 == 1});
    const auto m = train(ex, Hyperparams{});
    for (const auto& e : ex) CHECK(predict(m, e.features) == e.label);
    CHECK(positive_f1(m, ex) == 1.0);
}

TEST_CASE("training is deterministic") {
    testsupport::CodeGen g(4);
    const auto ex = random_examples(g, 120, 5);
    CHECK(train(ex, Hyperparams{}) == train(ex, Hyperparams{}));
}

TEST_CASE("resampling balances classes and keeps every original example") {
    testsupport::CodeGen g(8);
    std::vector<Example> ex;
    for (std::uint32_t i = 0; i < 50; ++i) ex.push_back({dense({i, 1}), i < 7});
    const auto a = resample(ex, 3);
    const auto b = resample(ex, 3);
    CHECK(a.size() == 86);
    CHECK(std::count_if(a.begin(), a.end(), [](const Example& e) { return e.label; }) == 43);
    CHECK(a.size() == b.size());
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same &= a[i].features == b[i].features && a[i].label == b[i].label;
    CHECK(same);
    for (const auto& e : ex) {
        CHECK(std::any_of(a.begin(), a.end(), [&](const Example& r) { return r.features == e.features; }));
    }
    for (const auto& r : a) {
        CHECK(std::any_of(ex.begin(), ex.end(), [&](const Example& e) { return r.features == e.features && r.label == e.label; }));
    }
    const auto c = resample(ex, 4);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= !(a[i].features == c[i].features);
    CHECK(differs);

    // Already balanced input only gets shuffled.
    std::vector<Example> bal = {{dense({1}), true}, {dense({2}), false}, {dense({3}), true}, {dense({4}), false}};
    CHECK(resample(bal, 1).size() == 4);
}

TEST_CASE("grid search breaks ties toward the smaller rate") {
    std::vector<Example> ex;
    for (std::uint32_t i = 0; i < 40; ++i) ex.push_back({dense({i % 2 ? 2u : 0u}), i % 2 == 1});
    const auto r = grid_search_learning_rate(ex, ex, {0.3, 0.1, 0.05, 0.2, 0.1}, Hyperparams{});
    CHECK(r.learning_rate == 0.05);
    CHECK(r.val_f1 == 1.0);
    REQUIRE(r.scores.size() == 4);
    CHECK(r.scores.front().first == 0.05);
    CHECK(r.scores.back().first == 0.3);
    CHECK_THROWS_AS(grid_search_learning_rate(ex, ex, {}, Hyperparams{}), InvalidHyperparams);
}

TEST_CASE("typed training errors") {
    std::vector<Example> pos = {{dense({1}), true}, {dense({2}), true}};
    CHECK_THROWS_AS(train(pos, Hyperparams{}), SingleClass);
    CHECK_THROWS_AS(resample(pos, 1), SingleClass);
    CHECK_THROWS_AS(train({}, Hyperparams{}), SingleClass);
    std::vector<Example> mixed = {{dense({1}), true}, {dense({2, 0}), false}};
    CHECK_THROWS_AS(train(mixed, Hyperparams{}), DimensionMismatch);
    std::vector<Example> ok = {{dense({1}), true}, {dense({0}), false}};
    const auto m = train(ok, Hyperparams{});
    CHECK_THROWS_AS(m.margin(dense({1, 2})), DimensionMismatch);
    for (auto mutate : std::vector<void (*)(Hyperparams&)>{
             [](Hyperparams& h) { h.rounds = -1; }, [](Hyperparams& h) { h.max_depth = -1; },
             [](Hyperparams& h) { h.learning_rate = 0.0; }, [](Hyperparams& h) { h.learning_rate = 1.5; },
             [](Hyperparams& h) { h.l2_lambda = -1.0; }, [](Hyperparams& h) { h.min_child_weight = -1.0; },
             [](Hyperparams& h) { h.gamma = std::nan(""); }}) {
        Hyperparams hp;
        mutate(hp);
        CHECK_THROWS_AS(train(ok, hp), InvalidHyperparams);
    }
}

TEST_CASE("model sets report completeness") {
    ActivityModelSet set;
    CHECK_FALSE(set.complete());
    CHECK_THROWS_AS(set.at(ActivityLabel::train_model), IncompleteModelSet);
    for (auto a : kAllActivities) set.models[a].activity = a;
    CHECK(set.complete());
    CHECK(set.at(ActivityLabel::train_model).activity == ActivityLabel::train_model);
}
