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

#include "jupylabel/activity.hpp"

#include <bit>

namespace jupylabel {

namespace {
constexpr std::array<std::string_view, kActivityCount> kNames = {
    "setup_notebook", "ingest_data",    "validate_data",    "process_data",
    "train_model",    "evaluate_model", "transfer_results", "visualize_data",
};
}  // namespace

std::string_view to_string(ActivityLabel a) noexcept { return kNames[index_of(a)]; }

std::optional<ActivityLabel> parse_activity(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return kAllActivities[i];
    }
    return std::nullopt;
}

std::size_t LabelSet::size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<ActivityLabel> LabelSet::labels() const {
    std::vector<ActivityLabel> out;
    for (auto a : kAllActivities) {
        if (contains(a)) out.push_back(a);
    }
    return out;
}

std::vector<std::string> LabelSet::names() const {
    std::vector<std::string> out;
    for (auto a : labels()) out.emplace_back(to_string(a));
    return out;
}

}  // namespace jupylabel
