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

// Model artifact: a single JSON document carrying all eight activity models.
//
//   {
//     "format": "jupylabel-model",
//     "format_version": 1,
//     "seed": 7,
//     "training_fingerprint": "...",
//     "models": {
//       "ingest_data": {
//         "activity": "ingest_data",
//         "base_score": 0.0,
//         "learning_rate": 0.2,
//         "dimension": 412,
//         "hyperparams": {...},
//         "tokenizer": {"mode": "improved", "pattern": "...", "lowercase": true},
//         "vocabulary": {"fitted_on": "...", "tokens": ["=", "[", "]", "accuracy", ...]},
//         "trees": [{"feature": 3, "threshold": 0.5, "left": {"leaf": -0.41}, "right": {...}}]
//       }, ...
//     }
//   }
//
// Doubles are written in shortest round-trip form, so load(save(m)) == m bit for bit.

#include <string>
#include <string_view>

#include <json.hpp>

#include "jupylabel/gbdt.hpp"

namespace jupylabel {

inline constexpr std::string_view kArtifactFormatName = "jupylabel-model";

nlohmann::json model_to_json(const GbdtModel& model);
GbdtModel model_from_json(const nlohmann::json& j);

nlohmann::json model_set_to_json(const ActivityModelSet& set);
/// Throws ArtifactFormat, ArtifactVersionMismatch or IncompleteModelSet.
ActivityModelSet model_set_from_json(const nlohmann::json& j);

std::string serialize_model_set(const ActivityModelSet& set);
ActivityModelSet parse_model_set(std::string_view text);

void save_model_set(const ActivityModelSet& set, const std::string& path);
ActivityModelSet load_model_set(const std::string& path);

}  // namespace jupylabel
