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

#include <string>
#include <string_view>
#include <vector>

#include "jupylabel/activity.hpp"
#include "jupylabel/preprocess.hpp"

namespace jupylabel {

/// Stable public identifiers; they appear in exported tables and debug output.
enum class RuleId {
    /// A SETUP token survived pre-processing (imports and magics both produce one).
    R1_IMPORT,
    R1_MAGIC,
    R1_CONSTANT,
    R2_DISPLAY_DATA,
    R3_KEYWORD,
    R3_IMPLICIT_RETURN,
    R3_PRINT,
};

std::string_view to_string(RuleId id) noexcept;
/// The activity every rule of this id asserts.
ActivityLabel rule_activity(RuleId id) noexcept;

struct RuleHit {
    ActivityLabel label;
    RuleId rule_id;
    std::string evidence;

    friend bool operator==(const RuleHit&, const RuleHit&) = default;
};

/// Every positive heuristic that fires, ordered by rule id. Empty means "undecided".
std::vector<RuleHit> classify_by_rules(const PreprocessedCell& pc);

LabelSet rule_labels(const std::vector<RuleHit>& hits);

/// Case-insensitive whole-token search for assert / verify / check. Returns the matched token
/// as written, or an empty string.
std::string find_validation_keyword(std::string_view text);

}  // namespace jupylabel
