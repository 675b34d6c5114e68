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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jupylabel {

/// The eight machine-learning activities a code cell can perform.
/// Enumerator order is the fixed taxonomy order used for every rendered label list.
enum class ActivityLabel : std::uint8_t {
    setup_notebook = 0,
    ingest_data,
    validate_data,
    process_data,
    train_model,
    evaluate_model,
    transfer_results,
    visualize_data,
};

inline constexpr std::size_t kActivityCount = 8;

inline constexpr std::array<ActivityLabel, kActivityCount> kAllActivities = {
    ActivityLabel::setup_notebook, ActivityLabel::ingest_data,    ActivityLabel::validate_data,
    ActivityLabel::process_data,   ActivityLabel::train_model,    ActivityLabel::evaluate_model,
    ActivityLabel::transfer_results, ActivityLabel::visualize_data,
};

constexpr std::size_t index_of(ActivityLabel a) noexcept { return static_cast<std::size_t>(a); }

/// Canonical snake-case name, e.g. "ingest_data".
std::string_view to_string(ActivityLabel a) noexcept;

/// Inverse of to_string; nullopt for anything outside the taxonomy.
std::optional<ActivityLabel> parse_activity(std::string_view name) noexcept;

/// A subset of the taxonomy. Iteration always follows taxonomy order.
class LabelSet {
public:
    constexpr LabelSet() = default;
    LabelSet(std::initializer_list<ActivityLabel> labels) {
        for (auto l : labels) insert(l);
    }

    constexpr void insert(ActivityLabel a) noexcept { bits_ |= bit(a); }
    constexpr void erase(ActivityLabel a) noexcept { bits_ &= static_cast<std::uint8_t>(~bit(a)); }
    constexpr bool contains(ActivityLabel a) const noexcept { return (bits_ & bit(a)) != 0; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    std::size_t size() const noexcept;

    constexpr LabelSet& operator|=(LabelSet other) noexcept {
        bits_ |= other.bits_;
        return *this;
    }
    friend constexpr LabelSet operator|(LabelSet a, LabelSet b) noexcept { return a |= b; }
    friend constexpr bool operator==(LabelSet, LabelSet) = default;

    std::vector<ActivityLabel> labels() const;
    std::vector<std::string> names() const;
    constexpr std::uint8_t bits() const noexcept { return bits_; }
    static constexpr LabelSet from_bits(std::uint8_t b) noexcept {
        LabelSet s;
        s.bits_ = b;
        return s;
    }

private:
    static constexpr std::uint8_t bit(ActivityLabel a) noexcept {
        return static_cast<std::uint8_t>(1u << index_of(a));
    }
    std::uint8_t bits_ = 0;
};

}  // namespace jupylabel
