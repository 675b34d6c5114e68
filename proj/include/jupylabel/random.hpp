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

// Seeded draws whose results depend only on the mt19937_64 output sequence, which the
// standard fixes exactly. std::uniform_int_distribution and std::shuffle are
// implementation-defined and would make artifacts toolchain-dependent.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace jupylabel {

inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace jupylabel
