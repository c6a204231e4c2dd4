// Copyright 2026 The sqchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace sqchsh {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// Seeding rule:
///   key(seed, stream) = mix(seed XOR mix(stream + G))
///   draw(counter)     = mix(key + (counter + 1) * G)
/// with G = 0x9E3779B97F4A7C15 and mix the SplitMix64 output function.
/// uniform(counter) maps the top 53 bits of draw(counter) to [0, 1).
/// Child streams are obtained with split(); a draw depends only on
/// (seed, stream path, counter), never on call order.
class CounterRng {
  public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + kGolden))) {
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t draw(std::uint64_t counter) const {
        return mix(key_ + (counter + 1) * kGolden);
    }

    double uniform(std::uint64_t counter) const {
        return static_cast<double>(draw(counter) >> 11) * 0x1.0p-53;
    }

    CounterRng split(std::uint64_t stream) const {
        return CounterRng(key_, stream);
    }

    std::uint64_t key() const {
        return key_;
    }

  private:
    std::uint64_t key_;
};

}  // namespace sqchsh
