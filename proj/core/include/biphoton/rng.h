// Copyright 2026 The Biphoton Authors
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

#ifndef BIPHOTON_RNG_H
#define BIPHOTON_RNG_H

#include <cstdint>
#include <string_view>

namespace biphoton {

/// Counter-based 64-bit generator.
///
/// Output k of a stream is a SplitMix64 finalizer applied to
/// (stream key + k * golden gamma), where the stream key is itself a hash of
/// the root seed and a derivation path. Nothing depends on platform or
/// library implementation details, so an identical (seed, path, counter)
/// always yields identical draws. Per-trial streams are derived with
/// `derive`, which makes outcomes independent of execution order.
class Rng {
   public:
    static constexpr std::string_view kAlgorithm = "splitmix64-counter";

    explicit Rng(std::uint64_t root_seed) : Rng(root_seed, mix(root_seed ^ kRootSalt)) {
    }

    /// Child stream identified by a (major, minor) pair, e.g. (point, trial).
    /// Does not advance this generator.
    Rng derive(std::uint64_t major, std::uint64_t minor) const {
        std::uint64_t k = mix(key_ ^ mix(major + kGamma));
        k = mix(k ^ mix(minor + 2 * kGamma));
        return Rng(root_seed_, k);
    }

    std::uint64_t next_u64() {
        counter_++;
        return mix(key_ + counter_ * kGamma);
    }

    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t root_seed() const noexcept { return root_seed_; }
    std::uint64_t stream_key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

   private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kRootSalt = 0x6269706886f746f6ULL;

    Rng(std::uint64_t root_seed, std::uint64_t key) : root_seed_(root_seed), key_(key) {
    }

    std::uint64_t root_seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace biphoton

#endif
