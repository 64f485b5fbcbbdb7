// Copyright 2026 The hqsdc Authors
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

#ifndef HQSDC_RANDOM_HPP
#define HQSDC_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hqsdc {

/// SplitMix64 finalizer. Used to turn (master seed, stream counter) into
/// independent engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the `index`-th derived stream of `master`. Counter based, so stream
/// k can be created without touching streams 0..k-1.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Seeded random source owned by exactly one session or thread.
///
/// All draws are computed from the raw 64-bit output of std::mt19937_64 (whose
/// sequence is fixed by the standard), never through the implementation-defined
/// std:: distributions, so streams are reproducible across standard libraries.
class RandomStream {
   public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Unbiased integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// `count` distinct values drawn without replacement from `pool`, in draw order.
    std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t count);

   private:
    std::mt19937_64 engine_;
};

}  // namespace hqsdc

#endif  // HQSDC_RANDOM_HPP
