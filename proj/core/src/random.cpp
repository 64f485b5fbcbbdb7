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

#include "hqsdc/random.hpp"

#include <stdexcept>
#include <utility>

namespace hqsdc {

std::uint64_t RandomStream::below(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("RandomStream::below: n must be positive");
    }
    // Rejection on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::vector<std::size_t> RandomStream::sample_without_replacement(std::vector<std::size_t> pool,
                                                                  std::size_t count) {
    if (count > pool.size()) {
        throw std::invalid_argument("sample_without_replacement: count exceeds pool size");
    }
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < count; ++k) {
        const auto pick = k + static_cast<std::size_t>(below(pool.size() - k));
        std::swap(pool[k], pool[pick]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace hqsdc
