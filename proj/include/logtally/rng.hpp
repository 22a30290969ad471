// Copyright 2026 the logtally authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOGTALLY_RNG_HPP_
#define LOGTALLY_RNG_HPP_

#include <cstdint>

namespace logtally {

/// Small deterministic generator (splitmix64). The standard library
/// distributions are not required to produce the same sequence across
/// implementations, so everything that must replay bit-identically from a
/// seed (scene synthesis, test corpora) draws from this instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling keeps the draw unbiased for any bound.
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double range_real(double lo, double hi) { return lo + unit() * (hi - lo); }

    /// Derive an independent child stream; advancing the child does not
    /// disturb this generator beyond the single draw made here.
    Rng split() { return Rng(next_u64() ^ 0x5851f42d4c957f2dull); }

private:
    std::uint64_t state_;
};

}  // namespace logtally

#endif  // LOGTALLY_RNG_HPP_
