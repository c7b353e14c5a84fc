/*
 * Copyright 2026 The music-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MUSIC_RANDOM_HPP
#define MUSIC_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace music {

/// The engine used everywhere. Draws go through the helpers below rather than
/// the <random> distributions, whose output is implementation-defined, so a
/// seed reproduces the same numbers on every platform.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent seed for a sub-stream identified by a path of integers.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = mix64(master);
    for (const auto p : path)
        s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

/// Uniform in [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in [lo, hi].
inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n), n > 0, without modulo bias.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
    std::uint64_t x;
    do
        x = rng();
    while (x >= limit);
    return x % n;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Fisher-Yates with uniform_index.
template <typename Range>
void shuffle(Range& r, Rng& rng)
{
    const auto n = static_cast<std::uint64_t>(std::size(r));
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = uniform_index(rng, i);
        using std::swap;
        swap(r[i - 1], r[j]);
    }
}

} // namespace music

#endif // MUSIC_RANDOM_HPP
