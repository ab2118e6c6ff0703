// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace atomize {

// All randomness in the project flows through mt19937_64 plus the helpers
// below. The engine's output sequence is fixed by the C++ standard and the
// bounded draw uses rejection sampling instead of std::uniform_int_distribution
// (whose mapping is implementation-defined), so seeded outputs are identical
// across compilers and platforms.
using Rng = std::mt19937_64;

/// Uniform draw from [0, n). n must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

/// k distinct values from [0, n), ascending. Partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// FNV-1a over arbitrary bytes; used for stable per-instance decisions in the
/// mock models, not for anything security-sensitive.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace atomize
