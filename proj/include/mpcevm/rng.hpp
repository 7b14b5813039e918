// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace mpcevm
{
/// Seeded random source. One instance per owner; never shared between simulated parties.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_{seed} {}

    std::uint64_t next() { return engine_(); }

    /// Uniform value in [0, bound) by rejection sampling; bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x = engine_();
        while (x >= limit)
            x = engine_();
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t label) noexcept
{
    return mix_seed(base ^ mix_seed(label));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (const char c : label)
        h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    return derive_seed(base, h);
}
}  // namespace mpcevm
