// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/commit.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>
#include <string_view>

namespace mpcevm
{
namespace
{
std::uint64_t hash_label(std::string_view label, std::uint64_t counter)
{
    unsigned char digest[SHA256_DIGEST_LENGTH];
    std::string buf{label};
    buf.append(reinterpret_cast<const char*>(&counter), sizeof(counter));
    SHA256(reinterpret_cast<const unsigned char*>(buf.data()), buf.size(), digest);
    std::uint64_t out = 0;
    std::memcpy(&out, digest, sizeof(out));
    return out;
}

std::uint64_t hash_to_subgroup(std::string_view label, std::uint64_t modulus, std::uint64_t cofactor)
{
    for (std::uint64_t counter = 0;; ++counter)
    {
        const std::uint64_t candidate = hash_label(label, counter) % modulus;
        if (candidate < 2)
            continue;
        const std::uint64_t element = powmod(candidate, cofactor, modulus);
        if (element != 1)
            return element;
    }
}
}  // namespace

CommitmentParams::CommitmentParams(std::uint64_t field_modulus) : order_{field_modulus}
{
    if (!is_prime(field_modulus))
        throw std::invalid_argument{"commitment group order must be prime"};
    cofactor_ = 0;
    for (std::uint64_t c = 2; c < 1'000'000; c += 2)
    {
        const unsigned __int128 candidate = static_cast<unsigned __int128>(c) * field_modulus + 1;
        if (candidate >> 64)
            break;
        if (is_prime(static_cast<std::uint64_t>(candidate)))
        {
            cofactor_ = c;
            break;
        }
    }
    if (cofactor_ == 0)
        throw std::invalid_argument{"no 64-bit commitment group for this field modulus"};
    group_modulus_ = cofactor_ * field_modulus + 1;
    g_ = hash_to_subgroup("mpcevm/pedersen/g", group_modulus_, cofactor_);
    h_ = hash_to_subgroup("mpcevm/pedersen/h", group_modulus_, cofactor_);

    auto build = [this](std::uint64_t base) {
        auto table = std::make_shared<FixedBaseTable>();
        std::uint64_t window_base = base;
        for (auto& row : *table)
        {
            row[0] = 1;
            for (std::size_t d = 1; d < row.size(); ++d)
                row[d] = mulmod(row[d - 1], window_base, group_modulus_);
            window_base = mulmod(row[255], window_base, group_modulus_);
        }
        return std::shared_ptr<const FixedBaseTable>{std::move(table)};
    };
    g_table_ = build(g_);
    h_table_ = build(h_);
}

std::uint64_t CommitmentParams::fixed_pow(const FixedBaseTable& table, std::uint64_t exp) const noexcept
{
    std::uint64_t acc = 1;
    for (std::size_t w = 0; exp != 0; ++w, exp >>= 8)
    {
        const auto digit = exp & 0xff;
        if (digit != 0)
            acc = mulmod(acc, table[w][digit], group_modulus_);
    }
    return acc;
}

Commitment CommitmentParams::commit(const FieldElement& m, const FieldElement& r) const
{
    if (m.modulus() != order_ || r.modulus() != order_)
        throw FieldMismatch{};
    return {mulmod(fixed_pow(*g_table_, m.value()), fixed_pow(*h_table_, r.value()), group_modulus_)};
}

const CommitmentParams& default_commitment_params()
{
    static const CommitmentParams params{default_prime};
    return params;
}

Commitment commit(const FieldElement& m, const FieldElement& r, const CommitmentParams& params)
{
    return params.commit(m, r);
}

Commitment combine(Commitment c1, Commitment c2, const CommitmentParams& params)
{
    return params.combine(c1, c2);
}

bool verify_opening(Commitment c, const FieldElement& m, const FieldElement& r, const CommitmentParams& params)
{
    return params.commit(m, r) == c;
}

Commitment commitment_interpolate(
    std::span<const IndexedCommitment> cs, const FieldElement& at, const CommitmentParams& params)
{
    std::vector<FieldElement> xs;
    xs.reserve(cs.size());
    for (const auto& c : cs)
        xs.emplace_back(c.index, params.order());
    const auto weights = lagrange_coefficients(xs, at);
    Commitment acc = params.identity();
    for (std::size_t i = 0; i < cs.size(); ++i)
        acc = params.combine(acc, params.scale(cs[i].commitment, weights[i]));
    return acc;
}

Commitment eval_coefficient_commitments(
    std::span<const Commitment> coefficients, std::uint64_t x, const CommitmentParams& params)
{
    Commitment acc = params.identity();
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = params.combine(params.scale(acc, x), *it);
    return acc;
}
}  // namespace mpcevm
