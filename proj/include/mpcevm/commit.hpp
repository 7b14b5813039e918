// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/field.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace mpcevm
{
/// Element of the order-p subgroup of Z*_P, where P = cofactor * p + 1.
struct Commitment
{
    std::uint64_t value = 1;

    friend constexpr bool operator==(const Commitment&, const Commitment&) noexcept = default;
};

/// Pedersen parameters for a field of prime order p. Generators are obtained by
/// hashing fixed labels into the subgroup; log_g(h) is never computed.
class CommitmentParams
{
public:
    /// Smallest even cofactor c with c*p+1 prime (and below 2^64).
    explicit CommitmentParams(std::uint64_t field_modulus = default_prime);

    std::uint64_t group_modulus() const noexcept { return group_modulus_; }
    std::uint64_t order() const noexcept { return order_; }
    std::uint64_t cofactor() const noexcept { return cofactor_; }
    Commitment g() const noexcept { return {g_}; }
    Commitment h() const noexcept { return {h_}; }
    Commitment identity() const noexcept { return {1}; }

    Commitment commit(const FieldElement& m, const FieldElement& r) const;
    Commitment combine(Commitment a, Commitment b) const noexcept
    {
        return {mulmod(a.value, b.value, group_modulus_)};
    }
    /// c^e; exponent arithmetic is modulo the group order p.
    Commitment scale(Commitment c, const FieldElement& e) const noexcept
    {
        return {powmod(c.value, e.value(), group_modulus_)};
    }
    Commitment scale(Commitment c, std::uint64_t e) const noexcept
    {
        return {powmod(c.value, e, group_modulus_)};
    }
    bool in_subgroup(Commitment c) const noexcept
    {
        return c.value != 0 && c.value < group_modulus_ && powmod(c.value, order_, group_modulus_) == 1;
    }

private:
    // Fixed-base table: entry [w][d] = base^(d * 256^w).
    using FixedBaseTable = std::array<std::array<std::uint64_t, 256>, 8>;
    std::uint64_t fixed_pow(const FixedBaseTable& table, std::uint64_t exp) const noexcept;

    std::uint64_t order_;
    std::uint64_t cofactor_;
    std::uint64_t group_modulus_;
    std::uint64_t g_;
    std::uint64_t h_;
    std::shared_ptr<const FixedBaseTable> g_table_;
    std::shared_ptr<const FixedBaseTable> h_table_;
};

/// Shared instance for the default field; built once.
const CommitmentParams& default_commitment_params();

Commitment commit(const FieldElement& m, const FieldElement& r, const CommitmentParams& params);
Commitment combine(Commitment c1, Commitment c2, const CommitmentParams& params);
bool verify_opening(Commitment c, const FieldElement& m, const FieldElement& r, const CommitmentParams& params);

struct IndexedCommitment
{
    std::uint64_t index;
    Commitment commitment;
};

/// prod C_i^{w_i} with w_i the Lagrange weights of the indices at `at`.
Commitment commitment_interpolate(
    std::span<const IndexedCommitment> cs, const FieldElement& at, const CommitmentParams& params);

/// Evaluates coefficient commitments E_0..E_t "in the exponent" at x: prod E_k^{x^k}.
Commitment eval_coefficient_commitments(
    std::span<const Commitment> coefficients, std::uint64_t x, const CommitmentParams& params);
}  // namespace mpcevm
