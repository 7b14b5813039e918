// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/commit.hpp"
#include "mpcevm/field.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpcevm
{
struct PartyCountTooSmall : std::invalid_argument
{
    PartyCountTooSmall() : std::invalid_argument{"party count must be at least 3t+1"} {}
};

struct InsufficientValidShares : std::runtime_error
{
    InsufficientValidShares() : std::runtime_error{"fewer than t+1 shares verify"} {}
};

struct UnknownCommitmentReference : std::out_of_range
{
    UnknownCommitmentReference() : std::out_of_range{"dispute references an unknown commitment"} {}
};

/// A party's point on the dealer's (f_a, f_r) pair. party_index is 1-based.
struct Share
{
    std::uint32_t party_index = 0;
    FieldElement value;
    FieldElement randomness;

    friend bool operator==(const Share&, const Share&) = default;
};

struct Dealing
{
    std::vector<Share> shares;
    /// Commitments to the coefficients of (f_a, f_r): E_k = Commit(a_k, r_k).
    std::vector<Commitment> coefficient_commitments;
    /// Per-party commitments C_i = Commit(f_a(i), f_r(i)), index i-1.
    std::vector<Commitment> commitments;
    unsigned threshold = 0;
    unsigned party_count = 0;

    friend bool operator==(const Dealing&, const Dealing&) = default;
};

Dealing deal(const FieldElement& secret, unsigned t, unsigned n, Rng& rng,
    const CommitmentParams& params = default_commitment_params());

/// Expands coefficient commitments into the per-party list C_1..C_n.
std::vector<Commitment> party_commitments(
    std::span<const Commitment> coefficient_commitments, unsigned n, const CommitmentParams& params);

bool verify_share(std::span<const Commitment> commitments, const Share& share,
    const CommitmentParams& params = default_commitment_params());

/// Drops shares that fail verification and interpolates the rest at 0.
FieldElement reconstruct(std::span<const Share> shares, std::span<const Commitment> commitments,
    unsigned t, const CommitmentParams& params = default_commitment_params());

struct Opening
{
    FieldElement value;
    FieldElement randomness;
};

struct DisputeRecord
{
    std::uint32_t accused_party = 0;
    std::uint64_t dealing_id = 0;
    std::uint32_t disputing_party = 0;
    /// Empty means the accused never answered.
    std::optional<Opening> opened;
};

enum class DisputeVerdict
{
    valid,
    cheater,
};

/// Resolves the commitment for (dealing_id, disputing_party); returns nullopt when unknown.
using CommitmentLookup =
    std::function<std::optional<Commitment>(std::uint64_t dealing_id, std::uint32_t party_index)>;

DisputeVerdict open_dispute(const DisputeRecord& record, const CommitmentLookup& lookup,
    const CommitmentParams& params = default_commitment_params());
}  // namespace mpcevm
