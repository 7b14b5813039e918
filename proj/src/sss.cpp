// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/sss.hpp"

#include <algorithm>

namespace mpcevm
{
Dealing deal(const FieldElement& secret, unsigned t, unsigned n, Rng& rng, const CommitmentParams& params)
{
    if (n < 3 * t + 1)
        throw PartyCountTooSmall{};
    const std::uint64_t p = params.order();
    const FieldElement r = random_element(rng, p);
    // Keep zero coefficients explicit; Polynomial would strip them and lose the degree.
    std::vector<FieldElement> a_coeffs{secret};
    std::vector<FieldElement> r_coeffs{r};
    for (unsigned k = 0; k < t; ++k)
    {
        a_coeffs.push_back(random_element(rng, p));
        r_coeffs.push_back(random_element(rng, p));
    }
    const Polynomial fa{a_coeffs};
    const Polynomial fr{r_coeffs};

    Dealing out;
    out.threshold = t;
    out.party_count = n;
    out.coefficient_commitments.reserve(t + 1);
    for (unsigned k = 0; k <= t; ++k)
        out.coefficient_commitments.push_back(params.commit(a_coeffs[k], r_coeffs[k]));
    out.shares.reserve(n);
    out.commitments.reserve(n);
    for (std::uint32_t i = 1; i <= n; ++i)
    {
        const FieldElement x{i, p};
        Share s{i, fa(x), fr(x)};
        out.commitments.push_back(params.commit(s.value, s.randomness));
        out.shares.push_back(s);
    }
    return out;
}

std::vector<Commitment> party_commitments(
    std::span<const Commitment> coefficient_commitments, unsigned n, const CommitmentParams& params)
{
    std::vector<Commitment> out;
    out.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i)
        out.push_back(eval_coefficient_commitments(coefficient_commitments, i, params));
    return out;
}

bool verify_share(std::span<const Commitment> commitments, const Share& share, const CommitmentParams& params)
{
    if (share.party_index == 0 || share.party_index > commitments.size())
        return false;
    return verify_opening(commitments[share.party_index - 1], share.value, share.randomness, params);
}

FieldElement reconstruct(std::span<const Share> shares, std::span<const Commitment> commitments, unsigned t,
    const CommitmentParams& params)
{
    std::vector<Point> valid;
    std::vector<std::uint32_t> seen;
    for (const auto& s : shares)
    {
        if (std::find(seen.begin(), seen.end(), s.party_index) != seen.end())
            continue;
        if (!verify_share(commitments, s, params))
            continue;
        seen.push_back(s.party_index);
        valid.push_back({FieldElement{s.party_index, params.order()}, s.value});
        if (valid.size() == t + 1)
            break;
    }
    if (valid.size() < t + 1)
        throw InsufficientValidShares{};
    return lagrange_interpolate(valid, FieldElement::zero(params.order()));
}

DisputeVerdict open_dispute(const DisputeRecord& record, const CommitmentLookup& lookup, const CommitmentParams& params)
{
    const auto c = lookup(record.dealing_id, record.disputing_party);
    if (!c)
        throw UnknownCommitmentReference{};
    if (!record.opened)
        return DisputeVerdict::cheater;
    return verify_opening(*c, record.opened->value, record.opened->randomness, params) ? DisputeVerdict::valid
                                                                                         : DisputeVerdict::cheater;
}
}  // namespace mpcevm
