// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/circuit.hpp"

#include <gtest/gtest.h>

using namespace mpcevm;

namespace
{
// Weighted tally, first proposal wins ties.
std::uint64_t tally_winner(const std::vector<std::array<std::uint64_t, 2>>& x, const std::vector<std::uint64_t>& w)
{
    std::uint64_t s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        s0 += w[i] * x[i][0];
        s1 += w[i] * x[i][1];
    }
    return s0 >= s1 ? 0 : 1;
}

// Tie priority of the ten-bidder bracket, worked out by hand: the top match
// pits {4..7} against {8, 9, 0..3}, and each match prefers its left side.
constexpr std::array<std::uint64_t, 10> bracket_priority{4, 5, 6, 7, 8, 9, 0, 1, 2, 3};

std::pair<std::uint64_t, std::uint64_t> auction_oracle(const std::vector<std::uint64_t>& bids, const std::vector<std::uint64_t>& w)
{
    std::uint64_t best = 0, who = bracket_priority[0];
    bool first = true;
    for (auto i : bracket_priority)
    {
        const auto v = bids[i] * w[i];
        if (first || v > best)
        {
            best = v;
            who = i;
            first = false;
        }
    }
    return {best, who};
}

std::vector<std::vector<std::uint64_t>> as_secret(const std::vector<std::uint64_t>& bids)
{
    std::vector<std::vector<std::uint64_t>> s;
    for (auto b : bids)
        s.push_back({b});
    return s;
}
}  // namespace

TEST(circuit, voting_gate_counts)
{
    const auto c1 = build_voting_circuit(1);
    EXPECT_EQ(c1.count(GateKind::mult_by_const), 2u);
    EXPECT_EQ(c1.count(GateKind::add), 0u);
    EXPECT_EQ(c1.count(GateKind::compare), 1u);

    const auto c10 = build_voting_circuit(10);
    EXPECT_EQ(c10.count(GateKind::mult_by_const), 20u);
    EXPECT_EQ(c10.count(GateKind::add), 18u);
    EXPECT_EQ(c10.count(GateKind::compare), 1u);
    EXPECT_EQ(c10.count(GateKind::mult), 0u);
    EXPECT_EQ(c10.output_count, 1u);
    for (std::uint32_t n = 1; n < 30; ++n)
    {
        const auto c = build_voting_circuit(n);
        EXPECT_EQ(c.count(GateKind::mult_by_const), 2 * n);
        EXPECT_EQ(c.count(GateKind::add), 2 * (n - 1));
    }
}

TEST(circuit, auction_gate_counts)
{
    const auto c = build_auction_circuit(10);
    EXPECT_EQ(c.count(GateKind::mult_by_const), 10u);
    EXPECT_EQ(c.count(GateKind::compare), 9u);
    EXPECT_EQ(c.output_count, 2u);
    for (std::uint32_t n = 2; n < 20; ++n)
        EXPECT_EQ(build_auction_circuit(n).count(GateKind::compare), n - 1);
}

TEST(circuit, registry_is_dense)
{
    CircuitRegistry reg;
    EXPECT_EQ(reg.register_circuit(build_voting_circuit(3)), 0u);
    EXPECT_EQ(reg.register_circuit(build_auction_circuit(10)), 1u);
    EXPECT_EQ(reg.get(1).name, "auction");
    EXPECT_THROW(reg.get(2), UnknownCircuit);
}

TEST(circuit, forward_reference_rejected)
{
    Circuit c;
    c.n_parties = 1;
    c.secret_input_shape = {1};
    c.output_count = 1;
    Gate add;
    add.id = 0;
    add.kind = GateKind::add;
    add.a = {1, 0};
    add.b = {1, 0};
    Gate in;
    in.id = 1;
    in.kind = GateKind::input_secret;
    Gate out;
    out.id = 2;
    out.kind = GateKind::output;
    out.a = {0, 0};
    c.gates = {add, in, out};
    CircuitRegistry reg;
    EXPECT_THROW(reg.register_circuit(c), InvalidCircuit);
}

TEST(circuit, shape_mismatch_rejected)
{
    CircuitBuilder b{"bad", 1, 0};
    auto x = b.input_secret(3, 0);
    b.output(x, 0);
    EXPECT_THROW(b.build(), InvalidCircuit);

    CircuitBuilder port{"port", 1, 0};
    auto y = port.input_secret(0, 0);
    port.output({y.gate, 1}, 0);
    EXPECT_THROW(port.build(), InvalidCircuit);
}

TEST(circuit, voting_plain_matches_tally)
{
    Rng rng{21};
    for (int trial = 0; trial < 200; ++trial)
    {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.uniform_below(12));
        std::vector<std::array<std::uint64_t, 2>> x(n);
        std::vector<std::vector<std::uint64_t>> secret(n);
        std::vector<std::uint64_t> w(n);
        for (std::uint32_t i = 0; i < n; ++i)
        {
            const auto pick = rng.uniform_below(2);
            x[i] = {pick == 0 ? 1u : 0u, pick == 1 ? 1u : 0u};
            secret[i] = {x[i][0], x[i][1]};
            w[i] = rng.uniform_below(4) == 0 ? 0 : rng.uniform_below(1000);
        }
        const auto c = build_voting_circuit(n);
        EXPECT_EQ(evaluate_plain(c, secret, w), std::vector<std::uint64_t>{tally_winner(x, w)});
    }
}

TEST(circuit, voting_example_tallies)
{
    // Tallies 30 and 70.
    const auto c = build_voting_circuit(2);
    EXPECT_EQ(evaluate_plain(c, {{1, 0}, {0, 1}}, {30, 70}), std::vector<std::uint64_t>{1});
    EXPECT_EQ(evaluate_plain(c, {{1, 0}, {0, 1}}, {50, 50}), std::vector<std::uint64_t>{0});
}

TEST(circuit, auction_plain_examples)
{
    const auto c = build_auction_circuit(10);
    const std::vector<std::uint64_t> ones(10, 1), zeros(10, 0);
    EXPECT_EQ(evaluate_plain(c, as_secret({5, 9, 3, 7, 1, 8, 2, 6, 4, 0}), ones), (std::vector<std::uint64_t>{9, 1}));
    EXPECT_EQ(evaluate_plain(c, as_secret({5, 9, 3, 7, 1, 8, 2, 6, 4, 0}), zeros)[0], 0u);
    const std::vector<std::uint64_t> tie{1, 2, 3, 7, 4, 5, 6, 7, 0, 0};
    EXPECT_EQ(evaluate_plain(c, as_secret(tie), ones), (std::vector<std::uint64_t>{7, 7}));
    EXPECT_EQ(auction_oracle(tie, ones).second, 7u);
}

TEST(circuit, auction_plain_matches_oracle)
{
    Rng rng{22};
    const auto c = build_auction_circuit(10);
    for (int trial = 0; trial < 500; ++trial)
    {
        std::vector<std::uint64_t> bids(10), w(10);
        for (int i = 0; i < 10; ++i)
        {
            bids[i] = rng.uniform_below(trial % 2 == 0 ? 8 : 1000000);
            w[i] = rng.uniform_below(5) == 0 ? 0 : 1;
        }
        const auto [best, who] = auction_oracle(bids, w);
        EXPECT_EQ(evaluate_plain(c, as_secret(bids), w), (std::vector<std::uint64_t>{best, who}));
    }
}

TEST(circuit, ready_set_basics)
{
    const auto c = build_voting_circuit(3);
    const auto initial = topo_ready_set(c, {});
    for (auto id : initial)
        EXPECT_EQ(c.gates[id].kind, GateKind::input_secret);
    EXPECT_EQ(initial.size(), 6u);
    std::set<std::uint32_t> all;
    for (const auto& g : c.gates)
        all.insert(g.id);
    EXPECT_TRUE(topo_ready_set(c, all).empty());
}

TEST(circuit, ready_set_after_leaf_compares)
{
    const auto c = build_auction_circuit(10);
    std::set<std::uint32_t> done;
    std::vector<std::uint32_t> compares;
    for (const auto& g : c.gates)
    {
        if (g.kind == GateKind::compare)
            compares.push_back(g.id);
        else if (g.kind != GateKind::output)
            done.insert(g.id);
    }
    ASSERT_EQ(compares.size(), 9u);
    for (int i = 0; i < 5; ++i)
        done.insert(compares[i]);
    // Only the two matches over leaf winners can run; the third waits on m[5].
    EXPECT_EQ(topo_ready_set(c, done), (std::set<std::uint32_t>{compares[5], compares[6]}));
}

TEST(circuit, range_check)
{
    const auto voting = build_voting_circuit(3);
    EXPECT_NO_THROW(check_ranges(voting, {1000, 2000, 3000}));
    EXPECT_THROW(check_ranges(voting, {1ull << 31, 1ull << 31, 5}), InputOutOfRange);
    EXPECT_THROW(check_ranges(voting, {1, 2}), ShapeMismatch);
    const auto auction = build_auction_circuit(10);
    EXPECT_NO_THROW(check_ranges(auction, std::vector<std::uint64_t>(10, 1)));
    EXPECT_THROW(check_ranges(auction, std::vector<std::uint64_t>(10, 2)), InputOutOfRange);
}

TEST(circuit, parallel_mult_shape)
{
    const auto c = build_parallel_mult_circuit(4, 3);
    EXPECT_EQ(c.count(GateKind::mult), 6u);
    EXPECT_EQ(c.output_count, 6u);
    std::set<std::uint32_t> inputs;
    for (const auto& g : c.gates)
        if (g.kind == GateKind::input_secret)
            inputs.insert(g.id);
    EXPECT_EQ(topo_ready_set(c, inputs).size(), 6u);
    EXPECT_EQ(evaluate_plain(c, {{2, 3, 4}, {5, 6, 7}, {1, 1, 1}, {9, 9, 2}}, {}),
        (std::vector<std::uint64_t>{6, 20, 42, 1, 9, 18}));
}
