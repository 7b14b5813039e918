// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/local_session.hpp"
#include "mpcevm/txmgr.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace mpcevm;

namespace
{
std::vector<Address> committee(std::uint32_t n)
{
    std::vector<Address> out;
    for (std::uint32_t i = 0; i < n; ++i)
        out.push_back(Address{0x100 + i});
    return out;
}

Hash32 tx_id(std::uint8_t b)
{
    Hash32 h{};
    h[0] = b;
    return h;
}

MpcMessage ready(std::uint32_t op)
{
    return {MsgKind::ready, op, 0, 0, {}, {}, {}, {}};
}

MpcMessage done(std::uint32_t op)
{
    return {MsgKind::gate_done, op, 0, 0, {}, {}, {}, {}};
}

MpcMessage accuse(std::uint32_t party)
{
    return {MsgKind::accuse, 0, 0, party, {}, {}, {}, {}};
}

MpcMessage attest(std::vector<Word> r)
{
    return {MsgKind::result_attest, 0, 0, 0, {}, {}, {}, std::move(r)};
}

struct Rig
{
    TxMgr mgr;
    std::vector<Address> parties;
    SessionKey key;

    Rig(std::uint32_t n, unsigned t, std::size_t cap = 4, std::uint8_t id = 1) : mgr{cap}, parties{committee(n)}
    {
        key = mgr.enter(tx_id(id), Address{0xc}, Address{0xa}, 0, parties, t, 1).key();
    }

    BroadcastEffect send(std::uint32_t who, const MpcMessage& m, std::uint64_t h = 1)
    {
        return mgr.broadcast(key, parties[who], m, h);
    }
};
}  // namespace

TEST(Txmgr, ReadinessQuorumIsTwoTPlusOne)
{
    Rig rig{10, 3};
    for (std::uint32_t i = 0; i < 6; ++i)
        EXPECT_TRUE(rig.send(i, ready(5)).approvals.empty());
    EXPECT_EQ(rig.mgr.queue().running_count(), 0u);
    // a repeated vote does not count twice
    EXPECT_TRUE(rig.send(0, ready(5)).approvals.empty());
    auto fx = rig.send(6, ready(5));
    ASSERT_EQ(fx.approvals.size(), 1u);
    EXPECT_EQ(fx.approvals[0].op, 5u);
    EXPECT_TRUE(rig.send(7, ready(5)).approvals.empty());
}

TEST(Txmgr, QueueHoldsThirdGateUntilOneRetires)
{
    Rig rig{4, 1, 2};
    std::vector<GateId> admitted;
    for (std::uint32_t op : {10u, 11u, 12u})
        for (std::uint32_t i = 0; i < 3; ++i)
            for (const auto& g : rig.send(i, ready(op)).approvals)
                admitted.push_back(g);
    ASSERT_EQ(admitted.size(), 2u);
    EXPECT_EQ(admitted[0].op, 10u);
    EXPECT_EQ(admitted[1].op, 11u);
    EXPECT_EQ(rig.mgr.queue().waiting_count(), 1u);

    // done votes on a waiting gate are recorded without effect
    for (std::uint32_t i = 0; i < 3; ++i)
        EXPECT_TRUE(rig.send(i, done(12)).approvals.empty());
    EXPECT_EQ(rig.mgr.queue().running_count(), 2u);

    std::vector<GateId> next;
    for (std::uint32_t i = 0; i < 3; ++i)
        for (const auto& g : rig.send(i, done(11)).approvals)
            next.push_back(g);
    ASSERT_EQ(next.size(), 1u);
    EXPECT_EQ(next[0].op, 12u);
    // the duplicate is idempotent
    EXPECT_TRUE(rig.send(0, done(11)).approvals.empty());
    for (const auto& e : rig.mgr.queue().trace())
        EXPECT_LE(e.running, 2u);
}

TEST(Txmgr, AccusationQuorum)
{
    Rig rig{10, 3};
    for (std::uint32_t i = 0; i < 3; ++i)
        EXPECT_FALSE(rig.send(i, accuse(5)).finish);
    auto fx = rig.send(3, accuse(5));
    ASSERT_TRUE(fx.finish);
    EXPECT_TRUE(fx.cheater);
    EXPECT_EQ(*fx.finish, cheater_result(1, 4));
    EXPECT_EQ(rig.mgr.find(rig.key.tx)->status, SessionStatus::resumable);
    // nothing more happens once decided
    EXPECT_FALSE(rig.send(4, accuse(5)).finish);
}

TEST(Txmgr, SplitAccusationsHaveNoEffect)
{
    Rig rig{10, 3};
    for (std::uint32_t i = 0; i < 3; ++i)
        EXPECT_FALSE(rig.send(i, accuse(2)).finish);
    for (std::uint32_t i = 3; i < 6; ++i)
        EXPECT_FALSE(rig.send(i, accuse(8)).finish);
    EXPECT_EQ(rig.mgr.find(rig.key.tx)->status, SessionStatus::active);
}

TEST(Txmgr, CheaterPurgesQueuedGates)
{
    TxMgr mgr{1};
    auto parties = committee(4);
    const SessionKey a = mgr.enter(tx_id(1), Address{0xc1}, Address{0xa}, 0, parties, 1, 1).key();
    const SessionKey b = mgr.enter(tx_id(2), Address{0xc2}, Address{0xa}, 0, parties, 1, 1).key();
    for (std::uint32_t op : {1u, 2u})
        for (std::uint32_t i = 0; i < 3; ++i)
            mgr.broadcast(a, parties[i], ready(op), 1);
    for (std::uint32_t i = 0; i < 3; ++i)
        mgr.broadcast(b, parties[i], ready(7), 1);
    EXPECT_EQ(mgr.queue().running_count(), 1u);
    EXPECT_EQ(mgr.queue().waiting_count(), 2u);
    mgr.broadcast(a, parties[0], accuse(4), 2);
    auto fx = mgr.broadcast(a, parties[1], accuse(4), 2);
    ASSERT_TRUE(fx.finish);
    // a's gates are gone and b's gate takes the slot
    ASSERT_EQ(fx.approvals.size(), 1u);
    EXPECT_EQ(fx.approvals[0].session, b);
    EXPECT_EQ(mgr.queue().waiting_count(), 0u);
    std::size_t purged = 0;
    for (const auto& e : mgr.queue().trace())
        purged += e.kind == QueueEvent::Kind::purge;
    EXPECT_EQ(purged, 2u);
}

TEST(Txmgr, AttestationQuorum)
{
    Rig rig{10, 3, 4};
    const std::vector<Word> good{7, 0, 0}, bad{8, 0, 0};
    // t forged attestations never win
    for (std::uint32_t i = 0; i < 3; ++i)
        EXPECT_FALSE(rig.send(i, attest(bad)).finish);
    for (std::uint32_t i = 3; i < 6; ++i)
        EXPECT_FALSE(rig.send(i, attest(good)).finish);
    auto fx = rig.send(6, attest(good));
    ASSERT_TRUE(fx.finish);
    EXPECT_EQ(*fx.finish, good);
    EXPECT_FALSE(fx.cheater);
    EXPECT_EQ(rig.mgr.find(rig.key.tx)->results.back(), good);
}

TEST(Txmgr, RejectsOutsidersAndUnknownSessions)
{
    Rig rig{4, 1};
    EXPECT_THROW(rig.mgr.broadcast(rig.key, Address{0x999}, ready(1), 1), NotCommitteeMember);
    EXPECT_THROW(rig.mgr.broadcast(SessionKey{tx_id(9), 1}, rig.parties[0], ready(1), 1), UnknownSession);
}

TEST(Txmgr, StaleInvocationIgnored)
{
    Rig rig{4, 1};
    const SessionKey first = rig.key;
    rig.mgr.enter(first.tx, Address{0xc}, Address{0xa}, 0, rig.parties, 1, 1);
    EXPECT_EQ(rig.mgr.find(first.tx)->invocation_count, 2u);
    for (std::uint32_t i = 0; i < 4; ++i)
        EXPECT_FALSE(rig.mgr.broadcast(first, rig.parties[i], attest({1, 0, 0}), 1).finish);
}

// With one malicious member at n=4, every ordering of attestations resumes
// with the honest result.
TEST(Txmgr, QuorumSoundnessAllOrderings)
{
    const std::vector<Word> honest{42, 0, 0};
    const std::vector<std::vector<Word>> forged{{43, 0, 0}, {0, 1, 2}, {}};
    for (std::uint32_t bad = 0; bad < 4; ++bad)
    {
        // messages: each honest party attests once, the bad one sends every forgery
        std::vector<std::pair<std::uint32_t, std::vector<Word>>> msgs;
        for (std::uint32_t i = 0; i < 4; ++i)
            if (i != bad)
                msgs.emplace_back(i, honest);
        for (const auto& f : forged)
            msgs.emplace_back(bad, f);
        std::vector<std::size_t> order(msgs.size());
        std::iota(order.begin(), order.end(), 0);
        std::size_t runs = 0;
        do
        {
            Rig rig{4, 1};
            std::optional<std::vector<Word>> decided;
            for (std::size_t k : order)
                if (auto fx = rig.send(msgs[k].first, attest(msgs[k].second)); fx.finish && !decided)
                    decided = fx.finish;
            ASSERT_TRUE(decided);
            ASSERT_EQ(*decided, honest);
            ++runs;
        } while (std::next_permutation(order.begin(), order.end()));
        EXPECT_EQ(runs, 720u);
    }
}
