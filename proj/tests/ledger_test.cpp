// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/fixtures.hpp"
#include "mpcevm/ledger.hpp"

#include <gtest/gtest.h>

using namespace mpcevm;

namespace
{
const Address alice{0xa11ce};
const Address bob{0xb0b};
const Address carol{0xca201};

// Constructor pokes another contract; used to check deployment against locks.
constexpr std::string_view pinger_src = R"(
.method constructor
    PUSH 9
    PUSH 0
    ARG 0
    CALL setX1 1
    RETURN
.end
)";

std::shared_ptr<const ContractCode> resolve(const std::string& name)
{
    if (name == "pinger")
    {
        static auto code = std::make_shared<const ContractCode>(assemble(pinger_src, "pinger"));
        return code;
    }
    return load_fixture(name);
}

struct Net
{
    LedgerConfig cfg;
    std::shared_ptr<CircuitRegistry> reg = std::make_shared<CircuitRegistry>();
    std::unique_ptr<Ledger> ledger;
    WorldState genesis;
    std::map<Address, std::uint64_t> nonces;
    Word sum_cid = 0, vote_cid = 0;

    explicit Net(std::size_t cap = 4)
    {
        for (std::uint32_t i = 0; i < 4; ++i)
            cfg.committee.push_back(Address{0x100 + i});
        cfg.t = 1;
        cfg.max_parallel_mults = cap;
        sum_cid = reg->register_circuit(build_weighted_sum_circuit(4));
        vote_cid = reg->register_circuit(build_voting_circuit(4));
        ledger = std::make_unique<Ledger>(cfg, reg, resolve);
        for (Address a : cfg.committee)
            ledger->state().at(a).balance = 1'000'000;
        for (Address a : {alice, bob, carol})
            ledger->state().at(a).balance = 1'000'000'000;
        genesis = ledger->state();
    }

    Transaction tx(TxKind kind, Address from, Word gas = 200'000)
    {
        Transaction t;
        t.kind = kind;
        t.sender = from;
        t.nonce = nonces[from]++;
        t.gas_limit = gas;
        return t;
    }

    Receipt call(Address from, Address to, const std::string& method, std::vector<Word> args = {}, Word value = 0)
    {
        auto t = tx(TxKind::regular, from);
        t.target = to;
        t.method = method;
        t.args = std::move(args);
        t.value = value;
        auto rc = ledger->apply(t);
        if (rc.status == TxStatus::invalid)
            --nonces[from];
        return rc;
    }

    Address create(Address from, const std::string& fixture, std::vector<Word> args, Word value = 0)
    {
        auto t = tx(TxKind::create, from);
        t.fixture = fixture;
        t.args = std::move(args);
        t.value = value;
        auto rc = ledger->apply(t);
        EXPECT_EQ(rc.status, TxStatus::success) << rc.detail;
        return rc.created;
    }

    /// Committee members attest `result` one transaction each until something resumes.
    Receipt attest(const Hash32& meta, std::uint32_t invocation, const std::vector<Word>& result, std::uint32_t voters)
    {
        Receipt last;
        for (std::uint32_t i = 0; i < voters; ++i)
        {
            auto t = tx(TxKind::mpc_ret, cfg.committee[i]);
            t.session = {meta, invocation};
            t.messages.push_back({MsgKind::result_attest, 0, 0, 0, {}, {}, {}, result});
            last = ledger->apply(t);
            if (last.resumed)
                break;
        }
        return last;
    }

    Word storage(Address a, Word key) const
    {
        const Account* acc = ledger->state().find(a);
        if (!acc)
            return 0;
        auto it = acc->storage.find(key);
        return it == acc->storage.end() ? 0 : it->second;
    }

    Word balance(Address a) const
    {
        const Account* acc = ledger->state().find(a);
        return acc ? acc->balance : 0;
    }

    Word total() const
    {
        Word sum = 0;
        for (const auto& [a, acc] : ledger->state().accounts())
            sum += acc.balance;
        return sum;
    }

    /// Deploys the lock tester contracts with the committee as MPC parties.
    std::array<Address, 3> lock_contracts()
    {
        const Address c2 = create(alice, "lock_c2", {});
        std::vector<Word> args{c2.value, sum_cid};
        for (Address p : cfg.committee)
            args.push_back(p.value);
        const Address c1 = create(alice, "lock_c1", args);
        const Address c3 = create(alice, "lock_c3", {c1.value});
        return {c1, c2, c3};
    }
};
}  // namespace

TEST(Ledger, TransferBetweenAccounts)
{
    Net net;
    const Word before = net.total();
    auto rc = net.call(alice, Address{0xdead}, "", {}, 500);
    EXPECT_EQ(rc.status, TxStatus::success);
    EXPECT_EQ(net.balance(Address{0xdead}), 500u);
    EXPECT_EQ(net.balance(alice), 1'000'000'000u - 500 - net.cfg.base_gas);
    EXPECT_EQ(net.total(), before);
}

TEST(Ledger, InvalidTransactionsChangeNothing)
{
    Net net;
    const Hash32 h0 = net.ledger->state_hash();
    auto t = net.tx(TxKind::regular, alice);
    t.nonce = 7;
    t.target = bob;
    EXPECT_EQ(net.ledger->apply(t).status, TxStatus::invalid);
    auto poor = net.tx(TxKind::regular, Address{0x5});
    poor.target = bob;
    EXPECT_EQ(net.ledger->apply(poor).status, TxStatus::invalid);
    EXPECT_EQ(net.ledger->state_hash(), h0);
}

TEST(Ledger, CreateDeploysAtDerivedAddress)
{
    Net net;
    std::vector<Word> args{1, 2, 50, net.vote_cid};
    for (Address p : net.cfg.committee)
        args.push_back(p.value);
    const Word ts = net.ledger->pending_timestamp();
    const Address vote = net.create(alice, "mpc_vote", args, 7);
    EXPECT_EQ(vote, contract_address(alice, 0));
    EXPECT_EQ(net.storage(vote, 5), ts + 3600);
    EXPECT_EQ(net.balance(vote), 7u);
    ASSERT_NE(net.ledger->state().find(vote)->code, nullptr);
}

TEST(Ledger, ConstructorTouchingLockedContractReverts)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    auto s = net.call(alice, c1, "callMpc", {0, 0});
    ASSERT_EQ(s.status, TxStatus::suspended) << s.detail;
    auto t = net.tx(TxKind::create, bob);
    t.fixture = "pinger";
    t.args = {c1.value};
    auto rc = net.ledger->apply(t);
    EXPECT_EQ(rc.status, TxStatus::reverted);
    EXPECT_TRUE(rc.denied_by_lock);
    EXPECT_EQ(net.ledger->state().find(contract_address(bob, 0)), nullptr);
}

TEST(Ledger, LockLifecycle)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    const Word before = net.total();
    auto s = net.call(alice, c1, "callMpc", {0, 0});
    ASSERT_EQ(s.status, TxStatus::suspended) << s.detail;
    EXPECT_EQ(s.gas_used, 200'000u);
    EXPECT_EQ(net.ledger->locks(), std::set<Address>{c1});
    // sender nonce committed right away, the pending x1 = 1 is not visible
    EXPECT_EQ(net.ledger->state().find(alice)->nonce, net.nonces[alice]);
    EXPECT_EQ(net.storage(c1, 0), 0u);

    // everything touching C1 is turned away meanwhile
    EXPECT_TRUE(net.call(bob, c3, "modifyC1", {5}).denied_by_lock);
    EXPECT_TRUE(net.call(bob, c3, "getC1Bal").denied_by_lock);
    EXPECT_TRUE(net.call(alice, c1, "callMpc", {0, 0}).denied_by_lock);
    EXPECT_EQ(net.storage(c3, 1), 0u);
    // unrelated work goes on
    EXPECT_EQ(net.call(bob, c2, "setX2", {3}).status, TxStatus::success);
    net.ledger->commit_block();

    auto r = net.attest(s.tx_hash, 1, {4, 0, 0}, 2);
    ASSERT_TRUE(r.resumed);
    ASSERT_TRUE(r.meta_finished);
    EXPECT_FALSE(r.meta_reverted);
    EXPECT_TRUE(net.ledger->locks().empty());
    EXPECT_EQ(net.storage(c1, 0), 2u);
    EXPECT_EQ(net.ledger->txmgr().find(s.tx_hash)->status, SessionStatus::finished);
    EXPECT_EQ(net.total(), before);
    EXPECT_TRUE(net.ledger->audit_violations().empty());
    EXPECT_GT(net.ledger->audited_accesses(), 0u);

    // a late attestation only costs its sender the fee
    const Hash32 h = net.ledger->state_hash();
    auto stale = net.attest(s.tx_hash, 1, {4, 0, 0}, 3);
    EXPECT_EQ(stale.status, TxStatus::success);
    EXPECT_FALSE(stale.resumed);
    EXPECT_NE(net.ledger->state_hash(), h);
    EXPECT_EQ(net.storage(c1, 0), 2u);
}

TEST(Ledger, ResumeRevertUnlocksAndRefunds)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    const Word before = net.balance(alice);
    auto s = net.call(alice, c1, "callMpc", {0, 1}, 1000);
    ASSERT_EQ(s.status, TxStatus::suspended);
    EXPECT_EQ(net.balance(alice), before - 1000 - 200'000);
    auto r = net.attest(s.tx_hash, 1, {4, 0, 0}, 2);
    ASSERT_TRUE(r.meta_finished);
    EXPECT_TRUE(r.meta_reverted);
    EXPECT_TRUE(net.ledger->locks().empty());
    EXPECT_EQ(net.balance(alice), before - 200'000);
    EXPECT_EQ(net.storage(c1, 0), 0u);
    EXPECT_EQ(net.storage(c2, 0), 0u);
    // the manager keeps the record
    EXPECT_EQ(net.ledger->txmgr().find(s.tx_hash)->results.size(), 1u);
}

TEST(Ledger, TouchBeforeMpcRevertsWithoutLock)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    auto s = net.call(alice, c1, "callMpc", {1, 0});
    EXPECT_EQ(s.status, TxStatus::reverted);
    EXPECT_EQ(s.error, VmError::access_violation);
    EXPECT_TRUE(net.ledger->locks().empty());
    EXPECT_TRUE(net.ledger->txmgr().sessions().empty());
}

TEST(Ledger, MpcMessagesRequireCommittee)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    auto s = net.call(alice, c1, "callMpc", {0, 0});
    auto t = net.tx(TxKind::mpc_message, bob);
    t.session = {s.tx_hash, 1};
    t.messages.push_back({MsgKind::ready, 1, 0, 0, {}, {}, {}, {}});
    EXPECT_EQ(net.ledger->apply(t).status, TxStatus::reverted);
    auto u = net.tx(TxKind::mpc_message, net.cfg.committee[0]);
    u.session = {Hash32{}, 1};
    EXPECT_EQ(net.ledger->apply(u).status, TxStatus::reverted);
    // attestations must not ride in message transactions
    auto v = net.tx(TxKind::mpc_message, net.cfg.committee[0]);
    v.session = {s.tx_hash, 1};
    v.messages.push_back({MsgKind::result_attest, 0, 0, 0, {}, {}, {}, {1, 0, 0}});
    EXPECT_EQ(net.ledger->apply(v).status, TxStatus::reverted);
}

TEST(Ledger, EventsReleasedAtCommit)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    auto s = net.call(alice, c1, "callMpc", {0, 0});
    ASSERT_EQ(s.status, TxStatus::suspended);
    auto b = net.ledger->commit_block();
    ASSERT_EQ(b.events.started.size(), 1u);
    EXPECT_EQ(b.events.started[0].key.tx, s.tx_hash);
    EXPECT_EQ(b.events.started[0].params, (std::vector<Word>{1, 1, 1, 1}));
    for (std::uint32_t i = 0; i < 3; ++i)
    {
        auto t = net.tx(TxKind::mpc_message, net.cfg.committee[i]);
        t.session = {s.tx_hash, 1};
        t.messages.push_back({MsgKind::ready, 3, 0, 0, {}, {}, {}, {}});
        net.ledger->apply(t);
    }
    auto b2 = net.ledger->commit_block();
    ASSERT_EQ(b2.events.approvals.size(), 1u);
    EXPECT_EQ(b2.events.approvals[0].op, 3u);
    EXPECT_EQ(b2.events.messages.size(), 3u);
    EXPECT_EQ(b2.events.messages[2].sender, 3u);
}

TEST(Ledger, CircuitChecksAtSuspension)
{
    Net net;
    const Address c2 = net.create(alice, "lock_c2", {});
    // an unknown circuit id and a short party list both revert the call
    const Address bad_cid = net.create(alice, "lock_c1", {c2.value, 99, 0x100, 0x101, 0x102, 0x103});
    EXPECT_EQ(net.call(alice, bad_cid, "callMpc", {0, 0}).error, VmError::mpc_rejected);
    const Address short_list = net.create(alice, "lock_c1", {c2.value, net.sum_cid, 0x100, 0x101});
    EXPECT_EQ(net.call(alice, short_list, "callMpc", {0, 0}).error, VmError::mpc_rejected);
    EXPECT_TRUE(net.ledger->locks().empty());
}

TEST(Ledger, NonBlockingBlock)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    net.ledger->commit_block();
    ASSERT_EQ(net.call(alice, c1, "callMpc", {0, 0}).status, TxStatus::suspended);
    for (int i = 0; i < 100; ++i)
        net.call(bob, Address{0x9000u + static_cast<unsigned>(i)}, "", {}, 1);
    auto b = net.ledger->commit_block();
    ASSERT_EQ(b.receipts.size(), 101u);
    std::size_t ok = 0;
    for (const auto& r : b.receipts)
        ok += r.status == TxStatus::success;
    EXPECT_EQ(ok, 100u);
    EXPECT_EQ(net.ledger->locks().size(), 1u);
}

TEST(Ledger, Determinism)
{
    auto run = [] {
        Net net;
        auto [c1, c2, c3] = net.lock_contracts();
        net.call(alice, c1, "callMpc", {0, 0});
        net.call(bob, c3, "modifyC1", {4});
        net.ledger->commit_block();
        return net.ledger->state_hash();
    };
    EXPECT_EQ(run(), run());
}

TEST(Ledger, EmptyBlockOnlyMovesHeight)
{
    Net net;
    const Hash32 h0 = net.ledger->state_hash();
    auto b = net.ledger->commit_block();
    EXPECT_EQ(b.height, 1u);
    EXPECT_TRUE(b.receipts.empty());
    EXPECT_NE(b.state_hash, h0);
}

TEST(Ledger, ReceiptJson)
{
    Net net;
    auto rc = net.call(alice, bob, "", {}, 1);
    auto j = to_json(rc);
    EXPECT_EQ(j["status"], "success");
    EXPECT_EQ(j["gas_used"], net.cfg.base_gas);
    EXPECT_EQ(j["tx_hash"].get<std::string>().size(), 64u);
}

TEST(Ledger, VotingMetaTransaction)
{
    Net net;
    std::vector<Word> args{1, 2, 50, net.vote_cid};
    for (Address p : net.cfg.committee)
        args.push_back(p.value);
    const Address vote = net.create(alice, "mpc_vote", args);
    const std::vector<Word> deps{80, 10, 60, 55};
    for (std::size_t i = 0; i < 4; ++i)
        ASSERT_EQ(net.call(net.cfg.committee[i], vote, "deposit", {}, deps[i]).status, TxStatus::success);
    for (int i = 0; i < 7; ++i)
        net.ledger->commit_block();
    auto s = net.call(alice, vote, "mpcVote");
    ASSERT_EQ(s.status, TxStatus::suspended) << s.detail;
    auto b = net.ledger->commit_block();
    ASSERT_EQ(b.events.started.size(), 1u);
    EXPECT_EQ(b.events.started[0].params, (std::vector<Word>{80, 0, 60, 55}));
    // a voter who is also in the committee can still transact
    EXPECT_EQ(net.call(net.cfg.committee[0], bob, "", {}, 1).status, TxStatus::success);
    EXPECT_TRUE(net.call(net.cfg.committee[1], vote, "withdraw", {5}).denied_by_lock);
    auto r = net.attest(s.tx_hash, 1, {1, 0, 0}, 2);
    ASSERT_TRUE(r.meta_finished);
    EXPECT_EQ(net.call(bob, vote, "winnerId").ret, 1u);
}

TEST(Ledger, SerialReplayMatches)
{
    Net net;
    auto [c1, c2, c3] = net.lock_contracts();
    const Address tok = net.create(carol, "erc20", {1000});
    net.ledger->commit_block();
    auto s = net.call(alice, c1, "callMpc", {0, 0}, 10);
    net.call(bob, c3, "modifyC1", {4});
    net.call(carol, tok, "transfer", {bob.value, 10});
    net.ledger->commit_block();
    net.call(bob, c2, "setX2", {8});
    net.call(carol, tok, "transfer", {alice.value, 2000});
    net.call(bob, c3, "getC1Bal");
    net.ledger->commit_block();
    auto r = net.attest(s.tx_hash, 1, {5, 0, 0}, 2);
    ASSERT_TRUE(r.meta_finished);
    net.call(bob, c3, "modifyC1", {4});
    // a second meta-transaction that reverts on resume
    auto s2 = net.call(alice, c1, "callMpc", {0, 1}, 3);
    ASSERT_EQ(s2.status, TxStatus::suspended);
    net.ledger->commit_block();
    net.attest(s2.tx_hash, 1, {5, 0, 0}, 2);
    net.ledger->commit_block();

    auto replay = serial_replay(net.cfg, net.reg, resolve, net.genesis, *net.ledger);
    EXPECT_EQ(replay.state_hash, net.ledger->state_hash());
    EXPECT_TRUE(net.ledger->audit_violations().empty());
}
