// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/fixtures.hpp"
#include "mpcevm/vm.hpp"

#include <gtest/gtest.h>

using namespace mpcevm;

namespace
{
const Address alice{0xa11ce};
const Address bob{0xb0b};

struct Chain
{
    WorldState state;
    Vm vm{VmConfig{}, load_fixture};
    std::set<Address> locks;
    Word now = 1000;

    Address deploy(const std::string& fixture, Address at, std::vector<Word> args = {}, Address by = alice)
    {
        state.at(at).code = load_fixture(fixture);
        WriteSet ws;
        StateView view{state, ws};
        auto r = vm.construct(view, env(by), locks, by, at, std::move(args), 0);
        EXPECT_EQ(r.status, ExecStatus::completed) << r.detail;
        state.apply(ws);
        return at;
    }

    Address deploy_source(std::string_view src, Address at)
    {
        state.at(at).code = std::make_shared<const ContractCode>(assemble(src, "inline"));
        return at;
    }

    TxEnv env(Address origin) const { return TxEnv{origin, now, 1, 1'000'000}; }

    /// Runs a call and commits its writes if it completed.
    ExecResult call(Address from, Address to, const std::string& m, std::vector<Word> args = {}, Word value = 0)
    {
        WriteSet ws;
        StateView view{state, ws};
        // the ledger moves the call value before entering the VM
        if (!view.transfer(from, to, value))
            return ExecResult{ExecStatus::reverted, 0, VmError::insufficient_balance};
        auto r = vm.call(view, env(from), locks, from, to, m, std::move(args), value);
        if (r.status == ExecStatus::completed)
            state.apply(ws);
        return r;
    }

    Word word(Address a, Word key) const
    {
        const Account* acc = state.find(a);
        if (!acc)
            return 0;
        auto it = acc->storage.find(key);
        return it == acc->storage.end() ? 0 : it->second;
    }
};

}  // namespace

TEST(Assembler, LabelsAndSymbols)
{
    auto code = assemble(R"(
.storage K 7
.const TEN 0x0a
.method m
    PUSH TEN   ; ten
top:
    JMP top
.end
)",
        "t");
    const Method* m = code.find("m");
    ASSERT_NE(m, nullptr);
    ASSERT_EQ(m->code.size(), 2u);
    EXPECT_EQ(m->code[0].imm, 10u);
    EXPECT_EQ(m->code[1].a, 1u);
    EXPECT_EQ(code.symbols.at("K"), 7u);
}

TEST(Assembler, Errors)
{
    EXPECT_THROW(assemble(".method m\n FROB\n.end\n", "t"), AssemblyError);
    EXPECT_THROW(assemble(".method m\n JMP nowhere\n.end\n", "t"), AssemblyError);
    EXPECT_THROW(assemble(".method m\n PUSH 1\n", "t"), AssemblyError);
    EXPECT_THROW(assemble("PUSH 1\n", "t"), AssemblyError);
    EXPECT_THROW(assemble(".method m\n PUSH\n.end\n", "t"), AssemblyError);
    EXPECT_THROW(assemble(".method m\n PUSH nope\n.end\n", "t"), AssemblyError);
}

TEST(Assembler, EveryFixtureAssembles)
{
    for (const auto& [name, src] : fixture_sources())
        EXPECT_NE(load_fixture(name), nullptr) << name;
    EXPECT_EQ(load_fixture("no_such_fixture"), nullptr);
}

TEST(Vm, PushReturn)
{
    Chain c;
    c.deploy_source(".method m\n PUSH 1\n RETURN\n.end\n", Address{0x10});
    auto r = c.call(alice, Address{0x10}, "m");
    EXPECT_EQ(r.status, ExecStatus::completed);
    EXPECT_EQ(r.ret, 1u);
    EXPECT_EQ(r.gas_used, 2u);
}

TEST(Vm, ArithmeticAndBranches)
{
    Chain c;
    // sum of 1..10 with a loop
    c.deploy_source(R"(
.method m
    PUSH 0
    STOREL 0
    PUSH 1
    STOREL 1
loop:
    LOADL 1
    PUSH 11
    LT
    JZ done
    LOADL 0
    LOADL 1
    ADD
    STOREL 0
    LOADL 1
    PUSH 1
    ADD
    STOREL 1
    JMP loop
done:
    LOADL 0
    RETURN
.end
.method ops
    PUSH 7
    PUSH 2
    SUB
    PUSH 3
    MUL
    PUSH 4
    DIV
    PUSH 0
    DIV
    PUSH 9
    PUSH 4
    MOD
    ADD
    RETURN
.end
)",
        Address{0x10});
    EXPECT_EQ(c.call(alice, Address{0x10}, "m").ret, 55u);
    EXPECT_EQ(c.call(alice, Address{0x10}, "ops").ret, 1u);
}

TEST(Vm, Errors)
{
    Chain c;
    c.deploy_source(R"(
.method under
    ADD
.end
.method spin
top:
    JMP top
.end
.method rev
    REVERT
.end
.method arg
    ARG 3
.end
)",
        Address{0x10});
    EXPECT_EQ(c.call(alice, Address{0x10}, "under").error, VmError::stack_underflow);
    EXPECT_EQ(c.call(alice, Address{0x10}, "spin").error, VmError::out_of_gas);
    EXPECT_EQ(c.call(alice, Address{0x10}, "rev").error, VmError::explicit_revert);
    EXPECT_EQ(c.call(alice, Address{0x10}, "arg").error, VmError::bad_operand);
    EXPECT_EQ(c.call(alice, Address{0x10}, "missing").error, VmError::unknown_method);
    EXPECT_EQ(c.call(alice, Address{0x99}, "m").error, VmError::no_code);
}

TEST(Vm, RevertDiscardsStorage)
{
    Chain c;
    c.deploy_source(".method m\n PUSH 5\n SSTORE 1\n REVERT\n.end\n", Address{0x10});
    auto r = c.call(alice, Address{0x10}, "m");
    EXPECT_EQ(r.status, ExecStatus::reverted);
    EXPECT_EQ(c.word(Address{0x10}, 1), 0u);
}

TEST(Vm, CallTracksAccessedSet)
{
    Chain c;
    const Address b = c.deploy("lock_c2", Address{0xb});
    c.deploy_source(R"(
.method m
    PUSH 4
    PUSH 0
    PUSH 0xb
    CALL setX2 1
    POP
    SLOAD 0
    RETURN
.end
)",
        Address{0xa});
    auto r = c.call(alice, Address{0xa}, "m");
    ASSERT_EQ(r.status, ExecStatus::completed) << r.detail;
    EXPECT_EQ(r.accessed, (std::set<Address>{Address{0xa}, b}));
    EXPECT_EQ(c.word(b, 0), 4u);
}

TEST(Vm, EnterMpcAfterForeignCallIsRejected)
{
    Chain c;
    c.deploy("lock_c2", Address{0xb});
    c.deploy_source(R"(
.method m
    PUSH 1
    PUSH 0
    PUSH 0xb
    CALL setX2 1
    POP
    PUSH 0
    NEWARR 1
    ENTER_MPC 0 1 2
    RETURN
.end
)",
        Address{0xa});
    auto r = c.call(alice, Address{0xa}, "m");
    EXPECT_EQ(r.status, ExecStatus::reverted);
    EXPECT_EQ(r.error, VmError::access_violation);
}

TEST(Vm, NoEnterMpcRunsToCompletion)
{
    Chain c;
    const Address tok = c.deploy("erc20", Address{0x20}, {1000});
    auto r = c.call(alice, tok, "transfer", {bob.value, 300});
    ASSERT_EQ(r.status, ExecStatus::completed) << r.detail;
    EXPECT_EQ(c.call(alice, tok, "balanceOf", {alice.value}).ret, 700u);
    EXPECT_EQ(c.call(alice, tok, "balanceOf", {bob.value}).ret, 300u);
    EXPECT_EQ(c.call(bob, tok, "transfer", {alice.value, 301}).error, VmError::explicit_revert);
}

// ---------------------------------------------------------------------------
// Lock tester contracts

namespace
{
struct LockRig : Chain
{
    Address c1{0xc1}, c2{0xc2}, c3{0xc3};

    LockRig()
    {
        deploy("lock_c2", c2);
        deploy("lock_c1", c1, {c2.value, 0, 0x1, 0x2, 0x3, 0x4});
        deploy("lock_c3", c3, {c1.value});
    }

    ExecResult start(bool before, bool after, WriteSet& ws)
    {
        StateView view{state, ws};
        return vm.call(view, env(alice), locks, alice, c1, "callMpc", {before, after}, 0);
    }
};
}  // namespace

TEST(LockTester, TouchBeforeMpcReverts)
{
    LockRig rig;
    WriteSet ws;
    auto r = rig.start(true, false, ws);
    EXPECT_EQ(r.status, ExecStatus::reverted);
    EXPECT_EQ(r.error, VmError::access_violation);
    EXPECT_FALSE(r.mpc.has_value());
}

TEST(LockTester, SuspendsWithRequest)
{
    LockRig rig;
    WriteSet ws;
    auto r = rig.start(false, false, ws);
    ASSERT_EQ(r.status, ExecStatus::suspended) << r.detail;
    ASSERT_TRUE(r.mpc);
    EXPECT_EQ(r.mpc->cid, 0u);
    EXPECT_EQ(r.mpc->params, (std::vector<Word>{1, 1, 1, 1}));
    EXPECT_EQ(r.mpc->parties.size(), 4u);
    EXPECT_EQ(r.mpc->parties[2], Address{0x3});
    EXPECT_EQ(r.accessed, std::set<Address>{rig.c1});
    ASSERT_TRUE(r.cont);
    EXPECT_EQ(r.gas_used, r.cont->gas_used);
    EXPECT_GE(r.gas_used, 1000u);
}

TEST(LockTester, ResumeCompletes)
{
    LockRig rig;
    WriteSet ws;
    auto r = rig.start(false, false, ws);
    ASSERT_EQ(r.status, ExecStatus::suspended);
    StateView view{rig.state, ws};
    auto done = rig.vm.resume(view, *r.cont, {4, 0, 0}, {rig.c1});
    ASSERT_EQ(done.status, ExecStatus::completed) << done.detail;
    rig.state.apply(ws);
    EXPECT_EQ(rig.word(rig.c1, 0), 2u);
}

TEST(LockTester, TouchAfterMpcRevertsAtResume)
{
    LockRig rig;
    WriteSet ws;
    auto r = rig.start(false, true, ws);
    ASSERT_EQ(r.status, ExecStatus::suspended);
    StateView view{rig.state, ws};
    auto done = rig.vm.resume(view, *r.cont, {4, 0, 0}, {rig.c1});
    EXPECT_EQ(done.status, ExecStatus::reverted);
    EXPECT_EQ(done.error, VmError::access_violation);
}

TEST(LockTester, ResumeIsDeterministic)
{
    LockRig rig;
    WriteSet ws;
    auto r = rig.start(false, false, ws);
    ASSERT_EQ(r.status, ExecStatus::suspended);
    WriteSet a = ws, b = ws;
    StateView va{rig.state, a}, vb{rig.state, b};
    auto ra = rig.vm.resume(va, *r.cont, {9, 0, 0}, {rig.c1});
    auto rb = rig.vm.resume(vb, *r.cont, {9, 0, 0}, {rig.c1});
    EXPECT_EQ(ra.status, rb.status);
    EXPECT_EQ(ra.gas_used, rb.gas_used);
    ASSERT_EQ(a.size(), b.size());
    for (const auto& [addr, d] : a)
    {
        EXPECT_EQ(d.storage, b.at(addr).storage);
        EXPECT_EQ(d.balance_add, b.at(addr).balance_add);
    }
}

TEST(LockTester, OutsidersAreDeniedWhileLocked)
{
    LockRig rig;
    rig.locks = {rig.c1};
    auto m = rig.call(bob, rig.c3, "modifyC1", {7});
    EXPECT_EQ(m.status, ExecStatus::reverted);
    EXPECT_TRUE(m.denied_by_lock);
    auto g = rig.call(bob, rig.c3, "getC1Bal");
    EXPECT_EQ(g.status, ExecStatus::reverted);
    EXPECT_TRUE(g.denied_by_lock);
    auto d = rig.call(bob, rig.c1, "setX1", {5});
    EXPECT_TRUE(d.denied_by_lock);
    EXPECT_EQ(rig.word(rig.c1, 0), 0u);
    EXPECT_EQ(rig.word(rig.c3, 1), 0u);

    rig.locks.clear();
    EXPECT_EQ(rig.call(bob, rig.c3, "modifyC1", {7}).status, ExecStatus::completed);
    EXPECT_EQ(rig.word(rig.c1, 0), 7u);
    EXPECT_EQ(rig.word(rig.c3, 1), 8u);
}

TEST(AccessCheck, TransferRules)
{
    Chain c;
    c.state.at(Address{0x10}).balance = 100;
    c.deploy_source(R"(
.method pay
    ARG 0
    ARG 1
    TRANSFER
    RETURN
.end
)",
        Address{0x10});
    EXPECT_EQ(c.call(alice, Address{0x10}, "pay", {bob.value, 30}).status, ExecStatus::completed);
    EXPECT_EQ(c.state.find(bob)->balance, 30u);
    c.locks = {Address{0x77}};
    auto denied = c.call(alice, Address{0x10}, "pay", {0x77, 1});
    EXPECT_TRUE(denied.denied_by_lock);
    EXPECT_EQ(c.call(alice, Address{0x10}, "pay", {bob.value, 500}).error, VmError::insufficient_balance);
    EXPECT_EQ(c.call(alice, Address{0x10}, "pay", {txmgr_address.value, 1}).error, VmError::not_eoa);
}

TEST(AccessCheck, DelegateCallToLockedCode)
{
    Chain c;
    c.deploy("lock_c2", Address{0xb});
    c.state.at(Address{0xa}).balance = 10;
    c.deploy_source(R"(
.method borrow
    PUSH 3
    ARG 0
    PUSH 0xb
    DELEGATECALL setX2 1
    RETURN
.end
)",
        Address{0xa});
    c.locks = {Address{0xb}};
    auto plain = c.call(alice, Address{0xa}, "borrow", {0});
    ASSERT_EQ(plain.status, ExecStatus::completed) << plain.detail;
    // the borrowed code wrote into the caller's storage
    EXPECT_EQ(c.word(Address{0xa}, 0), 3u);
    EXPECT_EQ(c.word(Address{0xb}, 0), 0u);
    EXPECT_FALSE(plain.accessed.contains(Address{0xb}));
    auto paid = c.call(alice, Address{0xa}, "borrow", {5});
    EXPECT_TRUE(paid.denied_by_lock);
}

TEST(AccessCheck, CreateAndSelfDestruct)
{
    Chain c;
    c.deploy_source(R"(
.method make
    PUSH 500
    PUSH 0
    CREATE erc20 1
    RETURN
.end
.method die
    ARG 0
    SELFDESTRUCT
.end
)",
        Address{0xa});
    auto made = c.call(alice, Address{0xa}, "make");
    ASSERT_EQ(made.status, ExecStatus::completed) << made.detail;
    const Address fresh{made.ret};
    EXPECT_EQ(fresh, contract_address(Address{0xa}, 0));
    ASSERT_NE(c.state.find(fresh), nullptr);
    EXPECT_EQ(c.call(alice, fresh, "balanceOf", {0xa}).ret, 500u);

    c.locks = {Address{0x77}};
    EXPECT_TRUE(c.call(alice, Address{0xa}, "die", {0x77}).denied_by_lock);
    c.locks.clear();
    c.state.at(Address{0xa}).balance = 9;
    EXPECT_EQ(c.call(alice, Address{0xa}, "die", {bob.value}).status, ExecStatus::completed);
    EXPECT_EQ(c.state.find(Address{0xa}), nullptr);
    EXPECT_EQ(c.state.find(bob)->balance, 9u);
}

TEST(AccessCheck, ConfinedExecutionCannotCreate)
{
    Chain c;
    c.deploy_source(R"(
.method m
    PUSH 0
    NEWARR 1
    PUSH 7
    STOREL 0
    ENTER_MPC 0 1 2
    PUSH 0
    PUSH 0
    CREATE erc20 1
    RETURN
.end
)",
        Address{0xa});
    WriteSet ws;
    StateView view{c.state, ws};
    auto r = c.vm.call(view, c.env(alice), {}, alice, Address{0xa}, "m", {}, 0);
    ASSERT_EQ(r.status, ExecStatus::suspended);
    EXPECT_EQ(r.mpc->cid, 7u);
    auto done = c.vm.resume(view, *r.cont, {1}, {Address{0xa}});
    EXPECT_EQ(done.error, VmError::access_violation);
}

TEST(AccessCheck, ContractCannotCallManager)
{
    Chain c;
    c.deploy_source(".method m\n PUSH 0\n PUSH 0x0888000000000008\n CALL ready 0\n.end\n", Address{0xa});
    EXPECT_EQ(c.call(alice, Address{0xa}, "m").error, VmError::not_eoa);
}

TEST(Vm, OracleAnswersSynchronously)
{
    LockRig rig;
    WriteSet ws;
    StateView view{rig.state, ws};
    int asked = 0;
    MpcOracle oracle = [&](const MpcRequest& req, std::uint32_t inv) -> std::optional<std::vector<Word>> {
        ++asked;
        EXPECT_EQ(inv, 1u);
        EXPECT_EQ(req.params.size(), 4u);
        return std::vector<Word>{3, 0, 0};
    };
    auto r = rig.vm.call(view, rig.env(alice), {}, alice, rig.c1, "callMpc", {0, 1}, 0, oracle);
    EXPECT_EQ(asked, 1);
    // the oracle puts execution in the resumed regime, so touching C2 fails
    EXPECT_EQ(r.error, VmError::access_violation);
}

// ---------------------------------------------------------------------------
// Voting contract

namespace
{
struct VoteRig : Chain
{
    Address vote{0x5};
    std::vector<Address> voters{Address{0x101}, Address{0x102}, Address{0x103}, Address{0x104}};

    VoteRig()
    {
        std::vector<Word> args{11, 22, 50, 0};
        for (Address v : voters)
        {
            args.push_back(v.value);
            state.at(v).balance = 1000;
        }
        deploy("mpc_vote", vote, args, alice);
    }
};
}  // namespace

TEST(VoteContract, ConstructorSetsStartTime)
{
    VoteRig rig;
    EXPECT_EQ(rig.word(rig.vote, 5), rig.now + 3600);
    EXPECT_EQ(rig.word(rig.vote, 6), 4u);
    EXPECT_EQ(rig.word(rig.vote, 0x100 + 2), 0x103u);
}

TEST(VoteContract, DepositWithdraw)
{
    VoteRig rig;
    ASSERT_EQ(rig.call(rig.voters[0], rig.vote, "deposit", {}, 80).status, ExecStatus::completed);
    EXPECT_EQ(rig.call(bob, rig.vote, "depositOf", {rig.voters[0].value}).ret, 80u);
    EXPECT_EQ(rig.state.find(rig.vote)->balance, 80u);
    EXPECT_EQ(rig.call(rig.voters[0], rig.vote, "withdraw", {30}).status, ExecStatus::completed);
    EXPECT_EQ(rig.state.find(rig.voters[0])->balance, 950u);
    EXPECT_EQ(rig.call(rig.voters[0], rig.vote, "withdraw", {51}).error, VmError::explicit_revert);
}

TEST(VoteContract, TooEarlyOrWrongCaller)
{
    VoteRig rig;
    EXPECT_EQ(rig.call(alice, rig.vote, "mpcVote").error, VmError::explicit_revert);
    rig.now += 3600;
    EXPECT_EQ(rig.call(bob, rig.vote, "mpcVote").error, VmError::explicit_revert);
}

TEST(VoteContract, WeightsAndWinner)
{
    VoteRig rig;
    const std::vector<Word> deposits{80, 10, 50, 0};
    for (std::size_t i = 0; i < deposits.size(); ++i)
        if (deposits[i])
            rig.call(rig.voters[i], rig.vote, "deposit", {}, deposits[i]);
    rig.now += 3600;
    WriteSet ws;
    StateView view{rig.state, ws};
    auto r = rig.vm.call(view, rig.env(alice), {}, alice, rig.vote, "mpcVote", {}, 0);
    ASSERT_EQ(r.status, ExecStatus::suspended) << r.detail;
    // minimum deposit is 50
    EXPECT_EQ(r.mpc->params, (std::vector<Word>{80, 0, 50, 0}));
    auto done = rig.vm.resume(view, *r.cont, {1, 0, 0}, {rig.vote});
    ASSERT_EQ(done.status, ExecStatus::completed) << done.detail;
    rig.state.apply(ws);
    EXPECT_EQ(rig.call(bob, rig.vote, "winnerId").ret, 1u);
    EXPECT_EQ(rig.word(rig.vote, 8), 1u);
}

TEST(VoteContract, CheaterDepositIsShared)
{
    VoteRig rig;
    const std::vector<Word> deposits{80, 60, 50, 70};
    for (std::size_t i = 0; i < deposits.size(); ++i)
        rig.call(rig.voters[i], rig.vote, "deposit", {}, deposits[i]);
    rig.now += 3600;
    WriteSet ws;
    StateView view{rig.state, ws};
    auto r = rig.vm.call(view, rig.env(alice), {}, alice, rig.vote, "mpcVote", {}, 0);
    ASSERT_EQ(r.status, ExecStatus::suspended);
    auto done = rig.vm.resume(view, *r.cont, {0, 1, 2}, {rig.vote});
    ASSERT_EQ(done.status, ExecStatus::completed) << done.detail;
    rig.state.apply(ws);
    // voter 2 forfeits 50: 12 to each other voter, 14 to the organizer
    const Word share = 50 / 4;
    EXPECT_EQ(rig.call(bob, rig.vote, "depositOf", {rig.voters[2].value}).ret, 0u);
    EXPECT_EQ(rig.call(bob, rig.vote, "depositOf", {rig.voters[0].value}).ret, 80 + share);
    EXPECT_EQ(rig.call(bob, rig.vote, "depositOf", {rig.voters[3].value}).ret, 70 + share);
    EXPECT_EQ(rig.call(bob, rig.vote, "depositOf", {alice.value}).ret, 50 - 3 * share);
    EXPECT_EQ(rig.word(rig.vote, 9), rig.voters[2].value);
    EXPECT_EQ(rig.call(bob, rig.vote, "winnerId").ret, 0u);
}

// ---------------------------------------------------------------------------
// Auction contract

namespace
{
struct AuctionRig : Chain
{
    Address auction{0x6};
    std::vector<Address> bidders{Address{0x201}, Address{0x202}, Address{0x203}};

    AuctionRig()
    {
        std::vector<Word> args{100, 1};
        for (Address b : bidders)
        {
            args.push_back(b.value);
            state.at(b).balance = 10'000;
        }
        deploy("mpc_auction", auction, args, alice);
    }

    ExecResult settle(const std::vector<Word>& deposits, const std::vector<Word>& result, std::vector<Word>* params)
    {
        for (std::size_t i = 0; i < deposits.size(); ++i)
            if (deposits[i])
                call(bidders[i], auction, "deposit", {}, deposits[i]);
        now += 3600;
        WriteSet ws;
        StateView view{state, ws};
        auto r = vm.call(view, env(alice), {}, alice, auction, "mpcAuction", {}, 0);
        EXPECT_EQ(r.status, ExecStatus::suspended) << r.detail;
        if (params)
            *params = r.mpc->params;
        EXPECT_EQ(r.mpc->parties, bidders);
        auto done = vm.resume(view, *r.cont, result, {auction});
        if (done.status == ExecStatus::completed)
            state.apply(ws);
        return done;
    }

    Word deposit_of(Address a) { return call(bob, auction, "depositOf", {a.value}).ret; }
};
}  // namespace

TEST(AuctionContract, WinnerPays)
{
    AuctionRig rig;
    std::vector<Word> params;
    auto done = rig.settle({500, 99, 300}, {250, 2, 0, 0}, &params);
    ASSERT_EQ(done.status, ExecStatus::completed) << done.detail;
    EXPECT_EQ(params, (std::vector<Word>{1, 0, 1}));
    EXPECT_EQ(rig.call(bob, rig.auction, "highestBid").ret, 250u);
    EXPECT_EQ(rig.call(bob, rig.auction, "highestBidder").ret, rig.bidders[2].value);
    EXPECT_EQ(rig.deposit_of(rig.bidders[2]), 50u);
    EXPECT_EQ(rig.deposit_of(alice), 250u);
}

TEST(AuctionContract, OverbidIsPunished)
{
    AuctionRig rig;
    auto done = rig.settle({500, 120, 300}, {400, 2, 0, 0}, nullptr);
    ASSERT_EQ(done.status, ExecStatus::completed) << done.detail;
    EXPECT_EQ(rig.deposit_of(rig.bidders[2]), 0u);
    EXPECT_EQ(rig.deposit_of(rig.bidders[0]), 600u);
    EXPECT_EQ(rig.deposit_of(rig.bidders[1]), 220u);
    EXPECT_EQ(rig.deposit_of(alice), 100u);
    EXPECT_EQ(rig.word(rig.auction, 8), rig.bidders[2].value);
    EXPECT_EQ(rig.word(rig.auction, 7), 0u);
}

TEST(AuctionContract, CheaterFlag)
{
    AuctionRig rig;
    auto done = rig.settle({500, 120, 300}, {0, 0, 1, 0}, nullptr);
    ASSERT_EQ(done.status, ExecStatus::completed) << done.detail;
    EXPECT_EQ(rig.deposit_of(rig.bidders[0]), 0u);
    EXPECT_EQ(rig.deposit_of(rig.bidders[1]), 120 + 500 / 3);
    EXPECT_EQ(rig.word(rig.auction, 8), rig.bidders[0].value);
}
