// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/ledger.hpp"

#include <algorithm>

namespace mpcevm
{
const char* to_string(TxKind k) noexcept
{
    switch (k)
    {
    case TxKind::create:
        return "createTx";
    case TxKind::regular:
        return "regularTx";
    case TxKind::mpc_message:
        return "mpcmessageTx";
    case TxKind::mpc_ret:
        return "mpcretTx";
    }
    return "?";
}

const char* to_string(TxStatus s) noexcept
{
    switch (s)
    {
    case TxStatus::success:
        return "success";
    case TxStatus::reverted:
        return "reverted";
    case TxStatus::suspended:
        return "suspended";
    case TxStatus::invalid:
        return "invalid";
    }
    return "?";
}

namespace
{
void put_u64(std::string& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_str(std::string& out, std::string_view s)
{
    put_u64(out, s.size());
    out.append(s);
}
}  // namespace

std::string encode(const Transaction& tx)
{
    std::string out;
    out.push_back(static_cast<char>(tx.kind));
    put_u64(out, tx.sender.value);
    put_u64(out, tx.nonce);
    put_u64(out, tx.gas_limit);
    put_u64(out, tx.value);
    switch (tx.kind)
    {
    case TxKind::create:
    case TxKind::regular:
        put_str(out, tx.fixture);
        put_u64(out, tx.target.value);
        put_str(out, tx.method);
        put_u64(out, tx.args.size());
        for (Word w : tx.args)
            put_u64(out, w);
        break;
    case TxKind::mpc_message:
    case TxKind::mpc_ret:
        out.append(reinterpret_cast<const char*>(tx.session.tx.data()), tx.session.tx.size());
        put_u64(out, tx.session.invocation);
        put_u64(out, tx.messages.size());
        for (const auto& m : tx.messages)
        {
            out.push_back(static_cast<char>(m.kind));
            put_u64(out, m.op);
            put_u64(out, m.dealer);
            put_u64(out, m.party);
            put_u64(out, m.value.value());
            put_u64(out, m.randomness.value());
            put_u64(out, m.commitments.size());
            for (const auto& c : m.commitments)
                put_u64(out, c.value);
            put_u64(out, m.result.size());
            for (Word w : m.result)
                put_u64(out, w);
        }
        break;
    }
    return out;
}

Hash32 tx_hash(const Transaction& tx)
{
    return sha256(encode(tx));
}

nlohmann::json to_json(const Receipt& r)
{
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : r.events)
        events.push_back({{"address", to_hex(e.address)}, {"data", e.data}});
    nlohmann::json j{
        {"tx_hash", to_hex(r.tx_hash)},
        {"kind", to_string(r.kind)},
        {"status", to_string(r.status)},
        {"gas_used", r.gas_used},
        {"events", events},
    };
    if (r.error != VmError::none)
        j["error"] = to_string(r.error);
    if (!r.detail.empty())
        j["detail"] = r.detail;
    if (r.denied_by_lock)
        j["denied_by_lock"] = true;
    if (r.created)
        j["created"] = to_hex(r.created);
    if (r.resumed)
        j["resumed"] = to_hex(*r.resumed);
    if (r.meta_finished)
        j["meta_finished"] = {{"tx", to_hex(*r.meta_finished)}, {"reverted", r.meta_reverted}};
    return j;
}

namespace
{
struct LockMeta
{
    Hash32 tx{};
    std::uint32_t invocation = 0;
};

bool empty_account(const Account& a)
{
    return a.nonce == 0 && a.balance == 0 && a.storage.empty() && !a.code;
}

Hash32 hash_state(std::uint64_t height, const WorldState& state, const std::map<Address, LockMeta>& locks,
    const std::map<Hash32, MpcInfo>& sessions)
{
    Sha256 s;
    s.str("mpcevm/state/v1").u64(height);
    for (const auto& [addr, acc] : state.accounts())
    {
        if (empty_account(acc))
            continue;
        s.u64(addr.value).u64(acc.nonce).u64(acc.balance).str(acc.code ? acc.code->name : "");
        s.u64(acc.storage.size());
        for (const auto& [k, v] : acc.storage)
            s.u64(k).u64(v);
    }
    s.u64(locks.size());
    for (const auto& [addr, m] : locks)
        s.u64(addr.value).hash(m.tx).u64(m.invocation);
    s.u64(sessions.size());
    for (const auto& [tx, info] : sessions)
    {
        s.hash(tx).u64(static_cast<std::uint64_t>(info.status)).u64(info.invocation_count);
        s.u64(info.results.size());
        for (const auto& r : info.results)
        {
            s.u64(r.size());
            for (Word w : r)
                s.u64(w);
        }
    }
    return s.finish();
}

void charge_to(WriteSet& ws, Address who, Word gas)
{
    ws[who].balance_add -= static_cast<std::int64_t>(gas);
    ws[gas_sink_address].balance_add += static_cast<std::int64_t>(gas);
}
}  // namespace

// ---------------------------------------------------------------------------

Ledger::Ledger(LedgerConfig config, std::shared_ptr<CircuitRegistry> circuits, FixtureResolver fixtures)
  : config_{std::move(config)},
    circuits_{std::move(circuits)},
    fixtures_{std::move(fixtures)},
    vm_{config_.vm, fixtures_},
    txmgr_{config_.max_parallel_mults}
{}

std::set<Address> Ledger::locks() const
{
    std::set<Address> out;
    for (const auto& [addr, s] : saved_)
        out.insert(addr);
    return out;
}

void Ledger::charge(WriteSet& ws, Address who, Word gas) const
{
    charge_to(ws, who, gas);
}

AccessHook Ledger::hook(const Hash32& tx)
{
    return [this, tx](Address a, AccessKind k) {
        if (k == AccessKind::code)
            return;
        ++audited_;
        if (saved_.contains(a) && resuming_ != a)
            violations_.push_back({height_ + 1, tx, a, k});
    };
}

Receipt Ledger::apply(const Transaction& tx)
{
    const Hash32 h = tx_hash(tx);
    const TxEnv env{tx.sender, pending_timestamp(), height_ + 1,
        tx.gas_limit > config_.base_gas ? tx.gas_limit - config_.base_gas : 0};
    Receipt rc;
    rc.tx_hash = h;
    rc.kind = tx.kind;

    const Account* acc = state_.find(tx.sender);
    const std::uint64_t nonce = acc ? acc->nonce : 0;
    const Word balance = acc ? acc->balance : 0;
    if (acc && acc->code)
    {
        rc.status = TxStatus::invalid;
        rc.detail = "sender is a contract";
    }
    else if (tx.nonce != nonce)
    {
        rc.status = TxStatus::invalid;
        rc.detail = "bad nonce: expected " + std::to_string(nonce);
    }
    else if (tx.gas_limit < config_.base_gas || balance < tx.gas_limit || balance - tx.gas_limit < tx.value)
    {
        rc.status = TxStatus::invalid;
        rc.detail = "insufficient balance for gas and value";
    }
    else
    {
        switch (tx.kind)
        {
        case TxKind::create:
            rc = apply_create(tx, h, env);
            break;
        case TxKind::regular:
            rc = apply_regular(tx, h, env);
            break;
        case TxKind::mpc_message:
        case TxKind::mpc_ret:
            rc = apply_mpc(tx, h);
            break;
        }
    }
    block_receipts_.push_back(rc);
    block_record_.txs.push_back({tx, rc, env});
    return rc;
}

Receipt Ledger::apply_create(const Transaction& tx, const Hash32& h, const TxEnv& env)
{
    Receipt rc;
    rc.tx_hash = h;
    rc.kind = tx.kind;
    WriteSet ready, body;
    ready[tx.sender].nonce_add = 1;
    ready[tx.sender].balance_add -= static_cast<std::int64_t>(tx.value);

    auto revert = [&](VmError e, std::string detail, Word gas, bool lock = false) {
        WriteSet ws;
        ws[tx.sender].nonce_add = 1;
        charge(ws, tx.sender, gas);
        state_.apply(ws);
        rc.status = TxStatus::reverted;
        rc.error = e;
        rc.detail = std::move(detail);
        rc.gas_used = gas;
        rc.denied_by_lock = lock;
        return rc;
    };

    const Address at = contract_address(tx.sender, tx.nonce);
    if (const Account* existing = state_.find(at); existing && existing->code)
        return revert(VmError::bad_operand, "address already holds code", config_.base_gas);
    StateView view{state_, body, &ready, hook(h)};
    auto code = fixtures_ ? fixtures_(tx.fixture) : nullptr;
    if (!code)
        return revert(VmError::no_code, "unknown fixture " + tx.fixture, config_.base_gas);
    view.deploy(at, code);
    view.bump_nonce(at);
    body[at].balance_add += static_cast<std::int64_t>(tx.value);

    auto r = vm_.construct(view, env, locks(), tx.sender, at, tx.args, tx.value);
    const Word gas = std::min(tx.gas_limit, config_.base_gas + r.gas_used);
    if (r.status == ExecStatus::suspended)
        return revert(VmError::mpc_rejected, "enter_mpc is not available in constructors", gas);
    if (r.status == ExecStatus::reverted)
        return revert(r.error, r.detail, gas, r.denied_by_lock);
    charge(ready, tx.sender, gas);
    merge_writes(ready, body);
    state_.apply(ready);
    rc.status = TxStatus::success;
    rc.gas_used = gas;
    rc.created = at;
    rc.events = std::move(r.events);
    return rc;
}

Receipt Ledger::apply_regular(const Transaction& tx, const Hash32& h, const TxEnv& env)
{
    Receipt rc;
    rc.tx_hash = h;
    rc.kind = tx.kind;
    // ready: what commits even if the call suspends; body: the call's own effects
    WriteSet ready, body;
    ready[tx.sender].nonce_add = 1;
    ready[tx.sender].balance_add -= static_cast<std::int64_t>(tx.value);
    body[tx.target].balance_add += static_cast<std::int64_t>(tx.value);

    auto revert = [&](VmError e, std::string detail, Word gas, bool lock = false) {
        WriteSet ws;
        ws[tx.sender].nonce_add = 1;
        charge(ws, tx.sender, gas);
        state_.apply(ws);
        rc.status = TxStatus::reverted;
        rc.error = e;
        rc.detail = std::move(detail);
        rc.gas_used = gas;
        rc.denied_by_lock = lock;
        return rc;
    };

    const auto lockset = locks();
    if (lockset.contains(tx.target))
        return revert(VmError::access_violation, "target contract is locked", config_.base_gas, true);
    if (tx.target == txmgr_address)
        return revert(VmError::not_eoa, "the manager only takes MPC transactions", config_.base_gas);

    StateView view{state_, body, &ready, hook(h)};
    if (!view.code(tx.target))
    {
        // plain value transfer between accounts
        charge(ready, tx.sender, config_.base_gas);
        merge_writes(ready, body);
        state_.apply(ready);
        rc.status = TxStatus::success;
        rc.gas_used = config_.base_gas;
        return rc;
    }

    auto r = vm_.call(view, env, lockset, tx.sender, tx.target, tx.method, tx.args, tx.value);
    const Word gas = std::min(tx.gas_limit, config_.base_gas + r.gas_used);
    switch (r.status)
    {
    case ExecStatus::reverted:
        return revert(r.error, r.detail, gas, r.denied_by_lock);
    case ExecStatus::completed:
        charge(ready, tx.sender, gas);
        merge_writes(ready, body);
        state_.apply(ready);
        rc.status = TxStatus::success;
        rc.gas_used = gas;
        rc.ret = r.ret;
        rc.events = std::move(r.events);
        return rc;
    case ExecStatus::suspended:
        break;
    }

    if (auto refused = start_session(h, tx.sender, r))
        return revert(VmError::mpc_rejected, *refused, gas);
    // MPC transactions pay their whole gas limit up front, with no refund.
    charge(ready, tx.sender, tx.gas_limit);
    state_.apply(ready);
    SavedMpcState saved;
    saved.tx = h;
    saved.sender = tx.sender;
    saved.value = tx.value;
    saved.cont = *r.cont;
    saved.body = std::move(body);
    saved.invocation = 1;
    saved_[r.cont->contract] = std::move(saved);
    rc.status = TxStatus::suspended;
    rc.gas_used = tx.gas_limit;
    return rc;
}

std::optional<std::string> Ledger::start_session(const Hash32& tx, Address sender, const ExecResult& r)
{
    const MpcRequest& req = *r.mpc;
    if (!circuits_->contains(req.cid))
        return "unknown circuit " + std::to_string(req.cid);
    auto circuit = circuits_->share(req.cid);
    if (circuit->n_parties != config_.committee.size())
        return "circuit was built for a different committee size";
    if (!req.parties.empty() && req.parties != config_.committee)
        return "party list does not match the committee";
    try
    {
        check_ranges(*circuit, req.params);
    }
    catch (const std::exception& e)
    {
        return std::string{"public inputs rejected: "} + e.what();
    }
    MpcInfo& info = txmgr_.enter(tx, r.cont->contract, sender, req.cid, config_.committee, config_.t,
        circuit->output_count);
    pending_events_.started.push_back({info.key(), req.cid, circuit, req.params, config_.committee, info.contract});
    return std::nullopt;
}

Receipt Ledger::apply_mpc(const Transaction& tx, const Hash32& h)
{
    Receipt rc;
    rc.tx_hash = h;
    rc.kind = tx.kind;
    rc.gas_used = config_.base_gas;
    WriteSet ready;
    ready[tx.sender].nonce_add = 1;
    charge(ready, tx.sender, config_.base_gas);

    auto revert = [&](VmError e, std::string detail) {
        state_.apply(ready);
        rc.status = TxStatus::reverted;
        rc.error = e;
        rc.detail = std::move(detail);
        return rc;
    };

    MpcInfo* info = txmgr_.find(tx.session.tx);
    if (!info)
        return revert(VmError::bad_operand, UnknownSession{}.what());
    const std::uint32_t who = info->position(tx.sender);
    if (who == 0)
        return revert(VmError::not_eoa, NotCommitteeMember{}.what());
    for (const auto& m : tx.messages)
        if ((m.kind == MsgKind::result_attest) != (tx.kind == TxKind::mpc_ret))
            return revert(VmError::bad_operand, "result attestations travel in mpcretTx only");

    if (tx.session.invocation != info->invocation_count || info->status != SessionStatus::active)
        rc.detail = "stale session message";
    const std::uint64_t at = height_ + 1;
    for (const auto& m : tx.messages)
    {
        auto fx = txmgr_.broadcast(tx.session, tx.sender, m, at);
        pending_events_.messages.push_back({tx.session, who, m});
        for (const auto& g : fx.approvals)
            pending_events_.approvals.push_back(g);
        if (fx.finish)
            finish_meta(*info, *fx.finish, ready, rc);
    }
    state_.apply(ready);
    rc.status = TxStatus::success;
    return rc;
}

void Ledger::finish_meta(MpcInfo& info, const std::vector<Word>& result, WriteSet& ready, Receipt& rc)
{
    pending_events_.ended.push_back(info.key());
    auto it = saved_.find(info.contract);
    if (it == saved_.end() || it->second.tx != info.tx)
        return;
    SavedMpcState s = std::move(it->second);
    rc.resumed = s.tx;

    WriteSet body = s.body;
    auto others = locks();
    others.erase(info.contract);
    resuming_ = info.contract;
    StateView view{state_, body, &ready, hook(rc.tx_hash)};
    auto r = vm_.resume(view, s.cont, result, others);
    resuming_.reset();

    auto unlock = [&](bool reverted) {
        saved_.erase(info.contract);
        txmgr_.mark_finished(info);
        rc.meta_finished = s.tx;
        rc.meta_reverted = reverted;
    };
    switch (r.status)
    {
    case ExecStatus::completed:
        merge_writes(ready, body);
        for (auto& e : r.events)
            rc.events.push_back(std::move(e));
        unlock(false);
        return;
    case ExecStatus::reverted:
        // the value debited at suspension goes back to the sender
        ready[s.sender].balance_add += static_cast<std::int64_t>(s.value);
        rc.detail = std::string{"resumed execution reverted: "} + to_string(r.error) + " " + r.detail;
        unlock(true);
        return;
    case ExecStatus::suspended:
        break;
    }
    if (auto refused = start_session(s.tx, s.sender, r))
    {
        ready[s.sender].balance_add += static_cast<std::int64_t>(s.value);
        rc.detail = "resumed execution reverted: " + *refused;
        unlock(true);
        return;
    }
    s.cont = *r.cont;
    s.body = std::move(body);
    s.invocation += 1;
    saved_[info.contract] = std::move(s);
}

CommittedBlock Ledger::commit_block()
{
    height_ += 1;
    CommittedBlock b;
    b.height = height_;
    b.timestamp = config_.genesis_time + height_ * config_.block_time;
    b.receipts = std::move(block_receipts_);
    b.events = std::move(pending_events_);
    b.state_hash = state_hash();
    history_.push_back(std::move(block_record_));
    block_receipts_.clear();
    pending_events_ = {};
    block_record_ = {};
    return b;
}

Hash32 Ledger::state_hash() const
{
    std::map<Address, LockMeta> locks;
    for (const auto& [addr, s] : saved_)
        locks[addr] = {s.tx, s.invocation};
    return hash_state(height_, state_, locks, txmgr_.sessions());
}

// ---------------------------------------------------------------------------

SerialReplay serial_replay(const LedgerConfig& config, std::shared_ptr<CircuitRegistry> circuits,
    FixtureResolver fixtures, const WorldState& genesis, const Ledger& committed)
{
    SerialReplay out;
    out.state = genesis;
    WorldState& st = out.state;
    Vm vm{config.vm, fixtures};
    TxMgr mgr;
    std::map<Address, LockMeta> locks;
    std::map<Hash32, const TxRecord*> originals;
    std::map<Hash32, std::size_t> consumed;
    const auto& sessions = committed.txmgr().sessions();

    auto charge_only = [&](const Transaction& tx, Word gas) {
        WriteSet ws;
        ws[tx.sender].nonce_add = 1;
        charge_to(ws, tx.sender, gas);
        return ws;
    };

    std::uint64_t height = 0;
    for (const auto& block : committed.history())
    {
        for (const auto& rec : block.txs)
        {
            const Transaction& tx = rec.tx;
            const Receipt& rc = rec.receipt;
            if (rc.status == TxStatus::invalid)
                continue;
            if (rc.kind == TxKind::create || rc.kind == TxKind::regular)
            {
                if (rc.status == TxStatus::reverted)
                {
                    st.apply(charge_only(tx, rc.gas_used));
                    continue;
                }
                if (rc.status == TxStatus::suspended)
                {
                    // only the ready partition lands here; the body runs where the session finished
                    WriteSet ws = charge_only(tx, tx.gas_limit);
                    ws[tx.sender].balance_add -= static_cast<std::int64_t>(tx.value);
                    st.apply(ws);
                    const MpcInfo& info = sessions.at(rc.tx_hash);
                    originals[rc.tx_hash] = &rec;
                    MpcInfo& mine = mgr.enter(rc.tx_hash, info.contract, tx.sender, info.cid, info.parties, info.t,
                        info.output_count);
                    locks[info.contract] = {rc.tx_hash, mine.invocation_count};
                    continue;
                }
                // a committed call: run it again against the serial state
                WriteSet ready, body;
                ready[tx.sender].nonce_add = 1;
                ready[tx.sender].balance_add -= static_cast<std::int64_t>(tx.value);
                StateView view{st, body, &ready};
                ExecResult r;
                Address target = tx.target;
                if (tx.kind == TxKind::create)
                {
                    target = contract_address(tx.sender, tx.nonce);
                    view.deploy(target, fixtures(tx.fixture));
                    view.bump_nonce(target);
                    body[target].balance_add += static_cast<std::int64_t>(tx.value);
                    r = vm.construct(view, rec.env, {}, tx.sender, target, tx.args, tx.value);
                }
                else
                {
                    body[target].balance_add += static_cast<std::int64_t>(tx.value);
                    if (view.code(target))
                        r = vm.call(view, rec.env, {}, tx.sender, target, tx.method, tx.args, tx.value);
                }
                if (r.status != ExecStatus::completed)
                {
                    st.apply(charge_only(tx, rc.gas_used));
                    continue;
                }
                charge_to(ready, tx.sender, std::min(tx.gas_limit, config.base_gas + r.gas_used));
                merge_writes(ready, body);
                st.apply(ready);
                continue;
            }

            WriteSet ws = charge_only(tx, rc.gas_used);
            if (rc.resumed)
            {
                const Hash32 meta = *rc.resumed;
                const MpcInfo& info = sessions.at(meta);
                MpcInfo* mine = mgr.find(meta);
                const std::size_t k = consumed[meta]++;
                mgr.conclude(*mine, info.results.at(k), height + 1);
                if (!rc.meta_finished)
                {
                    mgr.enter(meta, info.contract, mine->sender, info.cid, info.parties, info.t, info.output_count);
                    locks[info.contract] = {meta, mine->invocation_count};
                }
                else
                {
                    mgr.mark_finished(*mine);
                    locks.erase(info.contract);
                    // the whole meta-transaction, atomically, with the recorded MPC results
                    const TxRecord& orig = *originals.at(meta);
                    WriteSet body;
                    body[orig.tx.target].balance_add += static_cast<std::int64_t>(orig.tx.value);
                    StateView view{st, body, &ws};
                    MpcOracle oracle = [&](const MpcRequest&, std::uint32_t inv) -> std::optional<std::vector<Word>> {
                        if (inv == 0 || inv > info.results.size())
                            return std::nullopt;
                        return info.results[inv - 1];
                    };
                    auto r = vm.call(view, orig.env, {}, orig.tx.sender, orig.tx.target, orig.tx.method, orig.tx.args,
                        orig.tx.value, oracle);
                    if (r.status == ExecStatus::completed)
                        merge_writes(ws, body);
                    else
                        ws[orig.tx.sender].balance_add += static_cast<std::int64_t>(orig.tx.value);
                }
            }
            st.apply(ws);
        }
        height += 1;
    }
    out.state_hash = hash_state(height, st, locks, mgr.sessions());
    return out;
}
}  // namespace mpcevm
