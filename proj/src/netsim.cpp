// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/netsim.hpp"

#include "mpcevm/rng.hpp"

#include <cstring>

namespace mpcevm
{
const char* to_string(EventKind k) noexcept
{
    switch (k)
    {
    case EventKind::deliver_p2p: return "DeliverP2P";
    case EventKind::party_tick: return "PartyTick";
    case EventKind::produce_block: return "ProduceBlock";
    case EventKind::inject_fault: return "InjectFault";
    }
    return "?";
}

namespace
{
std::string short_key(const SessionKey& k)
{
    return to_hex(k.tx).substr(0, 12) + "/" + std::to_string(k.invocation);
}

std::uint64_t session_seed(std::uint64_t base, const SessionKey& k)
{
    std::uint64_t head = 0;
    std::memcpy(&head, k.tx.data(), sizeof head);
    return derive_seed(derive_seed(base, head), k.invocation);
}
}  // namespace

Simulator::Simulator(Ledger& ledger, NetConfig config, SecretSource secrets)
    : ledger_{ledger}, config_{std::move(config)}, secrets_{std::move(secrets)}
{
    config_.engine.t = ledger_.config().t;
}

void Simulator::schedule(Event e)
{
    e.seq = seq_++;
    queue_.push(std::move(e));
}

std::uint64_t Simulator::submit(Transaction tx)
{
    mempool_.emplace_back(++tickets_, std::move(tx));
    return tickets_;
}

const std::pair<std::uint64_t, Receipt>* Simulator::receipt(std::uint64_t ticket) const
{
    auto it = receipts_.find(ticket);
    return it == receipts_.end() ? nullptr : &it->second;
}

void Simulator::inject(const FaultSpec& fault, std::uint64_t at_tick)
{
    if (fault.party >= ledger_.config().committee.size())
        throw std::out_of_range{"fault names a party outside the committee"};
    auto planned = planned_faults_;
    planned.insert(fault.party);
    if (planned.size() > ledger_.config().t)
        throw TooManyFaults{};
    planned_faults_ = std::move(planned);
    Event e;
    e.tick = std::max(at_tick, now_);
    e.kind = EventKind::inject_fault;
    e.fault = fault;
    schedule(std::move(e));
}

void Simulator::start()
{
    Event e;
    e.tick = now_ + config_.block_interval;
    e.kind = EventKind::produce_block;
    schedule(std::move(e));
}

void Simulator::run_until(const std::function<bool()>& done, std::uint64_t tick_budget)
{
    const std::uint64_t limit = now_ + tick_budget;
    while (!done() && !queue_.empty())
    {
        if (queue_.top().tick > limit)
            throw LivelockGuard{"no completion within " + std::to_string(tick_budget) + " ticks"};
        Event e = queue_.top();
        queue_.pop();
        now_ = e.tick;
        dispatch(e);
    }
}

void Simulator::run_blocks(std::uint64_t blocks)
{
    const std::uint64_t target = ledger_.height() + blocks;
    run_until([&] { return ledger_.height() >= target; }, (blocks + 1) * config_.block_interval);
}

void Simulator::dispatch(const Event& e)
{
    switch (e.kind)
    {
    case EventKind::deliver_p2p:
    {
        auto it = runs_.find(e.session);
        if (it == runs_.end())
            return;
        trace({{"tick", e.tick}, {"seq", e.seq}, {"kind", to_string(e.kind)}, {"session", short_key(e.session)},
            {"from", e.msg.dealer}, {"to", e.party}, {"op", e.msg.op}});
        it->second.parties[e.party - 1]->receive(e.msg);
        tick_later(e.session, e.party);
        break;
    }
    case EventKind::party_tick:
        ticks_pending_.erase({e.tick, e.session, e.party});
        trace({{"tick", e.tick}, {"seq", e.seq}, {"kind", to_string(e.kind)}, {"session", short_key(e.session)},
            {"party", e.party}});
        party_tick(e.session, e.party);
        break;
    case EventKind::produce_block:
        produce_block();
        break;
    case EventKind::inject_fault:
        trace({{"tick", e.tick}, {"seq", e.seq}, {"kind", to_string(e.kind)}, {"party", e.fault.party},
            {"behavior", to_string(e.fault.profile.behavior)}, {"activation", to_string(e.fault.profile.activation)}});
        faults_[e.fault.party] = e.fault.profile;
        for (auto& [key, run] : runs_)
            run.parties[e.fault.party]->set_fault(e.fault.profile);
        break;
    }
}

void Simulator::tick_later(const SessionKey& key, std::uint32_t party)
{
    if (!ticks_pending_.insert({now_, key, party}).second)
        return;
    Event e;
    e.tick = now_;
    e.kind = EventKind::party_tick;
    e.session = key;
    e.party = party;
    schedule(std::move(e));
}

std::uint64_t Simulator::latency(std::uint32_t from, std::uint32_t to) const
{
    auto it = config_.link_latency.find({from, to});
    return it == config_.link_latency.end() ? config_.latency : it->second;
}

void Simulator::party_tick(const SessionKey& key, std::uint32_t party)
{
    auto it = runs_.find(key);
    if (it == runs_.end())
        return;
    Run& run = it->second;
    PartyEngine& p = *run.parties[party - 1];
    p.advance();
    for (auto& m : p.take_p2p())
    {
        Event e;
        e.tick = now_ + latency(party, m.party);
        e.kind = EventKind::deliver_p2p;
        e.session = key;
        e.party = m.party;
        e.msg = std::move(m);
        schedule(std::move(e));
    }
    for (auto& m : p.take_broadcasts())
        run.outbox[party - 1].push_back(std::move(m));
    if (auto a = p.take_attestation())
        run.attest[party - 1] = std::move(a);
}

void Simulator::produce_block()
{
    const auto& committee = ledger_.config().committee;
    std::vector<Transaction> txs;
    // Committee broadcasts go first: one message tx per party and session, plus
    // a separate result tx for an attestation.
    for (auto& [key, run] : runs_)
        for (std::uint32_t i = 0; i < run.parties.size(); ++i)
        {
            auto make = [&](TxKind kind) {
                Transaction t;
                t.kind = kind;
                t.sender = committee[i];
                t.gas_limit = ledger_.config().base_gas;
                t.session = key;
                return t;
            };
            if (!run.outbox[i].empty())
            {
                Transaction t = make(TxKind::mpc_message);
                t.messages = std::move(run.outbox[i]);
                run.outbox[i].clear();
                txs.push_back(std::move(t));
            }
            if (run.attest[i])
            {
                Transaction t = make(TxKind::mpc_ret);
                t.messages.push_back({MsgKind::result_attest, 0, 0, 0, {}, {}, {}, std::move(*run.attest[i])});
                run.attest[i].reset();
                txs.push_back(std::move(t));
            }
        }
    const std::size_t mpc_txs = txs.size();
    std::vector<std::uint64_t> tickets(mpc_txs, 0);
    const bool stalled = config_.sync_mpc && (!runs_.empty() || !ledger_.locks().empty());
    while (!stalled && txs.size() < config_.block_capacity && !mempool_.empty())
    {
        tickets.push_back(mempool_.front().first);
        txs.push_back(std::move(mempool_.front().second));
        mempool_.pop_front();
    }

    BlockStat stat;
    stat.mpc_txs = mpc_txs;
    stat.live_sessions = runs_.size();
    std::vector<std::pair<std::uint64_t, Receipt>> landed;
    for (std::size_t k = 0; k < txs.size(); ++k)
    {
        Transaction& t = txs[k];
        const Account* acc = ledger_.state().find(t.sender);
        t.nonce = acc ? acc->nonce : 0;
        const Receipt rc = ledger_.apply(t);
        if (tickets[k])
            landed.emplace_back(tickets[k], rc);
        if (t.kind == TxKind::regular || t.kind == TxKind::create)
        {
            ++stat.regular_included;
            stat.regular_committed += rc.status == TxStatus::success || rc.status == TxStatus::suspended;
            stat.denied += rc.denied_by_lock;
        }
    }
    CommittedBlock block = ledger_.commit_block();
    stat.height = block.height;
    for (auto& [ticket, rc] : landed)
        receipts_[ticket] = {block.height, std::move(rc)};

    for (const auto& key : block.events.ended)
    {
        auto it = runs_.find(key);
        if (it != runs_.end())
        {
            it->second.board->finish();
            runs_.erase(it);
        }
        auto& rec = records_[key];
        rec.ended = block.height;
        if (const MpcInfo* info = ledger_.txmgr().find(key.tx); info && key.invocation <= info->results.size())
            rec.result = info->results[key.invocation - 1];
    }

    // Sessions that were already live see this block's traffic.
    for (auto& [key, run] : runs_)
    {
        run.board->begin_block(block.height);
        for (const auto& m : block.events.messages)
            if (m.key == key)
                run.board->ingest(m.sender, m.msg);
        for (const auto& g : block.events.approvals)
            if (g.session == key)
                run.board->approve(g.op);
        run.board->end_block();
        for (std::uint32_t i = 0; i < run.parties.size(); ++i)
        {
            run.parties[i]->on_block();
            tick_later(key, i + 1);
        }
    }
    for (const auto& s : block.events.started)
        open_session(s, block.height);

    stats_.push_back(stat);
    nlohmann::json line{{"tick", now_}, {"kind", to_string(EventKind::produce_block)}, {"height", block.height},
        {"txs", txs.size()}, {"mpc_txs", stat.mpc_txs}, {"regular_committed", stat.regular_committed},
        {"denied", stat.denied}, {"started", block.events.started.size()}, {"ended", block.events.ended.size()},
        {"approvals", block.events.approvals.size()}, {"state_hash", to_hex(block.state_hash)}};
    trace(line);

    if (hook_)
        hook_(block);
    Event next;
    next.tick = now_ + config_.block_interval;
    next.kind = EventKind::produce_block;
    schedule(std::move(next));
}

void Simulator::open_session(const SessionStart& s, std::uint64_t height)
{
    auto& program = programs_[{s.cid, s.params}];
    if (!program)
        program = std::make_shared<const Program>(compile_program(*s.circuit, s.params, config_.engine.kappa));
    const auto n = static_cast<std::uint32_t>(s.parties.size());
    auto secrets = secrets_ ? secrets_(s) : std::vector<std::vector<Word>>{};
    secrets.resize(n);

    Run run;
    run.board = std::make_shared<SessionBoard>(program, n, config_.engine, height);
    const std::uint64_t seed = session_seed(config_.seed, s.key);
    for (std::uint32_t i = 0; i < n; ++i)
    {
        run.parties.push_back(std::make_unique<PartyEngine>(i + 1, run.board, secrets[i], derive_seed(seed, i + 1)));
        if (auto f = faults_.find(i); f != faults_.end())
            run.parties.back()->set_fault(f->second);
    }
    run.outbox.resize(n);
    run.attest.resize(n);
    auto& rec = records_[s.key];
    rec.key = s.key;
    rec.contract = s.contract;
    rec.cid = s.cid;
    rec.params = s.params;
    rec.started = height;

    auto& live = runs_[s.key] = std::move(run);
    for (std::uint32_t i = 0; i < n; ++i)
    {
        live.parties[i]->start();
        tick_later(s.key, i + 1);
    }
    trace({{"tick", now_}, {"kind", "SessionStart"}, {"session", short_key(s.key)}, {"cid", s.cid},
        {"height", height}, {"ops", program->ops.size()}});
}

void Simulator::trace(const nlohmann::json& line)
{
    const std::string text = line.dump();
    trace_hash_ = Sha256{}.hash(trace_hash_).str(text).finish();
    ++trace_count_;
    if (trace_out_)
        *trace_out_ << text << '\n';
}
}  // namespace mpcevm
