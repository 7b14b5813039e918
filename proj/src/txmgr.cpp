// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/txmgr.hpp"

#include "mpcevm/local_session.hpp"

#include <algorithm>

namespace mpcevm
{
const char* to_string(SessionStatus s) noexcept
{
    switch (s)
    {
    case SessionStatus::active:
        return "ACTIVE";
    case SessionStatus::resumable:
        return "RESUMABLE";
    case SessionStatus::finished:
        return "FINISHED";
    }
    return "?";
}

const char* to_string(QueueEvent::Kind k) noexcept
{
    switch (k)
    {
    case QueueEvent::Kind::enqueue:
        return "enqueue";
    case QueueEvent::Kind::admit:
        return "admit";
    case QueueEvent::Kind::retire:
        return "retire";
    case QueueEvent::Kind::purge:
        return "purge";
    }
    return "?";
}

std::uint32_t MpcInfo::position(Address a) const
{
    auto it = std::find(parties.begin(), parties.end(), a);
    return it == parties.end() ? 0 : static_cast<std::uint32_t>(it - parties.begin()) + 1;
}

void MpcInfo::reset_votes()
{
    accusations.clear();
    gate_ready.clear();
    gate_done.clear();
    result_attest.clear();
}

// ---------------------------------------------------------------------------

void GateQueue::note(QueueEvent::Kind k, const GateId& g, std::uint64_t height)
{
    trace_.push_back({k, g, height, running_.size(), waiting_.size()});
}

std::vector<GateId> GateQueue::fill(std::uint64_t height)
{
    std::vector<GateId> admitted;
    while (running_.size() < capacity_ && !waiting_.empty())
    {
        const GateId g = waiting_.front();
        waiting_.pop_front();
        running_.insert(g);
        note(QueueEvent::Kind::admit, g, height);
        admitted.push_back(g);
    }
    return admitted;
}

std::vector<GateId> GateQueue::enqueue(const GateId& g, std::uint64_t height)
{
    if (running_.contains(g) || std::find(waiting_.begin(), waiting_.end(), g) != waiting_.end())
        return {};
    waiting_.push_back(g);
    note(QueueEvent::Kind::enqueue, g, height);
    return fill(height);
}

std::vector<GateId> GateQueue::retire(const GateId& g, std::uint64_t height)
{
    if (running_.erase(g) == 0)
        return {};
    note(QueueEvent::Kind::retire, g, height);
    return fill(height);
}

std::vector<GateId> GateQueue::purge(const SessionKey& s, std::uint64_t height)
{
    auto mine = [&](const GateId& g) { return g.session == s; };
    std::vector<GateId> dropped;
    for (const auto& g : waiting_)
        if (mine(g))
            dropped.push_back(g);
    for (const auto& g : running_)
        if (mine(g))
            dropped.push_back(g);
    std::erase_if(waiting_, mine);
    std::erase_if(running_, mine);
    for (const auto& g : dropped)
        note(QueueEvent::Kind::purge, g, height);
    return fill(height);
}

// ---------------------------------------------------------------------------

MpcInfo& TxMgr::enter(const Hash32& tx, Address contract, Address sender, Word cid, std::vector<Address> parties,
    unsigned t, std::size_t output_count)
{
    auto [it, fresh] = infos_.try_emplace(tx);
    MpcInfo& info = it->second;
    if (fresh)
    {
        info.tx = tx;
        info.contract = contract;
        info.sender = sender;
    }
    // A re-invocation only touches the invocation bookkeeping and the new circuit.
    info.cid = cid;
    info.parties = std::move(parties);
    info.t = t;
    info.output_count = output_count;
    info.invocation_count += 1;
    info.status = SessionStatus::active;
    info.reset_votes();
    return info;
}

MpcInfo* TxMgr::find(const Hash32& tx)
{
    auto it = infos_.find(tx);
    return it == infos_.end() ? nullptr : &it->second;
}

const MpcInfo* TxMgr::find(const Hash32& tx) const
{
    auto it = infos_.find(tx);
    return it == infos_.end() ? nullptr : &it->second;
}

std::vector<GateId> TxMgr::conclude(MpcInfo& info, const std::vector<Word>& result, std::uint64_t height)
{
    info.results.push_back(result);
    info.status = SessionStatus::resumable;
    return queue_.purge(info.key(), height);
}

BroadcastEffect TxMgr::broadcast(const SessionKey& key, Address sender, const MpcMessage& msg, std::uint64_t height)
{
    MpcInfo* info = find(key.tx);
    if (!info)
        throw UnknownSession{};
    const std::uint32_t who = info->position(sender);
    if (who == 0)
        throw NotCommitteeMember{};
    BroadcastEffect fx;
    if (info->status != SessionStatus::active || key.invocation != info->invocation_count)
        return fx;

    const std::size_t gate_quorum = 2 * std::size_t{info->t} + 1;
    const std::size_t quorum = std::size_t{info->t} + 1;
    const GateId gate{key, msg.op};
    switch (msg.kind)
    {
    case MsgKind::ready:
    {
        auto& voters = info->gate_ready[msg.op];
        if (voters.insert(who).second && voters.size() == gate_quorum)
            for (const auto& g : queue_.enqueue(gate, height))
                fx.approvals.push_back(g);
        break;
    }
    case MsgKind::gate_done:
    {
        auto& voters = info->gate_done[msg.op];
        if (voters.insert(who).second && voters.size() == gate_quorum)
            for (const auto& g : queue_.retire(gate, height))
                fx.approvals.push_back(g);
        break;
    }
    case MsgKind::accuse:
    {
        if (msg.party < 1 || msg.party > info->parties.size())
            break;
        auto& accusers = info->accusations[msg.party];
        if (accusers.insert(who).second && accusers.size() == quorum)
        {
            fx.finish = cheater_result(info->output_count, msg.party - 1);
            fx.cheater = true;
        }
        break;
    }
    case MsgKind::result_attest:
    {
        Sha256 h;
        h.u64(msg.result.size());
        for (Word w : msg.result)
            h.u64(w);
        auto& a = info->result_attest[h.finish()];
        a.payload = msg.result;
        if (a.voters.insert(who).second && a.voters.size() == quorum)
            fx.finish = msg.result;
        break;
    }
    default:
        break;
    }
    if (fx.finish)
        for (const auto& g : conclude(*info, *fx.finish, height))
            fx.approvals.push_back(g);
    return fx;
}
}  // namespace mpcevm
