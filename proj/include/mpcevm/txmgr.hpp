// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/engine.hpp"
#include "mpcevm/types.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpcevm
{
struct NotCommitteeMember : std::runtime_error
{
    NotCommitteeMember() : std::runtime_error{"sender is not in the session committee"} {}
};

struct UnknownSession : std::runtime_error
{
    UnknownSession() : std::runtime_error{"no such MPC session"} {}
};

enum class SessionStatus
{
    active,
    resumable,
    finished,
};

const char* to_string(SessionStatus s) noexcept;

/// Manager-side record of one MPC transaction. Vote maps hold committee
/// positions (1-based) and describe the current invocation only.
struct MpcInfo
{
    Hash32 tx{};
    Address contract;
    Address sender;
    Word cid = 0;
    std::vector<Address> parties;
    unsigned t = 1;
    std::size_t output_count = 0;
    std::uint32_t invocation_count = 0;
    SessionStatus status = SessionStatus::active;

    std::map<std::uint32_t, std::set<std::uint32_t>> accusations;
    std::map<std::uint32_t, std::set<std::uint32_t>> gate_ready;
    std::map<std::uint32_t, std::set<std::uint32_t>> gate_done;
    struct Attestation
    {
        std::set<std::uint32_t> voters;
        std::vector<Word> payload;
    };
    std::map<Hash32, Attestation> result_attest;

    /// Results that reached quorum, one per finished invocation.
    std::vector<std::vector<Word>> results;

    SessionKey key() const { return {tx, invocation_count}; }
    /// 1-based committee position, 0 for outsiders.
    std::uint32_t position(Address a) const;
    void reset_votes();
};

struct GateId
{
    SessionKey session;
    std::uint32_t op = 0;

    friend auto operator<=>(const GateId&, const GateId&) = default;
};

struct QueueEvent
{
    enum class Kind
    {
        enqueue,
        admit,
        retire,
        purge,
    };
    Kind kind = Kind::enqueue;
    GateId gate;
    std::uint64_t height = 0;
    std::size_t running = 0;
    std::size_t waiting = 0;
};

const char* to_string(QueueEvent::Kind k) noexcept;

/// Global FIFO of ready multiplication gates with a bound on how many run at once.
class GateQueue
{
public:
    explicit GateQueue(std::size_t capacity = 4) : capacity_{capacity} {}

    /// Both return the gates admitted as a consequence.
    std::vector<GateId> enqueue(const GateId& g, std::uint64_t height);
    std::vector<GateId> retire(const GateId& g, std::uint64_t height);
    /// Drops everything belonging to the session, running or waiting.
    std::vector<GateId> purge(const SessionKey& s, std::uint64_t height);

    bool running(const GateId& g) const { return running_.contains(g); }
    std::size_t running_count() const noexcept { return running_.size(); }
    std::size_t waiting_count() const noexcept { return waiting_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    const std::vector<QueueEvent>& trace() const noexcept { return trace_; }

private:
    std::vector<GateId> fill(std::uint64_t height);
    void note(QueueEvent::Kind k, const GateId& g, std::uint64_t height);

    std::size_t capacity_;
    std::deque<GateId> waiting_;
    std::set<GateId> running_;
    std::vector<QueueEvent> trace_;
};

/// What a broadcast changed at the manager level.
struct BroadcastEffect
{
    std::vector<GateId> approvals;
    /// Set when a quorum decided the invocation: cheater or attested result.
    std::optional<std::vector<Word>> finish;
    bool cheater = false;
};

class TxMgr
{
public:
    explicit TxMgr(std::size_t max_parallel_mults = 4) : queue_{max_parallel_mults} {}

    /// First enter_mpc of a transaction creates the record; later ones bump the invocation.
    MpcInfo& enter(const Hash32& tx, Address contract, Address sender, Word cid, std::vector<Address> parties,
        unsigned t, std::size_t output_count);

    MpcInfo* find(const Hash32& tx);
    const MpcInfo* find(const Hash32& tx) const;
    const std::map<Hash32, MpcInfo>& sessions() const noexcept { return infos_; }

    /// Routes one committee broadcast. Throws NotCommitteeMember / UnknownSession.
    /// Messages for finished sessions or stale invocations have no effect.
    BroadcastEffect broadcast(const SessionKey& key, Address sender, const MpcMessage& msg, std::uint64_t height);

    /// Marks the invocation decided and clears its gates from the queue;
    /// returns gates of other sessions admitted into the freed slots.
    std::vector<GateId> conclude(MpcInfo& info, const std::vector<Word>& result, std::uint64_t height);
    void mark_finished(MpcInfo& info) { info.status = SessionStatus::finished; }

    GateQueue& queue() noexcept { return queue_; }
    const GateQueue& queue() const noexcept { return queue_; }

private:
    std::map<Hash32, MpcInfo> infos_;
    GateQueue queue_;
};
}  // namespace mpcevm
