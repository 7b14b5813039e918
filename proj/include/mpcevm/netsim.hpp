// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/engine.hpp"
#include "mpcevm/ledger.hpp"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

namespace mpcevm
{
struct TooManyFaults : std::runtime_error
{
    TooManyFaults() : std::runtime_error{"more faulty parties than the threshold allows"} {}
};

struct LivelockGuard : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct FaultSpec
{
    std::uint32_t party = 0;  // 0-based committee position
    FaultProfile profile;
};

enum class EventKind
{
    deliver_p2p,
    party_tick,
    produce_block,
    inject_fault,
};

const char* to_string(EventKind k) noexcept;

struct Event
{
    std::uint64_t tick = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::produce_block;
    SessionKey session;
    std::uint32_t party = 0;  // 1-based; the recipient for deliveries
    MpcMessage msg;
    FaultSpec fault;
};

struct NetConfig
{
    std::uint64_t block_interval = 10;
    std::uint64_t latency = 1;
    /// Overrides keyed by (from, to), 1-based.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> link_latency;
    std::size_t block_capacity = 1000;
    /// Contrast mode: while an MPC session is live, blocks carry only MPC traffic.
    bool sync_mpc = false;
    EngineConfig engine;
    std::uint64_t seed = 1;
};

/// Per-party secret inputs for a session that just became final.
using SecretSource = std::function<std::vector<std::vector<Word>>(const SessionStart&)>;

struct SessionRecord
{
    SessionKey key;
    Address contract;
    Word cid = 0;
    std::vector<Word> params;
    std::uint64_t started = 0;
    std::optional<std::uint64_t> ended;
    std::optional<std::vector<Word>> result;
};

struct BlockStat
{
    std::uint64_t height = 0;
    std::size_t regular_included = 0;
    std::size_t regular_committed = 0;
    std::size_t denied = 0;
    std::size_t mpc_txs = 0;
    std::size_t live_sessions = 0;
};

class Simulator
{
public:
    Simulator(Ledger& ledger, NetConfig config, SecretSource secrets);

    void schedule(Event e);
    /// Queues a create or regular transaction; its nonce is filled in at
    /// inclusion. Returns a ticket for looking up the receipt.
    std::uint64_t submit(Transaction tx);
    /// Height and receipt of a submitted transaction once it was included.
    const std::pair<std::uint64_t, Receipt>* receipt(std::uint64_t ticket) const;
    /// Throws TooManyFaults once more than t distinct parties would be faulty.
    void inject(const FaultSpec& fault, std::uint64_t at_tick = 0);

    /// Starts the block clock.
    void start();
    /// Processes events until `done` holds or the queue drains. Throws
    /// LivelockGuard if `tick_budget` ticks pass first.
    void run_until(const std::function<bool()>& done, std::uint64_t tick_budget);
    void run_blocks(std::uint64_t blocks);

    std::uint64_t now() const noexcept { return now_; }
    Ledger& ledger() noexcept { return ledger_; }
    const NetConfig& config() const noexcept { return config_; }

    /// Called after every committed block, before the next one is scheduled.
    void on_block(std::function<void(const CommittedBlock&)> hook) { hook_ = std::move(hook); }
    void set_trace(std::ostream* out) { trace_out_ = out; }
    Hash32 trace_digest() const noexcept { return trace_hash_; }
    std::uint64_t trace_events() const noexcept { return trace_count_; }

    const std::vector<BlockStat>& stats() const noexcept { return stats_; }
    const std::map<SessionKey, SessionRecord>& sessions() const noexcept { return records_; }
    std::size_t live_sessions() const noexcept { return runs_.size(); }
    std::size_t mempool_size() const noexcept { return mempool_.size(); }

private:
    struct Run
    {
        std::shared_ptr<SessionBoard> board;
        std::vector<std::unique_ptr<PartyEngine>> parties;
        std::vector<std::vector<MpcMessage>> outbox;
        std::vector<std::optional<std::vector<Word>>> attest;
    };

    struct Later
    {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
        }
    };

    void dispatch(const Event& e);
    void produce_block();
    void open_session(const SessionStart& s, std::uint64_t height);
    void party_tick(const SessionKey& key, std::uint32_t party);
    void tick_later(const SessionKey& key, std::uint32_t party);
    std::uint64_t latency(std::uint32_t from, std::uint32_t to) const;
    void trace(const nlohmann::json& line);

    Ledger& ledger_;
    NetConfig config_;
    SecretSource secrets_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t now_ = 0;
    std::uint64_t seq_ = 0;

    std::deque<std::pair<std::uint64_t, Transaction>> mempool_;
    std::uint64_t tickets_ = 0;
    std::map<std::uint64_t, std::pair<std::uint64_t, Receipt>> receipts_;
    std::map<SessionKey, Run> runs_;
    std::map<SessionKey, SessionRecord> records_;
    std::map<std::uint32_t, FaultProfile> faults_;
    std::set<std::uint32_t> planned_faults_;
    std::set<std::tuple<std::uint64_t, SessionKey, std::uint32_t>> ticks_pending_;
    std::map<std::pair<Word, std::vector<Word>>, std::shared_ptr<const Program>> programs_;

    std::function<void(const CommittedBlock&)> hook_;
    std::vector<BlockStat> stats_;
    std::ostream* trace_out_ = nullptr;
    Hash32 trace_hash_{};
    std::uint64_t trace_count_ = 0;
};
}  // namespace mpcevm
