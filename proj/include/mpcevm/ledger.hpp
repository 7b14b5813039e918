// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/circuit.hpp"
#include "mpcevm/engine.hpp"
#include "mpcevm/state.hpp"
#include "mpcevm/txmgr.hpp"
#include "mpcevm/vm.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mpcevm
{
enum class TxKind : std::uint8_t
{
    create,
    regular,
    mpc_message,
    mpc_ret,
};

const char* to_string(TxKind k) noexcept;

struct Transaction
{
    TxKind kind = TxKind::regular;
    Address sender;
    std::uint64_t nonce = 0;
    Word gas_limit = 0;
    Word value = 0;
    /// create: fixture to deploy; regular: target and method.
    std::string fixture;
    Address target;
    std::string method;
    std::vector<Word> args;
    /// mpc_message / mpc_ret
    SessionKey session;
    std::vector<MpcMessage> messages;
};

/// Length-prefixed binary encoding with a kind tag; the tx hash is its digest.
std::string encode(const Transaction& tx);
Hash32 tx_hash(const Transaction& tx);

enum class TxStatus
{
    success,
    reverted,
    suspended,
    invalid,
};

const char* to_string(TxStatus s) noexcept;

struct Receipt
{
    Hash32 tx_hash{};
    TxKind kind = TxKind::regular;
    TxStatus status = TxStatus::success;
    Word gas_used = 0;
    Word ret = 0;
    VmError error = VmError::none;
    std::string detail;
    bool denied_by_lock = false;
    std::vector<LogEvent> events;
    /// createTx: the deployed address.
    Address created;
    /// This transaction carried a quorum that resumed a suspended one.
    std::optional<Hash32> resumed;
    /// The resumed meta-transaction ran to its end here (completed or reverted).
    std::optional<Hash32> meta_finished;
    bool meta_reverted = false;
};

nlohmann::json to_json(const Receipt& r);

/// An MPC execution request, released to the committee once its block commits.
struct SessionStart
{
    SessionKey key;
    Word cid = 0;
    std::shared_ptr<const Circuit> circuit;
    std::vector<Word> params;
    std::vector<Address> parties;
    Address contract;
};

/// A committed broadcast as the committee sees it.
struct CommittedMessage
{
    SessionKey key;
    std::uint32_t sender = 0;  // 1-based committee position
    MpcMessage msg;
};

struct BlockEvents
{
    std::vector<SessionStart> started;
    std::vector<GateId> approvals;
    std::vector<CommittedMessage> messages;
    std::vector<SessionKey> ended;
};

struct CommittedBlock
{
    std::uint64_t height = 0;
    Word timestamp = 0;
    std::vector<Receipt> receipts;
    Hash32 state_hash{};
    BlockEvents events;
};

struct LedgerConfig
{
    std::vector<Address> committee;
    unsigned t = 1;
    std::size_t max_parallel_mults = 4;
    Word base_gas = 21;
    Word genesis_time = 1'700'000'000;
    Word block_time = 600;
    VmConfig vm;
};

/// The suspended part of a meta-transaction, keyed by its locked contract.
struct SavedMpcState
{
    Hash32 tx{};
    Address sender;
    Word value = 0;
    Continuation cont;
    WriteSet body;
    std::uint32_t invocation = 0;
};

struct AuditEntry
{
    std::uint64_t height = 0;
    Hash32 tx{};
    Address address;
    AccessKind kind = AccessKind::read;
};

/// What serial replay needs about one committed transaction.
struct TxRecord
{
    Transaction tx;
    Receipt receipt;
    TxEnv env;
};

struct BlockRecord
{
    std::vector<TxRecord> txs;
};

class Ledger
{
public:
    Ledger(LedgerConfig config, std::shared_ptr<CircuitRegistry> circuits, FixtureResolver fixtures);

    WorldState& state() noexcept { return state_; }
    const WorldState& state() const noexcept { return state_; }
    const LedgerConfig& config() const noexcept { return config_; }
    const CircuitRegistry& circuits() const noexcept { return *circuits_; }
    const TxMgr& txmgr() const noexcept { return txmgr_; }

    std::uint64_t height() const noexcept { return height_; }
    /// Timestamp of the block being built.
    Word pending_timestamp() const noexcept { return config_.genesis_time + (height_ + 1) * config_.block_time; }

    std::set<Address> locks() const;
    const std::map<Address, SavedMpcState>& saved() const noexcept { return saved_; }

    /// Applies one transaction to the block being built.
    Receipt apply(const Transaction& tx);
    CommittedBlock commit_block();

    Hash32 state_hash() const;

    /// Accesses to locked contracts outside their own resumption.
    const std::vector<AuditEntry>& audit_violations() const noexcept { return violations_; }
    std::uint64_t audited_accesses() const noexcept { return audited_; }

    const std::vector<BlockRecord>& history() const noexcept { return history_; }

private:
    Receipt apply_create(const Transaction& tx, const Hash32& h, const TxEnv& env);
    Receipt apply_regular(const Transaction& tx, const Hash32& h, const TxEnv& env);
    Receipt apply_mpc(const Transaction& tx, const Hash32& h);

    /// Handles an enter_mpc outcome: registers the session, or returns why it was refused.
    std::optional<std::string> start_session(const Hash32& tx, Address sender, const ExecResult& r);
    void finish_meta(MpcInfo& info, const std::vector<Word>& result, WriteSet& ready, Receipt& rc);

    AccessHook hook(const Hash32& tx);
    void charge(WriteSet& ws, Address who, Word gas) const;

    LedgerConfig config_;
    std::shared_ptr<CircuitRegistry> circuits_;
    FixtureResolver fixtures_;
    Vm vm_;
    WorldState state_;
    TxMgr txmgr_;
    std::uint64_t height_ = 0;

    std::map<Address, SavedMpcState> saved_;
    std::optional<Address> resuming_;
    BlockEvents pending_events_;
    std::vector<Receipt> block_receipts_;
    BlockRecord block_record_;
    std::vector<BlockRecord> history_;

    std::vector<AuditEntry> violations_;
    std::uint64_t audited_ = 0;
};

/// Re-executes a committed history serially: every MPC meta-transaction runs
/// atomically at the position where it finished, with its recorded results,
/// and every reverted or MPC-plumbing transaction only pays its charges.
struct SerialReplay
{
    Hash32 state_hash{};
    WorldState state;
};

SerialReplay serial_replay(const LedgerConfig& config, std::shared_ptr<CircuitRegistry> circuits,
    FixtureResolver fixtures, const WorldState& genesis, const Ledger& committed);
}  // namespace mpcevm
