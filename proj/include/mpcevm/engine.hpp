// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/circuit.hpp"
#include "mpcevm/commit.hpp"
#include "mpcevm/sss.hpp"
#include "mpcevm/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mpcevm
{
/// One MPC invocation of one transaction.
struct SessionKey
{
    Hash32 tx{};
    std::uint32_t invocation = 0;

    friend auto operator<=>(const SessionKey&, const SessionKey&) = default;
};

std::string to_string(const SessionKey& key);

enum class MsgKind : std::uint8_t
{
    share_delivery,
    commitments,
    ready,
    gate_done,
    open_share,
    dispute,
    dispute_opening,
    accuse,
    result_attest,
};

const char* to_string(MsgKind kind) noexcept;

/// Party numbers in messages are 1-based share indices.
struct MpcMessage
{
    MsgKind kind = MsgKind::ready;
    std::uint32_t op = 0;
    std::uint32_t dealer = 0;
    /// Recipient (share_delivery), disputer (dispute, dispute_opening) or accused (accuse).
    std::uint32_t party = 0;
    FieldElement value;
    FieldElement randomness;
    std::vector<Commitment> commitments;
    std::vector<std::uint64_t> result;
};

enum class FaultBehavior
{
    inconsistent_dealing,
    corrupt_opening,
    forge_attestation,
    silent,
};

enum class FaultPhase
{
    input,
    multiplication,
    opening,
    attestation,
    always,
};

const char* to_string(FaultBehavior b) noexcept;
const char* to_string(FaultPhase p) noexcept;
FaultBehavior parse_fault_behavior(const std::string& s);
FaultPhase parse_fault_phase(const std::string& s);

struct FaultProfile
{
    FaultBehavior behavior = FaultBehavior::silent;
    FaultPhase activation = FaultPhase::always;

    bool affects(FaultBehavior b, FaultPhase action) const noexcept
    {
        return behavior == b && (activation == FaultPhase::always || activation == action);
    }
};

struct EngineConfig
{
    unsigned t = 1;
    /// Statistical masking bits in comparisons.
    unsigned kappa = 16;
    /// Blocks a party waits for a missing share after the dealer's commitments land.
    std::uint64_t share_timeout = 2;
    /// Blocks a dealer has to answer a dispute.
    std::uint64_t dispute_timeout = 2;
    /// Blocks after session start before a silent input owner is accused.
    std::uint64_t input_timeout = 3;
};

enum class OpKind : std::uint8_t
{
    input_secret,
    constant,
    linear,
    rand,
    mult,
    open,
    root_bit,
    bit_eq,
    bit_lt,
    mod_low,
};

const char* to_string(OpKind kind) noexcept;

struct Term
{
    std::uint32_t op = 0;
    FieldElement coeff;
};

/// Engine-level operation. Circuit gates expand into these; COMPARE becomes a
/// few hundred of them.
struct Op
{
    OpKind kind = OpKind::constant;
    bool is_public = false;
    std::uint32_t owner = 0;  // input_secret, 0-based
    std::uint32_t slot = 0;
    std::uint64_t bound = 0;
    FieldElement constant;
    std::vector<Term> terms;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t bit = 0;
    std::int32_t output_slot = -1;
    std::uint32_t gate = 0;
    /// Mult with at least one public operand; evaluated locally.
    bool scalar = false;

    /// Multiplication that needs the re-share protocol.
    bool needs_protocol() const noexcept { return kind == OpKind::mult && !scalar; }
};

struct Program
{
    std::vector<Op> ops;
    std::vector<std::uint32_t> outputs;
    std::vector<std::uint32_t> secret_shape;
    std::uint32_t n_parties = 0;
    std::uint64_t modulus = default_prime;
    unsigned bit_width = default_bit_width;
    unsigned kappa = 16;

    std::size_t count(OpKind kind) const;
    std::size_t protocol_mults() const;
};

/// Deterministic expansion; every party derives the same program.
Program compile_program(const Circuit& c, const std::vector<std::uint64_t>& public_inputs, unsigned kappa = 16,
    std::uint64_t modulus = default_prime);

struct DealingRecord
{
    std::vector<Commitment> coefficients;
    std::uint64_t height = 0;
};

struct DisputeState
{
    std::uint64_t raised = 0;
    std::optional<Opening> opening;
    std::optional<DisputeVerdict> verdict;
};

struct Offence
{
    std::uint32_t party = 0;
    std::string reason;
};

struct LinearForm
{
    std::vector<Term> shared;
    FieldElement constant;
};

/// Public, chain-derived view of one session. Every party reads the same
/// board; it holds nothing a party would keep private.
class SessionBoard
{
public:
    SessionBoard(std::shared_ptr<const Program> program, std::uint32_t n, EngineConfig config,
        std::uint64_t start_height, const CommitmentParams& params = default_commitment_params());

    const Program& program() const noexcept { return *program_; }
    std::uint32_t n() const noexcept { return n_; }
    unsigned t() const noexcept { return config_.t; }
    const EngineConfig& config() const noexcept { return config_; }
    const CommitmentParams& params() const noexcept { return params_; }
    std::uint64_t height() const noexcept { return height_; }

    void begin_block(std::uint64_t height);
    void approve(std::uint32_t op);
    void ingest(std::uint32_t sender, const MpcMessage& msg);
    void end_block();

    bool approved(std::uint32_t op) const { return approved_.contains(op); }
    const DealingRecord* dealing(std::uint32_t op, std::uint32_t dealer) const;
    const std::vector<std::uint32_t>* dealer_set(std::uint32_t op) const;
    const std::vector<FieldElement>* set_weights(std::uint32_t op) const;
    std::optional<FieldElement> public_value(std::uint32_t op) const;
    std::optional<LinearForm> resolve_linear(std::uint32_t op) const;
    const std::vector<Commitment>* wire_commitments(std::uint32_t op) const;
    std::optional<Commitment> party_commitment(std::uint32_t op, std::uint32_t party) const;
    const DisputeState* dispute(std::uint32_t op, std::uint32_t dealer, std::uint32_t disputer) const;

    const std::vector<Offence>& offences() const noexcept { return offences_; }
    /// Disputes raised in the current block: (op, dealer, disputer).
    const std::vector<std::array<std::uint32_t, 3>>& new_disputes() const noexcept { return new_disputes_; }
    std::optional<std::vector<std::uint64_t>> outputs() const;

    void finish() noexcept { finished_ = true; }
    bool finished() const noexcept { return finished_; }

private:
    static std::uint64_t key(std::uint32_t op, std::uint32_t dealer) noexcept
    {
        return (std::uint64_t{op} << 16) | dealer;
    }
    void offend(std::uint32_t party, std::string reason);
    void evaluate_public();
    void decide_sets();

    std::shared_ptr<const Program> program_;
    std::uint32_t n_;
    EngineConfig config_;
    const CommitmentParams& params_;
    std::uint64_t start_height_;
    std::uint64_t height_;
    bool finished_ = false;

    std::set<std::uint32_t> approved_;
    std::unordered_map<std::uint64_t, DealingRecord> dealings_;
    std::map<std::uint32_t, std::vector<std::uint32_t>> sets_;
    std::map<std::uint32_t, std::vector<FieldElement>> weights_;
    std::vector<std::optional<FieldElement>> public_;

    struct OpeningEntry
    {
        std::uint32_t opener;
        FieldElement value;
        FieldElement randomness;
        int state;  // 0 unchecked, 1 valid, -1 invalid
    };
    std::map<std::uint32_t, std::vector<OpeningEntry>> openings_;
    std::map<std::array<std::uint32_t, 3>, DisputeState> disputes_;
    std::set<std::uint32_t> silent_owner_reported_;

    std::vector<Offence> offences_;
    std::vector<std::array<std::uint32_t, 3>> new_disputes_;
    std::vector<std::uint32_t> undecided_;
    std::vector<std::uint32_t> public_pending_;

    mutable std::unordered_map<std::uint32_t, std::vector<Commitment>> commitment_memo_;
};

/// One committee member's executor for one session.
class PartyEngine
{
public:
    PartyEngine(std::uint32_t index, std::shared_ptr<SessionBoard> board, std::vector<std::uint64_t> secret_inputs,
        std::uint64_t seed);

    std::uint32_t index() const noexcept { return index_; }
    void set_fault(std::optional<FaultProfile> fault) { fault_ = fault; }
    const std::optional<FaultProfile>& fault() const noexcept { return fault_; }

    /// Deals inputs and random masks. Called once the session is final on chain.
    void start();
    void receive(const MpcMessage& share);
    /// Reacts to the board after a block was ingested.
    void on_block();
    void advance();

    std::vector<MpcMessage> take_broadcasts();
    std::vector<MpcMessage> take_p2p();
    std::optional<std::vector<std::uint64_t>> take_attestation();

    bool complete(std::uint32_t op) const { return done_[op] != 0; }
    std::optional<Share> share_of(std::uint32_t op) const;
    std::size_t pending() const noexcept { return pending_.size(); }
    const std::set<std::uint32_t>& accused() const noexcept { return accused_; }

private:
    struct Received
    {
        Share share;
        int state = 0;  // 0 unchecked, 1 valid, -1 invalid
    };

    bool try_op(std::uint32_t op);
    bool operands_ready(const Op& op) const;
    std::optional<Share> obtain(std::uint32_t op, std::uint32_t dealer);
    void deal_value(std::uint32_t op, const FieldElement& value, FaultPhase phase);
    bool suppressed(FaultPhase phase) const;
    void broadcast(MpcMessage msg, FaultPhase phase);

    std::uint32_t index_;
    std::shared_ptr<SessionBoard> board_;
    const Program& program_;
    std::vector<std::uint64_t> inputs_;
    Rng rng_;
    std::optional<FaultProfile> fault_;
    bool started_ = false;

    std::vector<std::uint8_t> done_;
    std::vector<FieldElement> share_value_;
    std::vector<FieldElement> share_rand_;
    std::vector<std::uint32_t> pending_;

    std::unordered_map<std::uint64_t, Received> received_;
    std::map<std::uint32_t, std::vector<Share>> sent_;  // what this party actually delivered, by op
    std::set<std::uint32_t> dealt_, ready_sent_, done_sent_, opened_;
    std::set<std::uint64_t> disputed_;
    std::set<std::uint32_t> accused_;
    bool attested_ = false;

    std::vector<MpcMessage> broadcasts_;
    std::vector<MpcMessage> p2p_;
    std::optional<std::vector<std::uint64_t>> attestation_;
};
}  // namespace mpcevm
