// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/netsim.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mpcevm
{
struct ScenarioInvalid : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// A constructor or call argument: a number, or a reference resolved at
/// submission time ("@alice", "@party3", "@vote", "@committee", "#circuit").
using ArgRef = std::variant<Word, std::string>;

struct AccountSpec
{
    std::string name;
    Word balance = 0;
};

struct CircuitSpec
{
    std::string name;
    std::string builder;
    std::uint32_t param = 0;
};

struct ContractSpec
{
    std::string name;
    std::string fixture;
    std::string deployer;
    std::vector<ArgRef> args;
    Word value = 0;
    std::uint64_t block = 1;
};

struct TxSpec
{
    std::string label;
    std::uint64_t block = 1;
    std::string from;
    std::string to;
    std::string method;
    std::vector<ArgRef> args;
    Word value = 0;
    /// success, reverted, suspended or denied (reverted by a lock).
    std::optional<std::string> expect;
};

/// Re-submits an MPC-invoking call whenever the previous one has finished.
struct LoopSpec
{
    std::string from;
    std::string to;
    std::string method;
    std::vector<ArgRef> args;
    std::uint64_t from_block = 1;
    std::uint64_t to_block = 0;
};

struct SessionSpec
{
    std::string contract;
    std::string circuit;
    std::vector<std::vector<Word>> inputs;
    /// weighted_vote, max_bid, sum, products, cheater or none.
    std::string oracle = "none";
    Word min_deposit = 0;
    /// Serve the same inputs to every later session on the contract.
    bool repeat = false;
};

/// Plain transfers between generated user accounts.
struct WorkloadSpec
{
    std::uint64_t per_block = 0;
    std::uint64_t from_block = 1;
    std::uint64_t to_block = 0;
    std::uint32_t users = 20;
    Word max_amount = 100;
};

struct CheckSpec
{
    std::string label;
    std::string contract;
    Word slot = 0;
    /// A number, an account reference, "oracle:<i>" for entry i of the last
    /// result on the contract, or "oracle_party:<i>" for the party it names.
    ArgRef expect;
};

struct FaultEntry
{
    std::uint32_t party = 0;
    FaultProfile profile;
    std::uint64_t tick = 0;
};

struct Scenario
{
    std::string name;
    std::uint64_t seed = 1;
    std::uint32_t n = 4;
    unsigned t = 1;
    Word committee_balance = 1'000'000'000;
    std::uint64_t blocks = 50;
    /// Stop early once every session finished and no scripted work is left.
    bool until_idle = false;
    std::uint64_t block_interval = 10;
    std::uint64_t latency = 1;
    std::size_t capacity = 1000;
    std::size_t max_parallel_mults = 4;
    bool sync_mpc = false;
    std::uint64_t measure_from = 1;
    std::uint64_t measure_to = 0;

    std::vector<AccountSpec> accounts;
    std::vector<CircuitSpec> circuits;
    std::vector<ContractSpec> contracts;
    std::vector<TxSpec> txs;
    std::vector<LoopSpec> loops;
    std::vector<SessionSpec> sessions;
    WorkloadSpec workload;
    std::vector<CheckSpec> checks;
    std::vector<FaultEntry> faults;
};

Scenario parse_scenario(const std::string& text, const std::string& source = "scenario");
Scenario load_scenario(const std::filesystem::path& path);
void validate(const Scenario& s);

struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> latency;
    std::ostream* trace = nullptr;
};

/// Everything a run leaves behind; `report` is the deterministic summary.
struct RunOutcome
{
    nlohmann::json report;
    Hash32 state_hash{};
    Hash32 trace_digest{};
    bool oracle_pass = true;
    bool audit_pass = true;
    /// Workload transfers committed per measured block.
    std::vector<std::size_t> regular_series;
    std::vector<bool> live_series;
    std::vector<QueueEvent> queue_trace;
    std::vector<BlockRecord> history;
    std::vector<Address> committee;
    std::size_t capacity = 0;
    unsigned t = 0;

    int exit_code() const noexcept { return !audit_pass ? 2 : !oracle_pass ? 1 : 0; }
};

RunOutcome run_scenario(const Scenario& s, const RunOptions& options = {});

/// Percentage drop of mean regular commits per block from `baseline` to `other`.
double degradation(const RunOutcome& baseline, const RunOutcome& other);
double mean_regular(const RunOutcome& r);
}  // namespace mpcevm
