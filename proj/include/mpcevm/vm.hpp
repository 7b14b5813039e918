// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/state.hpp"
#include "mpcevm/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mpcevm
{
enum class Opcode : std::uint8_t
{
    push,
    pop,
    dup,
    swap,
    loadl,
    storel,
    sload,
    sstore,
    add,
    sub,
    mul,
    div,
    mod,
    lt,
    eq,
    jmp,
    jz,
    jnz,
    call,
    delegatecall,
    balance,
    transfer,
    create,
    selfdestruct,
    enter_mpc,
    ret,
    revert,
    timestamp,
    caller,
    origin,
    address,
    callvalue,
    argc,
    arg,
    hash,
    newarr,
    aload,
    astore,
    alen,
    log,
};

const char* to_string(Opcode op) noexcept;

struct Instr
{
    Opcode op = Opcode::push;
    Word imm = 0;
    bool has_imm = false;
    /// Slots, counts or jump target, depending on the opcode.
    std::uint32_t a = 0, b = 0, c = 0, d = 0;
    bool has_d = false;
    /// Method or fixture name.
    std::string name;
    std::uint32_t line = 0;
};

struct Method
{
    std::string name;
    std::vector<Instr> code;
    std::uint32_t locals = 0;
};

struct ContractCode
{
    std::string name;
    std::map<std::string, Method> methods;
    std::map<std::string, Word> symbols;

    const Method* find(const std::string& method) const;
};

struct AssemblyError : std::runtime_error
{
    AssemblyError(const std::string& name, std::uint32_t line, const std::string& what)
      : std::runtime_error{name + ":" + std::to_string(line) + ": " + what}
    {}
};

/// Line-oriented assembly: `.storage name slot`, `.method name` ... `.end`,
/// `label:` lines and one instruction per line; `;` starts a comment.
ContractCode assemble(std::string_view source, const std::string& name);

/// HASH opcode: first 8 bytes of SHA-256 over the two words.
Word hash_words(Word a, Word b);

enum class VmError
{
    none,
    out_of_gas,
    stack_underflow,
    bad_jump,
    access_violation,
    explicit_revert,
    not_eoa,
    insufficient_balance,
    no_code,
    unknown_method,
    bad_operand,
    call_depth,
    mpc_rejected,
};

const char* to_string(VmError e) noexcept;

struct TxEnv
{
    Address origin;
    Word timestamp = 0;
    std::uint64_t height = 0;
    Word gas_limit = 0;
};

struct VmConfig
{
    Word enter_mpc_gas = 1000;
    unsigned max_depth = 64;
};

struct Local
{
    Word word = 0;
    std::vector<Word> array;
    bool is_array = false;
};

struct Frame
{
    Address self;
    Address caller;
    Word value = 0;
    std::shared_ptr<const ContractCode> code;
    std::string method;
    std::uint32_t pc = 0;
    std::vector<Word> stack;
    std::vector<Local> locals;
    std::vector<Word> args;
};

struct LogEvent
{
    Address address;
    std::vector<Word> data;
};

struct MpcRequest
{
    Word cid = 0;
    std::vector<Word> params;
    std::vector<Address> parties;
};

/// Everything needed to continue a suspended execution.
struct Continuation
{
    std::vector<Frame> frames;
    std::set<Address> accessed;
    Word gas_used = 0;
    std::vector<LogEvent> events;
    std::uint32_t result_slot = 0;
    Address contract;
    TxEnv env;
    /// Set once the execution has passed an enter_mpc; narrows what it may touch.
    bool confined = false;
    std::uint32_t invocations = 0;
};

enum class ExecStatus
{
    completed,
    reverted,
    suspended,
};

const char* to_string(ExecStatus s) noexcept;

struct ExecResult
{
    ExecStatus status = ExecStatus::completed;
    Word ret = 0;
    VmError error = VmError::none;
    std::string detail;
    Word gas_used = 0;
    std::vector<LogEvent> events;
    std::optional<MpcRequest> mpc;
    std::shared_ptr<Continuation> cont;
    std::set<Address> accessed;
    /// The revert came from touching a locked contract.
    bool denied_by_lock = false;
};

using FixtureResolver = std::function<std::shared_ptr<const ContractCode>(const std::string&)>;
/// Synchronous MPC results for serial replay; nullopt means suspend as usual.
using MpcOracle = std::function<std::optional<std::vector<Word>>(const MpcRequest&, std::uint32_t invocation)>;

class Vm
{
public:
    explicit Vm(VmConfig config = {}, FixtureResolver fixtures = {});

    /// The entry call's value is moved by the caller before this runs.
    ExecResult call(StateView& view, const TxEnv& env, const std::set<Address>& locks, Address sender, Address target,
        const std::string& method, std::vector<Word> args, Word value, const MpcOracle& oracle = {}) const;

    /// Runs `constructor` (if present) of code already deployed at `at`.
    ExecResult construct(StateView& view, const TxEnv& env, const std::set<Address>& locks, Address sender,
        Address at, std::vector<Word> args, Word value, const MpcOracle& oracle = {}) const;

    /// Continues after enter_mpc with the attested result in the result slot.
    ExecResult resume(StateView& view, Continuation cont, const std::vector<Word>& result,
        const std::set<Address>& locks, const MpcOracle& oracle = {}) const;

    const VmConfig& config() const noexcept { return config_; }

private:
    ExecResult run(StateView& view, Continuation& ctx, const std::set<Address>& locks, const MpcOracle& oracle) const;

    VmConfig config_;
    FixtureResolver fixtures_;
};
}  // namespace mpcevm
