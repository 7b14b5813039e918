// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/vm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

namespace mpcevm
{
namespace
{
struct OpInfo
{
    Opcode op;
    const char* name;
};

constexpr std::array<OpInfo, 40> op_table{{
    {Opcode::push, "PUSH"},
    {Opcode::pop, "POP"},
    {Opcode::dup, "DUP"},
    {Opcode::swap, "SWAP"},
    {Opcode::loadl, "LOADL"},
    {Opcode::storel, "STOREL"},
    {Opcode::sload, "SLOAD"},
    {Opcode::sstore, "SSTORE"},
    {Opcode::add, "ADD"},
    {Opcode::sub, "SUB"},
    {Opcode::mul, "MUL"},
    {Opcode::div, "DIV"},
    {Opcode::mod, "MOD"},
    {Opcode::lt, "LT"},
    {Opcode::eq, "EQ"},
    {Opcode::jmp, "JMP"},
    {Opcode::jz, "JZ"},
    {Opcode::jnz, "JNZ"},
    {Opcode::call, "CALL"},
    {Opcode::delegatecall, "DELEGATECALL"},
    {Opcode::balance, "BALANCE"},
    {Opcode::transfer, "TRANSFER"},
    {Opcode::create, "CREATE"},
    {Opcode::selfdestruct, "SELFDESTRUCT"},
    {Opcode::enter_mpc, "ENTER_MPC"},
    {Opcode::ret, "RETURN"},
    {Opcode::revert, "REVERT"},
    {Opcode::timestamp, "TIMESTAMP"},
    {Opcode::caller, "CALLER"},
    {Opcode::origin, "ORIGIN"},
    {Opcode::address, "ADDRESS"},
    {Opcode::callvalue, "CALLVALUE"},
    {Opcode::argc, "ARGC"},
    {Opcode::arg, "ARG"},
    {Opcode::hash, "HASH"},
    {Opcode::newarr, "NEWARR"},
    {Opcode::aload, "ALOAD"},
    {Opcode::astore, "ASTORE"},
    {Opcode::alen, "ALEN"},
    {Opcode::log, "LOG"},
}};

std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream in{std::string{line}};
    for (std::string tok; in >> tok;)
        out.push_back(tok);
    return out;
}

std::optional<Word> parse_number(const std::string& s)
{
    Word v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
    {
        first += 2;
        base = 16;
    }
    auto [p, ec] = std::from_chars(first, last, v, base);
    if (ec != std::errc{} || p != last)
        return std::nullopt;
    return v;
}
}  // namespace

const char* to_string(Opcode op) noexcept
{
    for (const auto& e : op_table)
        if (e.op == op)
            return e.name;
    return "?";
}

const char* to_string(VmError e) noexcept
{
    switch (e)
    {
    case VmError::none:
        return "none";
    case VmError::out_of_gas:
        return "OutOfGas";
    case VmError::stack_underflow:
        return "StackUnderflow";
    case VmError::bad_jump:
        return "BadJump";
    case VmError::access_violation:
        return "AccessViolation";
    case VmError::explicit_revert:
        return "ExplicitRevert";
    case VmError::not_eoa:
        return "NotEOA";
    case VmError::insufficient_balance:
        return "InsufficientBalance";
    case VmError::no_code:
        return "NoCode";
    case VmError::unknown_method:
        return "UnknownMethod";
    case VmError::bad_operand:
        return "BadOperand";
    case VmError::call_depth:
        return "CallDepth";
    case VmError::mpc_rejected:
        return "MpcRejected";
    }
    return "?";
}

const char* to_string(ExecStatus s) noexcept
{
    switch (s)
    {
    case ExecStatus::completed:
        return "completed";
    case ExecStatus::reverted:
        return "reverted";
    case ExecStatus::suspended:
        return "suspended";
    }
    return "?";
}

const Method* ContractCode::find(const std::string& method) const
{
    auto it = methods.find(method);
    return it == methods.end() ? nullptr : &it->second;
}

Word hash_words(Word a, Word b)
{
    Sha256 h;
    h.u64(a).u64(b);
    const Hash32 d = h.finish();
    Word out = 0;
    for (int i = 0; i < 8; ++i)
        out = (out << 8) | d[i];
    return out;
}

ContractCode assemble(std::string_view source, const std::string& name)
{
    ContractCode code;
    code.name = name;
    Method* current = nullptr;
    std::map<std::string, std::uint32_t> labels;
    std::vector<std::pair<std::size_t, std::string>> fixups;  // instr index, label

    auto finish_method = [&](std::uint32_t line) {
        for (const auto& [idx, label] : fixups)
        {
            auto it = labels.find(label);
            if (it == labels.end())
                throw AssemblyError{name, current->code[idx].line, "unknown label '" + label + "'"};
            current->code[idx].a = it->second;
        }
        (void)line;
        labels.clear();
        fixups.clear();
        current = nullptr;
    };

    std::uint32_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size())
    {
        const std::size_t nl = std::min(source.find('\n', pos), source.size());
        std::string_view line = source.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto c = line.find(';'); c != std::string_view::npos)
            line = line.substr(0, c);
        auto toks = split(line);
        if (toks.empty())
            continue;

        auto value_of = [&](const std::string& tok) -> Word {
            if (auto v = parse_number(tok))
                return *v;
            auto it = code.symbols.find(tok);
            if (it == code.symbols.end())
                throw AssemblyError{name, line_no, "unknown symbol '" + tok + "'"};
            return it->second;
        };
        auto count_of = [&](const std::string& tok) -> std::uint32_t {
            auto v = parse_number(tok);
            if (!v || *v > 0xffff)
                throw AssemblyError{name, line_no, "bad operand '" + tok + "'"};
            return static_cast<std::uint32_t>(*v);
        };

        if (toks[0] == ".storage" || toks[0] == ".const")
        {
            if (toks.size() != 3)
                throw AssemblyError{name, line_no, toks[0] + " takes a name and a value"};
            code.symbols[toks[1]] = value_of(toks[2]);
            continue;
        }
        if (toks[0] == ".method")
        {
            if (current || toks.size() != 2)
                throw AssemblyError{name, line_no, "bad .method"};
            current = &code.methods[toks[1]];
            current->name = toks[1];
            continue;
        }
        if (toks[0] == ".end")
        {
            if (!current)
                throw AssemblyError{name, line_no, ".end outside a method"};
            finish_method(line_no);
            continue;
        }
        if (!current)
            throw AssemblyError{name, line_no, "instruction outside a method"};
        if (toks.size() == 1 && toks[0].back() == ':')
        {
            labels[toks[0].substr(0, toks[0].size() - 1)] = static_cast<std::uint32_t>(current->code.size());
            continue;
        }

        std::string mnemonic = toks[0];
        std::transform(mnemonic.begin(), mnemonic.end(), mnemonic.begin(),
            [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        auto info = std::find_if(
            op_table.begin(), op_table.end(), [&](const OpInfo& e) { return mnemonic == e.name; });
        if (info == op_table.end())
            throw AssemblyError{name, line_no, "unknown instruction '" + toks[0] + "'"};
        Instr in;
        in.op = info->op;
        in.line = line_no;
        const std::size_t nops = toks.size() - 1;
        auto want = [&](std::size_t lo, std::size_t hi) {
            if (nops < lo || nops > hi)
                throw AssemblyError{name, line_no, std::string{info->name} + ": wrong operand count"};
        };
        auto slot = [&](std::size_t i) {
            const std::uint32_t s = count_of(toks[i]);
            current->locals = std::max(current->locals, s + 1);
            return s;
        };

        switch (in.op)
        {
        case Opcode::push:
            want(1, 1);
            in.imm = value_of(toks[1]);
            in.has_imm = true;
            break;
        case Opcode::sload:
        case Opcode::sstore:
        case Opcode::arg:
            want(0, 1);
            if (nops == 1)
            {
                in.imm = value_of(toks[1]);
                in.has_imm = true;
            }
            break;
        case Opcode::dup:
        case Opcode::swap:
            want(0, 1);
            in.a = nops == 1 ? count_of(toks[1]) : 1;
            if (in.a == 0)
                throw AssemblyError{name, line_no, "depth must be at least 1"};
            break;
        case Opcode::loadl:
        case Opcode::storel:
        case Opcode::newarr:
        case Opcode::aload:
        case Opcode::astore:
        case Opcode::alen:
            want(1, 1);
            in.a = slot(1);
            break;
        case Opcode::log:
            want(1, 1);
            in.a = count_of(toks[1]);
            break;
        case Opcode::jmp:
        case Opcode::jz:
        case Opcode::jnz:
            want(1, 1);
            fixups.emplace_back(current->code.size(), toks[1]);
            break;
        case Opcode::call:
        case Opcode::delegatecall:
        case Opcode::create:
            want(2, 2);
            in.name = toks[1];
            in.a = count_of(toks[2]);
            break;
        case Opcode::enter_mpc:
            want(3, 4);
            in.a = slot(1);
            in.b = slot(2);
            in.c = slot(3);
            if (nops == 4)
            {
                in.d = slot(4);
                in.has_d = true;
            }
            break;
        default:
            want(0, 0);
            break;
        }
        current->code.push_back(std::move(in));
    }
    if (current)
        throw AssemblyError{name, line_no, "missing .end"};
    return code;
}

// ---------------------------------------------------------------------------

Vm::Vm(VmConfig config, FixtureResolver fixtures) : config_{config}, fixtures_{std::move(fixtures)} {}

namespace
{
Frame make_frame(Address self, Address caller, Word value, std::shared_ptr<const ContractCode> code,
    const Method& m, std::vector<Word> args)
{
    Frame f;
    f.self = self;
    f.caller = caller;
    f.value = value;
    f.code = std::move(code);
    f.method = m.name;
    f.locals.resize(m.locals);
    f.args = std::move(args);
    return f;
}

ExecResult failure(VmError e, std::string detail, bool lock = false)
{
    ExecResult r;
    r.status = ExecStatus::reverted;
    r.error = e;
    r.detail = std::move(detail);
    r.denied_by_lock = lock;
    return r;
}
}  // namespace

ExecResult Vm::call(StateView& view, const TxEnv& env, const std::set<Address>& locks, Address sender,
    Address target, const std::string& method, std::vector<Word> args, Word value, const MpcOracle& oracle) const
{
    if (locks.contains(target))
        return failure(VmError::access_violation, "target contract is locked", true);
    if (target == txmgr_address)
        return failure(VmError::no_code, "the manager is reached through MPC transactions");
    auto code = view.code(target);
    if (!code)
        return failure(VmError::no_code, "no code at " + to_hex(target));
    const Method* m = code->find(method);
    if (!m)
        return failure(VmError::unknown_method, method);
    Continuation ctx;
    ctx.env = env;
    ctx.accessed = {target};
    ctx.frames.push_back(make_frame(target, sender, value, code, *m, std::move(args)));
    return run(view, ctx, locks, oracle);
}

ExecResult Vm::construct(StateView& view, const TxEnv& env, const std::set<Address>& locks, Address sender,
    Address at, std::vector<Word> args, Word value, const MpcOracle& oracle) const
{
    auto code = view.code(at);
    if (!code)
        return failure(VmError::no_code, "nothing deployed");
    const Method* m = code->find("constructor");
    if (!m)
    {
        ExecResult r;
        r.accessed = {at};
        return r;
    }
    Continuation ctx;
    ctx.env = env;
    ctx.accessed = {at};
    ctx.frames.push_back(make_frame(at, sender, value, code, *m, std::move(args)));
    return run(view, ctx, locks, oracle);
}

ExecResult Vm::resume(StateView& view, Continuation cont, const std::vector<Word>& result,
    const std::set<Address>& locks, const MpcOracle& oracle) const
{
    if (cont.frames.empty())
        return failure(VmError::bad_operand, "empty continuation");
    auto& slot = cont.frames.back().locals.at(cont.result_slot);
    slot.is_array = true;
    slot.array = result;
    cont.confined = true;
    return run(view, cont, locks, oracle);
}

ExecResult Vm::run(StateView& view, Continuation& ctx, const std::set<Address>& locks, const MpcOracle& oracle) const
{
    auto finish = [&](ExecResult r) {
        r.gas_used = ctx.gas_used;
        r.accessed = ctx.accessed;
        if (r.status != ExecStatus::reverted)
            r.events = ctx.events;
        return r;
    };
    auto fail = [&](VmError e, std::string detail, bool lock = false) {
        return finish(failure(e, std::move(detail), lock));
    };
    // While confined, only the locked contract itself is reachable.
    auto reachable = [&](Address a, std::string& why, bool& lock) {
        if (ctx.confined)
        {
            if (a == ctx.contract)
                return true;
            why = "resumed execution may only touch the locked contract";
            lock = locks.contains(a);
            return false;
        }
        if (locks.contains(a))
        {
            why = to_hex(a) + " is locked";
            lock = true;
            return false;
        }
        return true;
    };

    while (true)
    {
        const std::size_t depth = ctx.frames.size();
        Frame& f = ctx.frames.back();
        const Method* m = f.code->find(f.method);
        if (!m)
            return fail(VmError::unknown_method, f.method);

        std::optional<Word> returned;
        if (f.pc >= m->code.size())
            returned = 0;
        else
        {
            const Instr& in = m->code[f.pc++];
            ctx.gas_used += in.op == Opcode::enter_mpc ? config_.enter_mpc_gas : 1;
            if (ctx.gas_used > ctx.env.gas_limit)
                return fail(VmError::out_of_gas, std::to_string(ctx.gas_used) + " gas");

            auto& st = f.stack;
            auto need = [&](std::size_t n) { return st.size() >= n; };
            auto pop = [&] {
                const Word v = st.back();
                st.pop_back();
                return v;
            };
            auto local = [&](std::uint32_t s) -> Local* { return s < f.locals.size() ? &f.locals[s] : nullptr; };

            switch (in.op)
            {
            case Opcode::push:
                st.push_back(in.imm);
                break;
            case Opcode::pop:
                if (!need(1))
                    return fail(VmError::stack_underflow, "POP");
                st.pop_back();
                break;
            case Opcode::dup:
                if (!need(in.a))
                    return fail(VmError::stack_underflow, "DUP");
                st.push_back(st[st.size() - in.a]);
                break;
            case Opcode::swap:
                if (!need(in.a + 1))
                    return fail(VmError::stack_underflow, "SWAP");
                std::swap(st.back(), st[st.size() - 1 - in.a]);
                break;
            case Opcode::loadl:
            {
                const Local* l = local(in.a);
                if (!l || l->is_array)
                    return fail(VmError::bad_operand, "LOADL of an array or missing slot");
                st.push_back(l->word);
                break;
            }
            case Opcode::storel:
            {
                Local* l = local(in.a);
                if (!l || !need(1))
                    return fail(VmError::stack_underflow, "STOREL");
                l->is_array = false;
                l->array.clear();
                l->word = pop();
                break;
            }
            case Opcode::sload:
            {
                Word key = in.imm;
                if (!in.has_imm)
                {
                    if (!need(1))
                        return fail(VmError::stack_underflow, "SLOAD");
                    key = pop();
                }
                st.push_back(view.sload(f.self, key));
                break;
            }
            case Opcode::sstore:
            {
                if (!need(in.has_imm ? 1 : 2))
                    return fail(VmError::stack_underflow, "SSTORE");
                const Word value = pop();
                const Word key = in.has_imm ? in.imm : pop();
                view.sstore(f.self, key, value);
                break;
            }
            case Opcode::add:
            case Opcode::sub:
            case Opcode::mul:
            case Opcode::div:
            case Opcode::mod:
            case Opcode::lt:
            case Opcode::eq:
            {
                if (!need(2))
                    return fail(VmError::stack_underflow, to_string(in.op));
                const Word b = pop();
                const Word a = pop();
                Word r = 0;
                switch (in.op)
                {
                case Opcode::add:
                    r = a + b;
                    break;
                case Opcode::sub:
                    r = a - b;
                    break;
                case Opcode::mul:
                    r = a * b;
                    break;
                case Opcode::div:
                    r = b == 0 ? 0 : a / b;
                    break;
                case Opcode::mod:
                    r = b == 0 ? 0 : a % b;
                    break;
                case Opcode::lt:
                    r = a < b;
                    break;
                default:
                    r = a == b;
                    break;
                }
                st.push_back(r);
                break;
            }
            case Opcode::jmp:
            case Opcode::jz:
            case Opcode::jnz:
            {
                if (in.a > m->code.size())
                    return fail(VmError::bad_jump, std::to_string(in.a));
                bool take = true;
                if (in.op != Opcode::jmp)
                {
                    if (!need(1))
                        return fail(VmError::stack_underflow, "conditional jump");
                    const Word v = pop();
                    take = in.op == Opcode::jz ? v == 0 : v != 0;
                }
                if (take)
                    f.pc = in.a;
                break;
            }
            case Opcode::call:
            case Opcode::delegatecall:
            {
                if (!need(in.a + 2))
                    return fail(VmError::stack_underflow, to_string(in.op));
                const Address target{pop()};
                const Word value = pop();
                std::vector<Word> args(st.end() - in.a, st.end());
                st.resize(st.size() - in.a);
                if (depth >= config_.max_depth)
                    return fail(VmError::call_depth, "call depth");
                if (target == txmgr_address)
                    return fail(VmError::not_eoa, "the manager accepts broadcasts from EOAs only");
                std::string why;
                bool lock = false;
                if (in.op == Opcode::call)
                {
                    if (!reachable(target, why, lock))
                        return fail(VmError::access_violation, why, lock);
                }
                else if (value != 0 && (locks.contains(target) || ctx.confined))
                    return fail(VmError::access_violation, "code borrowing with value from a locked contract", true);
                auto code = view.code(target);
                if (!code)
                    return fail(VmError::no_code, "no code at " + to_hex(target));
                const Method* callee = code->find(in.name);
                if (!callee)
                    return fail(VmError::unknown_method, in.name);
                Frame next;
                if (in.op == Opcode::call)
                {
                    if (!view.transfer(f.self, target, value))
                        return fail(VmError::insufficient_balance, "call value");
                    ctx.accessed.insert(target);
                    next = make_frame(target, f.self, value, code, *callee, std::move(args));
                }
                else
                    next = make_frame(f.self, f.caller, value, code, *callee, std::move(args));
                ctx.frames.push_back(std::move(next));
                continue;
            }
            case Opcode::balance:
            {
                if (!need(1))
                    return fail(VmError::stack_underflow, "BALANCE");
                const Address a{pop()};
                std::string why;
                bool lock = false;
                if (!reachable(a, why, lock))
                    return fail(VmError::access_violation, why, lock);
                if (view.code(a))
                    ctx.accessed.insert(a);
                st.push_back(view.balance(a));
                break;
            }
            case Opcode::transfer:
            {
                if (!need(2))
                    return fail(VmError::stack_underflow, "TRANSFER");
                const Word value = pop();
                const Address to{pop()};
                if (to == txmgr_address)
                    return fail(VmError::not_eoa, "transfer to the manager");
                std::string why;
                bool lock = false;
                if (!reachable(to, why, lock))
                    return fail(VmError::access_violation, why, lock);
                if (view.code(to))
                    ctx.accessed.insert(to);
                if (!view.transfer(f.self, to, value))
                    return fail(VmError::insufficient_balance, "transfer");
                break;
            }
            case Opcode::create:
            {
                if (!need(in.a + 1))
                    return fail(VmError::stack_underflow, "CREATE");
                const Word value = pop();
                std::vector<Word> args(st.end() - in.a, st.end());
                st.resize(st.size() - in.a);
                if (ctx.confined || locks.contains(f.self))
                    return fail(VmError::access_violation, "a locked contract cannot deploy", true);
                if (depth >= config_.max_depth)
                    return fail(VmError::call_depth, "call depth");
                auto code = fixtures_ ? fixtures_(in.name) : nullptr;
                if (!code)
                    return fail(VmError::no_code, "unknown fixture " + in.name);
                const Address fresh = contract_address(f.self, view.nonce(f.self));
                view.bump_nonce(f.self);
                view.deploy(fresh, code);
                view.bump_nonce(fresh);
                if (!view.transfer(f.self, fresh, value))
                    return fail(VmError::insufficient_balance, "create value");
                ctx.accessed.insert(fresh);
                if (const Method* ctor = code->find("constructor"))
                {
                    Frame next = make_frame(fresh, f.self, value, code, *ctor, std::move(args));
                    next.stack.clear();
                    ctx.frames.push_back(std::move(next));
                    // Constructor frames report the new address instead of their return word.
                    ctx.frames.back().method = "constructor";
                    continue;
                }
                st.push_back(fresh.value);
                break;
            }
            case Opcode::selfdestruct:
            {
                if (!need(1))
                    return fail(VmError::stack_underflow, "SELFDESTRUCT");
                const Address beneficiary{pop()};
                if (ctx.confined || locks.contains(f.self) || locks.contains(beneficiary))
                    return fail(VmError::access_violation, "self-destruct involving a locked contract", true);
                view.destroy(f.self, beneficiary);
                returned = 0;
                break;
            }
            case Opcode::enter_mpc:
            {
                if (!ctx.confined)
                {
                    if (ctx.accessed != std::set<Address>{f.self})
                        return fail(VmError::access_violation, "enter_mpc after touching other contracts");
                    for (const auto& [addr, d] : view.writes())
                        if (addr != f.self && addr != ctx.env.origin && addr != txmgr_address)
                            return fail(VmError::access_violation, "pending writes outside sender and contract");
                }
                else if (f.self != ctx.contract)
                    return fail(VmError::access_violation, "enter_mpc from another contract");
                const Local* cid = local(in.a);
                const Local* params = local(in.b);
                if (!cid || cid->is_array || !params || !params->is_array || !local(in.c))
                    return fail(VmError::bad_operand, "ENTER_MPC operands");
                MpcRequest req{cid->word, params->array, {}};
                if (in.has_d)
                {
                    const Local* parties = local(in.d);
                    if (!parties || !parties->is_array)
                        return fail(VmError::bad_operand, "ENTER_MPC parties");
                    for (Word w : parties->array)
                        req.parties.push_back(Address{w});
                }
                ctx.invocations += 1;
                ctx.result_slot = in.c;
                ctx.contract = f.self;
                if (oracle)
                    if (auto res = oracle(req, ctx.invocations))
                    {
                        Local* out = local(in.c);
                        out->is_array = true;
                        out->array = std::move(*res);
                        ctx.confined = true;
                        break;
                    }
                ExecResult r;
                r.status = ExecStatus::suspended;
                r.mpc = std::move(req);
                r.cont = std::make_shared<Continuation>(ctx);
                return finish(std::move(r));
            }
            case Opcode::ret:
                returned = st.empty() ? 0 : st.back();
                break;
            case Opcode::revert:
                return fail(VmError::explicit_revert, f.method + " reverted");
            case Opcode::timestamp:
                st.push_back(ctx.env.timestamp);
                break;
            case Opcode::caller:
                st.push_back(f.caller.value);
                break;
            case Opcode::origin:
                st.push_back(ctx.env.origin.value);
                break;
            case Opcode::address:
                st.push_back(f.self.value);
                break;
            case Opcode::callvalue:
                st.push_back(f.value);
                break;
            case Opcode::argc:
                st.push_back(f.args.size());
                break;
            case Opcode::arg:
            {
                Word i = in.imm;
                if (!in.has_imm)
                {
                    if (!need(1))
                        return fail(VmError::stack_underflow, "ARG");
                    i = pop();
                }
                if (i >= f.args.size())
                    return fail(VmError::bad_operand, "ARG " + std::to_string(i));
                st.push_back(f.args[i]);
                break;
            }
            case Opcode::hash:
            {
                if (!need(2))
                    return fail(VmError::stack_underflow, "HASH");
                const Word b = pop();
                const Word a = pop();
                st.push_back(hash_words(a, b));
                break;
            }
            case Opcode::newarr:
            {
                if (!need(1))
                    return fail(VmError::stack_underflow, "NEWARR");
                const Word n = pop();
                if (n > 1'000'000)
                    return fail(VmError::bad_operand, "array too large");
                Local* l = local(in.a);
                l->is_array = true;
                l->array.assign(n, 0);
                break;
            }
            case Opcode::aload:
            case Opcode::astore:
            {
                Local* l = local(in.a);
                if (!need(in.op == Opcode::aload ? 1 : 2))
                    return fail(VmError::stack_underflow, to_string(in.op));
                const Word value = in.op == Opcode::astore ? pop() : 0;
                const Word idx = pop();
                if (!l->is_array || idx >= l->array.size())
                    return fail(VmError::bad_operand, "array index " + std::to_string(idx));
                if (in.op == Opcode::aload)
                    st.push_back(l->array[idx]);
                else
                    l->array[idx] = value;
                break;
            }
            case Opcode::alen:
            {
                const Local* l = local(in.a);
                if (!l->is_array)
                    return fail(VmError::bad_operand, "ALEN of a word");
                st.push_back(l->array.size());
                break;
            }
            case Opcode::log:
            {
                if (!need(in.a))
                    return fail(VmError::stack_underflow, "LOG");
                LogEvent ev{f.self, std::vector<Word>(st.end() - in.a, st.end())};
                st.resize(st.size() - in.a);
                ctx.events.push_back(std::move(ev));
                break;
            }
            }
        }

        if (returned)
        {
            const bool was_ctor = f.method == "constructor";
            const Address self = f.self;
            ctx.frames.pop_back();
            if (ctx.frames.empty())
            {
                ExecResult r;
                r.ret = *returned;
                return finish(std::move(r));
            }
            ctx.frames.back().stack.push_back(was_ctor ? self.value : *returned);
        }
    }
}
}  // namespace mpcevm
