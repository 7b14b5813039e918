// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/engine.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <utility>

namespace mpcevm
{
std::string to_string(const SessionKey& key)
{
    return to_hex(key.tx) + ":" + std::to_string(key.invocation);
}

const char* to_string(MsgKind kind) noexcept
{
    switch (kind)
    {
    case MsgKind::share_delivery:
        return "SHARE_DELIVERY";
    case MsgKind::commitments:
        return "COMMITMENTS";
    case MsgKind::ready:
        return "READY";
    case MsgKind::gate_done:
        return "GATE_DONE";
    case MsgKind::open_share:
        return "OPEN_SHARE";
    case MsgKind::dispute:
        return "DISPUTE";
    case MsgKind::dispute_opening:
        return "DISPUTE_OPENING";
    case MsgKind::accuse:
        return "ACCUSE";
    case MsgKind::result_attest:
        return "RESULT_ATTEST";
    }
    return "?";
}

const char* to_string(FaultBehavior b) noexcept
{
    switch (b)
    {
    case FaultBehavior::inconsistent_dealing:
        return "INCONSISTENT_DEALING";
    case FaultBehavior::corrupt_opening:
        return "CORRUPT_OPENING";
    case FaultBehavior::forge_attestation:
        return "FORGE_ATTESTATION";
    case FaultBehavior::silent:
        return "SILENT";
    }
    return "?";
}

const char* to_string(FaultPhase p) noexcept
{
    switch (p)
    {
    case FaultPhase::input:
        return "input";
    case FaultPhase::multiplication:
        return "multiplication";
    case FaultPhase::opening:
        return "opening";
    case FaultPhase::attestation:
        return "attestation";
    case FaultPhase::always:
        return "always";
    }
    return "?";
}

namespace
{
bool same_name(const std::string& a, std::string_view b)
{
    return std::ranges::equal(a, b, [](char x, char y) { return std::toupper(x) == std::toupper(y); });
}
}  // namespace

// Names match case-insensitively, so scenario files can use snake_case.
FaultBehavior parse_fault_behavior(const std::string& s)
{
    for (auto b : {FaultBehavior::inconsistent_dealing, FaultBehavior::corrupt_opening,
             FaultBehavior::forge_attestation, FaultBehavior::silent})
        if (same_name(s, to_string(b)))
            return b;
    throw std::invalid_argument{"unknown fault behavior " + s};
}

FaultPhase parse_fault_phase(const std::string& s)
{
    for (auto p : {FaultPhase::input, FaultPhase::multiplication, FaultPhase::opening, FaultPhase::attestation,
             FaultPhase::always})
        if (same_name(s, to_string(p)))
            return p;
    throw std::invalid_argument{"unknown activation point " + s};
}

const char* to_string(OpKind kind) noexcept
{
    switch (kind)
    {
    case OpKind::input_secret:
        return "input_secret";
    case OpKind::constant:
        return "constant";
    case OpKind::linear:
        return "linear";
    case OpKind::rand:
        return "rand";
    case OpKind::mult:
        return "mult";
    case OpKind::open:
        return "open";
    case OpKind::root_bit:
        return "root_bit";
    case OpKind::bit_eq:
        return "bit_eq";
    case OpKind::bit_lt:
        return "bit_lt";
    case OpKind::mod_low:
        return "mod_low";
    }
    return "?";
}

std::size_t Program::count(OpKind kind) const
{
    return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [&](const Op& o) { return o.kind == kind; }));
}

std::size_t Program::protocol_mults() const
{
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [](const Op& o) { return o.needs_protocol(); }));
}

namespace
{
class ProgramBuilder
{
public:
    ProgramBuilder(Program& p) : p_{p} {}

    FieldElement fe(std::uint64_t v) const { return {v % p_.modulus, p_.modulus}; }

    std::uint32_t push(Op op)
    {
        op.gate = gate;
        p_.ops.push_back(std::move(op));
        return static_cast<std::uint32_t>(p_.ops.size() - 1);
    }
    bool pub(std::uint32_t op) const { return p_.ops[op].is_public; }

    std::uint32_t constant(std::uint64_t v)
    {
        Op op;
        op.kind = OpKind::constant;
        op.is_public = true;
        op.constant = fe(v);
        return push(std::move(op));
    }
    std::uint32_t linear(std::vector<Term> terms, FieldElement c0)
    {
        Op op;
        op.kind = OpKind::linear;
        op.is_public = std::all_of(terms.begin(), terms.end(), [&](const Term& t) { return pub(t.op); });
        op.terms = std::move(terms);
        op.constant = c0;
        return push(std::move(op));
    }
    std::uint32_t linear(std::vector<Term> terms) { return linear(std::move(terms), fe(0)); }
    std::uint32_t mult(std::uint32_t a, std::uint32_t b)
    {
        Op op;
        op.kind = OpKind::mult;
        op.is_public = pub(a) && pub(b);
        op.scalar = pub(a) || pub(b);
        op.a = a;
        op.b = b;
        return push(std::move(op));
    }
    std::uint32_t unary(OpKind kind, bool is_public, std::uint32_t a, std::uint32_t b = 0, std::uint32_t bit = 0)
    {
        Op op;
        op.kind = kind;
        op.is_public = is_public;
        op.a = a;
        op.b = b;
        op.bit = bit;
        return push(std::move(op));
    }
    std::uint32_t open(std::uint32_t a) { return unary(OpKind::open, true, a); }

    std::uint32_t gate = 0;

private:
    Program& p_;
};
}  // namespace

Program compile_program(
    const Circuit& c, const std::vector<std::uint64_t>& public_inputs, unsigned kappa, std::uint64_t modulus)
{
    validate(c);
    if (public_inputs.size() != c.public_input_count)
        throw ShapeMismatch{"public input count"};
    const unsigned k = c.bit_width;
    // m = d + r < 2^(k+1) + 2^(k+kappa) must not wrap.
    if (k + kappa + 2 > 63 || (std::uint64_t{1} << (k + kappa + 1)) >= modulus)
        throw InvalidCircuit{"field too small for the comparison mask"};

    Program p;
    p.n_parties = c.n_parties;
    p.modulus = modulus;
    p.bit_width = k;
    p.kappa = kappa;
    p.secret_shape = c.secret_input_shape;
    p.outputs.assign(c.output_count, 0);
    ProgramBuilder b{p};
    const FieldElement one = b.fe(1);
    const FieldElement minus_one = -one;
    const FieldElement two_k = b.fe(std::uint64_t{1} << k);
    const FieldElement inv_two_k = two_k.inv();

    std::vector<std::array<std::uint32_t, 2>> wire(c.gates.size(), {0, 0});
    auto at = [&](WireRef w) { return wire[w.gate][w.port]; };
    auto operand = [&](const Operand& o) { return o.is_wire() ? at(*o.wire) : b.constant(o.constant); };

    for (const auto& g : c.gates)
    {
        b.gate = g.id;
        switch (g.kind)
        {
        case GateKind::input_secret:
        {
            Op op;
            op.kind = OpKind::input_secret;
            op.owner = g.party;
            op.slot = g.slot;
            op.bound = g.max_value;
            wire[g.id][0] = b.push(std::move(op));
            break;
        }
        case GateKind::input_public:
            wire[g.id][0] = b.constant(public_inputs[g.slot]);
            break;
        case GateKind::add:
            wire[g.id][0] = b.linear({{at(g.a), one}, {at(g.b), one}});
            break;
        case GateKind::mult_by_const:
            wire[g.id][0] = b.linear({{at(g.a), b.fe(public_inputs[g.public_ref])}});
            break;
        case GateKind::mult:
            wire[g.id][0] = b.mult(at(g.a), at(g.b));
            break;
        case GateKind::output:
        {
            const std::uint32_t src = at(g.a);
            const std::uint32_t out = b.pub(src) ? b.linear({{src, one}}) : b.open(src);
            p.ops[out].output_slot = static_cast<std::int32_t>(g.slot);
            p.outputs[g.slot] = out;
            break;
        }
        case GateKind::compare:
        {
            const std::uint32_t va = operand(g.val_a);
            const std::uint32_t vb = operand(g.val_b);
            const std::uint32_t d = b.linear({{va, one}, {vb, minus_one}}, two_k);

            // Random bits r_j from opened squares of random values.
            std::vector<std::uint32_t> bits;
            for (unsigned j = 0; j < k + kappa; ++j)
            {
                const std::uint32_t u = b.unary(OpKind::rand, false, 0);
                const std::uint32_t sq = b.mult(u, u);
                const std::uint32_t s = b.open(sq);
                bits.push_back(b.unary(OpKind::root_bit, false, u, s));
            }
            std::vector<Term> r_terms, r_low_terms;
            for (unsigned j = 0; j < bits.size(); ++j)
            {
                const FieldElement w = FieldElement{2, modulus}.pow(j);
                r_terms.push_back({bits[j], w});
                if (j < k)
                    r_low_terms.push_back({bits[j], w});
            }
            const std::uint32_t r = b.linear(r_terms);
            const std::uint32_t m = b.open(b.linear({{d, one}, {r, one}}));

            // u = [m mod 2^k < r mod 2^k], scanned from the top bit down.
            struct Part
            {
                std::optional<std::uint32_t> eq;
                std::uint32_t lt;
            };
            auto tree = [&](auto&& self, unsigned lo, unsigned hi, bool need_eq) -> Part {
                if (hi - lo == 1)
                {
                    Part leaf{std::nullopt, b.unary(OpKind::bit_lt, false, m, bits[lo], lo)};
                    if (need_eq)
                        leaf.eq = b.unary(OpKind::bit_eq, false, m, bits[lo], lo);
                    return leaf;
                }
                const unsigned mid = (lo + hi) / 2;
                const Part high = self(self, mid, hi, true);
                const Part low = self(self, lo, mid, need_eq);
                Part out;
                out.lt = b.linear({{high.lt, one}, {b.mult(*high.eq, low.lt), one}});
                if (need_eq)
                    out.eq = b.mult(*high.eq, *low.eq);
                return out;
            };
            const std::uint32_t borrow = tree(tree, 0, k, false).lt;
            const std::uint32_t m_low = b.unary(OpKind::mod_low, true, m, 0, k);
            const std::uint32_t r_low = b.linear(r_low_terms);
            const std::uint32_t d_low = b.linear({{m_low, one}, {r_low, minus_one}, {borrow, two_k}});
            const std::uint32_t sel = b.linear({{d, inv_two_k}, {d_low, -inv_two_k}});

            const std::uint32_t diff = b.linear({{va, one}, {vb, minus_one}});
            wire[g.id][0] = b.linear({{vb, one}, {b.mult(sel, diff), one}});
            const std::uint32_t ia = operand(g.id_a);
            const std::uint32_t ib = operand(g.id_b);
            const std::uint32_t id_diff = b.linear({{ia, one}, {ib, minus_one}});
            wire[g.id][1] = b.linear({{ib, one}, {b.mult(sel, id_diff), one}});
            break;
        }
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// SessionBoard

SessionBoard::SessionBoard(std::shared_ptr<const Program> program, std::uint32_t n, EngineConfig config,
    std::uint64_t start_height, const CommitmentParams& params)
  : program_{std::move(program)}, n_{n}, config_{config}, params_{params}, start_height_{start_height},
    height_{start_height}
{
    if (n_ < 3 * config_.t + 1)
        throw PartyCountTooSmall{};
    if (n_ > 0xff)
        throw std::invalid_argument{"committee too large"};
    if (params_.order() != program_->modulus)
        throw FieldMismatch{};
    public_.assign(program_->ops.size(), std::nullopt);
    for (std::uint32_t i = 0; i < program_->ops.size(); ++i)
    {
        const Op& op = program_->ops[i];
        if (op.is_public)
            public_pending_.push_back(i);
        if (op.kind == OpKind::rand || op.needs_protocol())
            undecided_.push_back(i);
    }
    evaluate_public();
}

void SessionBoard::begin_block(std::uint64_t height)
{
    height_ = height;
    offences_.clear();
    new_disputes_.clear();
}

void SessionBoard::approve(std::uint32_t op)
{
    if (op < program_->ops.size() && program_->ops[op].needs_protocol())
        approved_.insert(op);
}

void SessionBoard::offend(std::uint32_t party, std::string reason)
{
    offences_.push_back({party, std::move(reason)});
}

void SessionBoard::ingest(std::uint32_t sender, const MpcMessage& msg)
{
    if (finished_ || sender == 0 || sender > n_ || msg.op >= program_->ops.size())
        return;
    const Op& op = program_->ops[msg.op];
    switch (msg.kind)
    {
    case MsgKind::commitments:
    {
        if (msg.dealer != sender || msg.commitments.size() != config_.t + 1)
            return;
        const bool dealable = (op.kind == OpKind::input_secret && op.owner + 1 == sender) ||
                              op.kind == OpKind::rand || (op.needs_protocol() && approved(msg.op));
        if (!dealable || dealings_.contains(key(msg.op, sender)))
            return;
        for (const auto& c : msg.commitments)
            if (!params_.in_subgroup(c))
                return;
        dealings_.emplace(key(msg.op, sender), DealingRecord{msg.commitments, height_});
        break;
    }
    case MsgKind::open_share:
    {
        if (op.kind != OpKind::open || public_[msg.op])
            return;
        auto& list = openings_[msg.op];
        if (std::any_of(list.begin(), list.end(), [&](const OpeningEntry& e) { return e.opener == sender; }))
            return;
        list.push_back({sender, msg.value, msg.randomness, 0});
        break;
    }
    case MsgKind::dispute:
    {
        if (msg.party != sender || msg.dealer == sender || !dealings_.contains(key(msg.op, msg.dealer)))
            return;
        const std::array<std::uint32_t, 3> k{msg.op, msg.dealer, sender};
        if (disputes_.contains(k))
            return;
        disputes_[k].raised = height_;
        new_disputes_.push_back(k);
        break;
    }
    case MsgKind::dispute_opening:
    {
        auto it = disputes_.find({msg.op, sender, msg.party});
        if (it == disputes_.end() || it->second.verdict)
            return;
        it->second.opening = Opening{msg.value, msg.randomness};
        DisputeRecord record{sender, key(msg.op, sender), msg.party, it->second.opening};
        const auto lookup = [this](std::uint64_t id, std::uint32_t party) -> std::optional<Commitment> {
            auto d = dealings_.find(id);
            if (d == dealings_.end())
                return std::nullopt;
            return eval_coefficient_commitments(d->second.coefficients, party, params_);
        };
        it->second.verdict = open_dispute(record, lookup, params_);
        if (*it->second.verdict == DisputeVerdict::cheater)
            offend(sender, "dispute opening does not match its commitments");
        break;
    }
    case MsgKind::share_delivery:
    case MsgKind::ready:
    case MsgKind::gate_done:
    case MsgKind::accuse:
    case MsgKind::result_attest:
        break;
    }
}

void SessionBoard::end_block()
{
    if (finished_)
        return;
    for (auto& [k, state] : disputes_)
        if (!state.verdict && height_ >= state.raised + config_.dispute_timeout)
        {
            state.verdict = DisputeVerdict::cheater;
            offend(k[1], "no answer to dispute");
        }
    if (height_ >= start_height_ + config_.input_timeout)
        for (std::uint32_t i = 0; i < program_->ops.size(); ++i)
        {
            const Op& op = program_->ops[i];
            if (op.kind == OpKind::input_secret && !dealings_.contains(key(i, op.owner + 1)) &&
                silent_owner_reported_.insert(op.owner + 1).second)
                offend(op.owner + 1, "input never dealt");
        }
    decide_sets();
    evaluate_public();
}

void SessionBoard::decide_sets()
{
    std::erase_if(undecided_, [&](std::uint32_t op) {
        if (program_->ops[op].needs_protocol() && !approved(op))
            return false;
        std::vector<std::uint32_t> dealers;
        for (std::uint32_t d = 1; d <= n_ && dealers.size() < 2 * config_.t + 1; ++d)
            if (dealings_.contains(key(op, d)))
                dealers.push_back(d);
        if (dealers.size() < 2 * config_.t + 1)
            return false;
        if (program_->ops[op].needs_protocol())
        {
            std::vector<FieldElement> xs;
            for (auto d : dealers)
                xs.emplace_back(d, program_->modulus);
            weights_[op] = lagrange_coefficients(xs, FieldElement::zero(program_->modulus));
        }
        sets_[op] = std::move(dealers);
        return true;
    });
}

void SessionBoard::evaluate_public()
{
    const std::uint64_t p = program_->modulus;
    std::erase_if(public_pending_, [&](std::uint32_t i) {
        const Op& op = program_->ops[i];
        std::optional<FieldElement> v;
        switch (op.kind)
        {
        case OpKind::constant:
            v = op.constant;
            break;
        case OpKind::linear:
        {
            FieldElement acc = op.constant;
            for (const auto& t : op.terms)
            {
                if (!public_[t.op])
                    return false;
                acc += t.coeff * *public_[t.op];
            }
            v = acc;
            break;
        }
        case OpKind::mult:
            if (!public_[op.a] || !public_[op.b])
                return false;
            v = *public_[op.a] * *public_[op.b];
            break;
        case OpKind::mod_low:
            if (!public_[op.a])
                return false;
            v = FieldElement{public_[op.a]->value() & ((std::uint64_t{1} << op.bit) - 1), p};
            break;
        case OpKind::open:
        {
            auto it = openings_.find(i);
            if (it == openings_.end())
                return false;
            const auto* coeffs = wire_commitments(op.a);
            if (!coeffs)
                return false;
            std::vector<Point> valid;
            for (auto& e : it->second)
            {
                if (e.state == 0)
                {
                    const Commitment c = eval_coefficient_commitments(*coeffs, e.opener, params_);
                    e.state = verify_opening(c, e.value, e.randomness, params_) ? 1 : -1;
                    if (e.state < 0)
                        offend(e.opener, "invalid opening");
                }
                if (e.state > 0 && valid.size() < config_.t + 1)
                    valid.push_back({FieldElement{e.opener, p}, e.value});
            }
            if (valid.size() < config_.t + 1)
                return false;
            v = lagrange_interpolate(valid, FieldElement::zero(p));
            break;
        }
        default:
            return false;
        }
        public_[i] = v;
        return true;
    });
}

const DealingRecord* SessionBoard::dealing(std::uint32_t op, std::uint32_t dealer) const
{
    auto it = dealings_.find(key(op, dealer));
    return it == dealings_.end() ? nullptr : &it->second;
}

const std::vector<std::uint32_t>* SessionBoard::dealer_set(std::uint32_t op) const
{
    auto it = sets_.find(op);
    return it == sets_.end() ? nullptr : &it->second;
}

const std::vector<FieldElement>* SessionBoard::set_weights(std::uint32_t op) const
{
    auto it = weights_.find(op);
    return it == weights_.end() ? nullptr : &it->second;
}

std::optional<FieldElement> SessionBoard::public_value(std::uint32_t op) const
{
    return op < public_.size() ? public_[op] : std::nullopt;
}

std::optional<LinearForm> SessionBoard::resolve_linear(std::uint32_t i) const
{
    const Op& op = program_->ops[i];
    const std::uint64_t p = program_->modulus;
    const FieldElement one = FieldElement::one(p);
    LinearForm f{{}, FieldElement::zero(p)};
    switch (op.kind)
    {
    case OpKind::linear:
        f.constant = op.constant;
        for (const auto& t : op.terms)
        {
            if (program_->ops[t.op].is_public)
            {
                if (!public_[t.op])
                    return std::nullopt;
                f.constant += t.coeff * *public_[t.op];
            }
            else
                f.shared.push_back(t);
        }
        return f;
    case OpKind::mult:
    {
        if (op.is_public || (!program_->ops[op.a].is_public && !program_->ops[op.b].is_public))
            return std::nullopt;
        const bool a_pub = program_->ops[op.a].is_public;
        const auto v = public_[a_pub ? op.a : op.b];
        if (!v)
            return std::nullopt;
        f.shared.push_back({a_pub ? op.b : op.a, *v});
        return f;
    }
    case OpKind::root_bit:
    {
        const auto s = public_[op.b];
        if (!s)
            return std::nullopt;
        const FieldElement half = FieldElement{2, p}.inv();
        if (s->is_zero())
        {
            // u was 0; any fixed bit is a valid sharing.
            f.shared.push_back({op.a, FieldElement::zero(p)});
            return f;
        }
        FieldElement root = *s->sqrt();
        if (root.value() > p - root.value())
            root = -root;
        f.shared.push_back({op.a, root.inv() * half});
        f.constant = half;
        return f;
    }
    case OpKind::bit_eq:
    case OpKind::bit_lt:
    {
        const auto m = public_[op.a];
        if (!m)
            return std::nullopt;
        const bool mj = (m->value() >> op.bit) & 1;
        if (op.kind == OpKind::bit_eq)
        {
            f.shared.push_back({op.b, mj ? one : -one});
            f.constant = mj ? FieldElement::zero(p) : one;
        }
        else
            f.shared.push_back({op.b, mj ? FieldElement::zero(p) : one});
        return f;
    }
    default:
        return std::nullopt;
    }
}

const std::vector<Commitment>* SessionBoard::wire_commitments(std::uint32_t i) const
{
    if (auto it = commitment_memo_.find(i); it != commitment_memo_.end())
        return &it->second;
    const Op& op = program_->ops[i];
    if (op.is_public)
        return nullptr;
    std::vector<Commitment> out(config_.t + 1, params_.identity());
    auto accumulate = [&](const std::vector<Commitment>& src, const FieldElement& w) {
        if (w.is_zero())
            return;
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = params_.combine(out[k], w.value() == 1 ? src[k] : params_.scale(src[k], w));
    };
    switch (op.kind)
    {
    case OpKind::input_secret:
    {
        const auto* d = dealing(i, op.owner + 1);
        if (!d)
            return nullptr;
        out = d->coefficients;
        break;
    }
    case OpKind::rand:
    case OpKind::mult:
    {
        const auto* set = dealer_set(i);
        if (op.kind == OpKind::mult && !set)
        {
            // Mult against a public operand is local.
            if (auto f = resolve_linear(i))
            {
                const auto* src = wire_commitments(f->shared[0].op);
                if (!src)
                    return nullptr;
                accumulate(*src, f->shared[0].coeff);
                break;
            }
            return nullptr;
        }
        if (!set)
            return nullptr;
        const auto* w = set_weights(i);
        for (std::size_t j = 0; j < set->size(); ++j)
            accumulate(dealing(i, (*set)[j])->coefficients, w ? (*w)[j] : FieldElement::one(program_->modulus));
        break;
    }
    case OpKind::linear:
    case OpKind::root_bit:
    case OpKind::bit_eq:
    case OpKind::bit_lt:
    {
        const auto f = resolve_linear(i);
        if (!f)
            return nullptr;
        for (const auto& t : f->shared)
        {
            const auto* src = wire_commitments(t.op);
            if (!src)
                return nullptr;
            accumulate(*src, t.coeff);
        }
        if (!f->constant.is_zero())
            out[0] = params_.combine(out[0], params_.commit(f->constant, FieldElement::zero(program_->modulus)));
        break;
    }
    default:
        return nullptr;
    }
    return &commitment_memo_.emplace(i, std::move(out)).first->second;
}

std::optional<Commitment> SessionBoard::party_commitment(std::uint32_t op, std::uint32_t party) const
{
    const auto* c = wire_commitments(op);
    if (!c)
        return std::nullopt;
    return eval_coefficient_commitments(*c, party, params_);
}

const DisputeState* SessionBoard::dispute(std::uint32_t op, std::uint32_t dealer, std::uint32_t disputer) const
{
    auto it = disputes_.find({op, dealer, disputer});
    return it == disputes_.end() ? nullptr : &it->second;
}

std::optional<std::vector<std::uint64_t>> SessionBoard::outputs() const
{
    std::vector<std::uint64_t> out;
    for (auto op : program_->outputs)
    {
        if (!public_[op])
            return std::nullopt;
        out.push_back(public_[op]->value());
    }
    return out;
}

// ---------------------------------------------------------------------------
// PartyEngine

PartyEngine::PartyEngine(std::uint32_t index, std::shared_ptr<SessionBoard> board,
    std::vector<std::uint64_t> secret_inputs, std::uint64_t seed)
  : index_{index}, board_{std::move(board)}, program_{board_->program()}, inputs_{std::move(secret_inputs)},
    rng_{seed}
{
    if (index_ == 0 || index_ > board_->n())
        throw std::out_of_range{"party index outside the committee"};
    const std::uint32_t me = index_ - 1;
    const std::uint32_t expected = me < program_.secret_shape.size() ? program_.secret_shape[me] : 0;
    if (inputs_.size() != expected)
        throw ShapeMismatch{"party " + std::to_string(me) + " expects " + std::to_string(expected) + " secret inputs"};
    for (const Op& op : program_.ops)
        if (op.kind == OpKind::input_secret && op.owner == me && inputs_[op.slot] > op.bound)
            throw InputOutOfRange{"secret input above its bound"};
    const std::size_t n = program_.ops.size();
    done_.assign(n, 0);
    share_value_.assign(n, FieldElement::zero(program_.modulus));
    share_rand_.assign(n, FieldElement::zero(program_.modulus));
    pending_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        pending_.push_back(i);
}

bool PartyEngine::suppressed(FaultPhase phase) const
{
    return fault_ && fault_->affects(FaultBehavior::silent, phase);
}

void PartyEngine::broadcast(MpcMessage msg, FaultPhase phase)
{
    if (!suppressed(phase))
        broadcasts_.push_back(std::move(msg));
}

void PartyEngine::deal_value(std::uint32_t op, const FieldElement& value, FaultPhase phase)
{
    dealt_.insert(op);
    if (suppressed(phase))
        return;
    const Dealing d = deal(value, board_->t(), board_->n(), rng_, board_->params());
    const bool skew = fault_ && fault_->affects(FaultBehavior::inconsistent_dealing, phase);
    auto& sent = sent_[op];
    for (Share s : d.shares)
    {
        if (skew && s.party_index != index_)
            s.value += FieldElement::one(program_.modulus);
        sent.push_back(s);
        if (s.party_index == index_)
            received_[(std::uint64_t{op} << 16) | index_] = {s, 1};
        else
            p2p_.push_back({MsgKind::share_delivery, op, index_, s.party_index, s.value, s.randomness, {}, {}});
    }
    broadcasts_.push_back({MsgKind::commitments, op, index_, 0, {}, {}, d.coefficient_commitments, {}});
}

void PartyEngine::start()
{
    if (started_)
        return;
    started_ = true;
    for (std::uint32_t i = 0; i < program_.ops.size(); ++i)
    {
        const Op& op = program_.ops[i];
        if (op.kind == OpKind::input_secret && op.owner + 1 == index_)
            deal_value(i, FieldElement{inputs_[op.slot], program_.modulus}, FaultPhase::input);
    }
    for (std::uint32_t i = 0; i < program_.ops.size(); ++i)
        if (program_.ops[i].kind == OpKind::rand)
            deal_value(i, random_element(rng_, program_.modulus), FaultPhase::multiplication);
}

void PartyEngine::receive(const MpcMessage& share)
{
    if (share.kind != MsgKind::share_delivery || share.party != index_ || share.dealer == 0 ||
        share.dealer > board_->n() || share.op >= program_.ops.size())
        return;
    const std::uint64_t k = (std::uint64_t{share.op} << 16) | share.dealer;
    received_.try_emplace(k, Received{{index_, share.value, share.randomness}, 0});
}

void PartyEngine::on_block()
{
    if (board_->finished())
        return;
    for (const auto& off : board_->offences())
        if (off.party != index_ && accused_.insert(off.party).second)
            broadcast({MsgKind::accuse, 0, 0, off.party, {}, {}, {}, {}}, FaultPhase::always);
    for (const auto& d : board_->new_disputes())
    {
        if (d[1] != index_)
            continue;
        auto it = sent_.find(d[0]);
        if (it == sent_.end() || d[2] == 0 || d[2] > it->second.size())
            continue;
        const Share& s = it->second[d[2] - 1];
        broadcast({MsgKind::dispute_opening, d[0], index_, d[2], s.value, s.randomness, {}, {}}, FaultPhase::always);
    }
}

std::optional<Share> PartyEngine::obtain(std::uint32_t op, std::uint32_t dealer)
{
    const DealingRecord* rec = board_->dealing(op, dealer);
    if (!rec)
        return std::nullopt;
    const std::uint64_t k = (std::uint64_t{op} << 16) | dealer;
    if (const auto* ds = board_->dispute(op, dealer, index_); ds && ds->verdict)
    {
        if (*ds->verdict == DisputeVerdict::valid)
            return Share{index_, ds->opening->value, ds->opening->randomness};
        return std::nullopt;
    }
    auto it = received_.find(k);
    if (it != received_.end() && it->second.state == 0)
    {
        const Commitment c = eval_coefficient_commitments(rec->coefficients, index_, board_->params());
        it->second.state = verify_opening(c, it->second.share.value, it->second.share.randomness, board_->params()) ? 1 : -1;
    }
    if (it != received_.end() && it->second.state > 0)
        return it->second.share;
    const bool overdue = it != received_.end() || board_->height() >= rec->height + board_->config().share_timeout;
    if (overdue && disputed_.insert(k).second)
        broadcast({MsgKind::dispute, op, dealer, index_, {}, {}, {}, {}}, FaultPhase::always);
    return std::nullopt;
}

bool PartyEngine::operands_ready(const Op& op) const
{
    return done_[op.a] && done_[op.b];
}

bool PartyEngine::try_op(std::uint32_t i)
{
    const Op& op = program_.ops[i];
    const std::uint64_t p = program_.modulus;
    auto set_share = [&](const FieldElement& v, const FieldElement& r) {
        share_value_[i] = v;
        share_rand_[i] = r;
        return true;
    };

    if (op.is_public)
    {
        if (op.kind == OpKind::open && done_[op.a] && opened_.insert(i).second)
        {
            FieldElement v = share_value_[op.a];
            if (fault_ && fault_->affects(FaultBehavior::corrupt_opening, FaultPhase::opening))
                v += FieldElement::one(p);
            broadcast({MsgKind::open_share, i, 0, 0, v, share_rand_[op.a], {}, {}}, FaultPhase::opening);
        }
        return board_->public_value(i).has_value();
    }

    switch (op.kind)
    {
    case OpKind::input_secret:
    {
        const auto s = obtain(i, op.owner + 1);
        return s && set_share(s->value, s->randomness);
    }
    case OpKind::rand:
    {
        const auto* set = board_->dealer_set(i);
        if (!set)
            return false;
        FieldElement v = FieldElement::zero(p), r = FieldElement::zero(p);
        bool all = true;
        for (auto d : *set)
        {
            const auto s = obtain(i, d);
            if (!s)
            {
                all = false;
                continue;
            }
            v += s->value;
            r += s->randomness;
        }
        return all && set_share(v, r);
    }
    case OpKind::mult:
        if (op.needs_protocol())
        {
            if (!operands_ready(op))
                return false;
            if (ready_sent_.insert(i).second)
                broadcast({MsgKind::ready, i, 0, 0, {}, {}, {}, {}}, FaultPhase::multiplication);
            const auto* set = board_->dealer_set(i);
            if (board_->approved(i) && !set && !dealt_.contains(i))
                deal_value(i, share_value_[op.a] * share_value_[op.b], FaultPhase::multiplication);
            if (!set)
                return false;
            const auto& w = *board_->set_weights(i);
            FieldElement v = FieldElement::zero(p), r = FieldElement::zero(p);
            bool all = true;
            for (std::size_t j = 0; j < set->size(); ++j)
            {
                const auto s = obtain(i, (*set)[j]);
                if (!s)
                {
                    all = false;
                    continue;
                }
                v += w[j] * s->value;
                r += w[j] * s->randomness;
            }
            if (!all)
                return false;
            set_share(v, r);
            if (done_sent_.insert(i).second)
                broadcast({MsgKind::gate_done, i, 0, 0, {}, {}, {}, {}}, FaultPhase::multiplication);
            return true;
        }
        [[fallthrough]];
    case OpKind::linear:
    case OpKind::root_bit:
    case OpKind::bit_eq:
    case OpKind::bit_lt:
    {
        const auto f = board_->resolve_linear(i);
        if (!f)
            return false;
        for (const auto& t : f->shared)
            if (!done_[t.op])
                return false;
        FieldElement v = f->constant, r = FieldElement::zero(p);
        for (const auto& t : f->shared)
        {
            v += t.coeff * share_value_[t.op];
            r += t.coeff * share_rand_[t.op];
        }
        return set_share(v, r);
    }
    default:
        return false;
    }
}

void PartyEngine::advance()
{
    if (!started_ || board_->finished())
        return;
    // Ops are topologically ordered, so one pass completes every chain.
    std::erase_if(pending_, [&](std::uint32_t i) {
        if (!try_op(i))
            return false;
        done_[i] = 1;
        return true;
    });
    if (!attested_)
        if (auto out = board_->outputs())
        {
            attested_ = true;
            out->push_back(0);
            out->push_back(0);
            if (fault_ && fault_->affects(FaultBehavior::forge_attestation, FaultPhase::attestation))
                (*out)[0] += 1;
            if (!suppressed(FaultPhase::attestation))
                attestation_ = std::move(*out);
        }
}

std::vector<MpcMessage> PartyEngine::take_broadcasts()
{
    return std::exchange(broadcasts_, {});
}

std::vector<MpcMessage> PartyEngine::take_p2p()
{
    return std::exchange(p2p_, {});
}

std::optional<std::vector<std::uint64_t>> PartyEngine::take_attestation()
{
    return std::exchange(attestation_, std::nullopt);
}

std::optional<Share> PartyEngine::share_of(std::uint32_t op) const
{
    if (op >= done_.size() || !done_[op] || program_.ops[op].is_public)
        return std::nullopt;
    return Share{index_, share_value_[op], share_rand_[op]};
}
}  // namespace mpcevm
