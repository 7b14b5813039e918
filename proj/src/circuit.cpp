// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/circuit.hpp"

#include <algorithm>
#include <array>

namespace mpcevm
{
const char* to_string(GateKind kind) noexcept
{
    switch (kind)
    {
    case GateKind::input_secret:
        return "INPUT_SECRET";
    case GateKind::input_public:
        return "INPUT_PUBLIC";
    case GateKind::add:
        return "ADD";
    case GateKind::mult_by_const:
        return "MULT_BY_CONST";
    case GateKind::mult:
        return "MULT";
    case GateKind::compare:
        return "COMPARE";
    case GateKind::output:
        return "OUTPUT";
    }
    return "?";
}

std::vector<std::uint32_t> Gate::operands() const
{
    switch (kind)
    {
    case GateKind::input_secret:
    case GateKind::input_public:
        return {};
    case GateKind::mult_by_const:
    case GateKind::output:
        return {a.gate};
    case GateKind::add:
    case GateKind::mult:
        return {a.gate, b.gate};
    case GateKind::compare:
    {
        std::vector<std::uint32_t> out;
        for (const Operand* o : {&val_a, &id_a, &val_b, &id_b})
            if (o->is_wire())
                out.push_back(o->wire->gate);
        return out;
    }
    }
    return {};
}

std::size_t Circuit::count(GateKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

void validate(const Circuit& c)
{
    if (c.secret_input_shape.size() != c.n_parties)
        throw InvalidCircuit{"secret input shape must list every party"};
    if (c.bit_width == 0 || c.bit_width > 40)
        throw InvalidCircuit{"bit width out of range"};
    std::vector<bool> output_slots(c.output_count, false);
    auto check_ref = [&](const Gate& g, WireRef w) {
        if (w.gate >= g.id)
            throw InvalidCircuit{"gate " + std::to_string(g.id) + " reads a later or missing gate"};
        if (w.port > 1 || (w.port == 1 && c.gates[w.gate].kind != GateKind::compare))
            throw InvalidCircuit{"gate " + std::to_string(g.id) + " reads a missing port"};
        if (c.gates[w.gate].kind == GateKind::output)
            throw InvalidCircuit{"outputs cannot feed other gates"};
    };
    for (std::size_t i = 0; i < c.gates.size(); ++i)
    {
        const Gate& g = c.gates[i];
        if (g.id != i)
            throw InvalidCircuit{"gate ids must be dense and ordered"};
        switch (g.kind)
        {
        case GateKind::input_secret:
            if (g.party >= c.n_parties || g.slot >= c.secret_input_shape[g.party])
                throw InvalidCircuit{"secret input outside the declared shape"};
            break;
        case GateKind::input_public:
            if (g.slot >= c.public_input_count)
                throw InvalidCircuit{"public input slot out of range"};
            break;
        case GateKind::mult_by_const:
            check_ref(g, g.a);
            if (g.public_ref >= c.public_input_count)
                throw InvalidCircuit{"constant reference out of range"};
            break;
        case GateKind::add:
        case GateKind::mult:
            check_ref(g, g.a);
            check_ref(g, g.b);
            break;
        case GateKind::compare:
            if (!g.val_a.is_wire() || !g.val_b.is_wire())
                throw InvalidCircuit{"compare values must be wires"};
            for (const Operand* o : {&g.val_a, &g.id_a, &g.val_b, &g.id_b})
                if (o->is_wire())
                    check_ref(g, *o->wire);
            break;
        case GateKind::output:
            check_ref(g, g.a);
            if (g.slot >= c.output_count || output_slots[g.slot])
                throw InvalidCircuit{"duplicate or out-of-range output slot"};
            output_slots[g.slot] = true;
            break;
        }
    }
    if (std::find(output_slots.begin(), output_slots.end(), false) != output_slots.end())
        throw InvalidCircuit{"missing output gate"};
}

CircuitBuilder::CircuitBuilder(std::string name, std::uint32_t n_parties, std::uint32_t public_inputs)
{
    c_.name = std::move(name);
    c_.n_parties = n_parties;
    c_.secret_input_shape.assign(n_parties, 0);
    c_.public_input_count = public_inputs;
}

Gate& CircuitBuilder::push(GateKind kind)
{
    Gate g;
    g.id = static_cast<std::uint32_t>(c_.gates.size());
    g.kind = kind;
    c_.gates.push_back(g);
    return c_.gates.back();
}

WireRef CircuitBuilder::input_secret(std::uint32_t party, std::uint32_t slot, std::uint64_t max_value)
{
    Gate& g = push(GateKind::input_secret);
    g.party = party;
    g.slot = slot;
    g.max_value = max_value;
    if (party < c_.n_parties)
        c_.secret_input_shape[party] = std::max(c_.secret_input_shape[party], slot + 1);
    return {g.id, 0};
}

WireRef CircuitBuilder::input_public(std::uint32_t slot)
{
    Gate& g = push(GateKind::input_public);
    g.slot = slot;
    return {g.id, 0};
}

WireRef CircuitBuilder::add(WireRef a, WireRef b)
{
    Gate& g = push(GateKind::add);
    g.a = a;
    g.b = b;
    return {g.id, 0};
}

WireRef CircuitBuilder::mult_by_const(WireRef a, std::uint32_t public_ref)
{
    Gate& g = push(GateKind::mult_by_const);
    g.a = a;
    g.public_ref = public_ref;
    return {g.id, 0};
}

WireRef CircuitBuilder::mult(WireRef a, WireRef b)
{
    Gate& g = push(GateKind::mult);
    g.a = a;
    g.b = b;
    return {g.id, 0};
}

std::pair<WireRef, WireRef> CircuitBuilder::compare(Operand val_a, Operand id_a, Operand val_b, Operand id_b)
{
    Gate& g = push(GateKind::compare);
    g.val_a = val_a;
    g.id_a = id_a;
    g.val_b = val_b;
    g.id_b = id_b;
    return {{g.id, 0}, {g.id, 1}};
}

void CircuitBuilder::output(WireRef src, std::uint32_t slot)
{
    Gate& g = push(GateKind::output);
    g.a = src;
    g.slot = slot;
    c_.output_count = std::max(c_.output_count, slot + 1);
}

Circuit CircuitBuilder::build()
{
    validate(c_);
    return c_;
}

std::uint32_t CircuitRegistry::register_circuit(Circuit c)
{
    validate(c);
    circuits_.push_back(std::make_shared<const Circuit>(std::move(c)));
    return static_cast<std::uint32_t>(circuits_.size() - 1);
}

const Circuit& CircuitRegistry::get(std::uint64_t cid) const
{
    return *share(cid);
}

std::shared_ptr<const Circuit> CircuitRegistry::share(std::uint64_t cid) const
{
    if (cid >= circuits_.size())
        throw UnknownCircuit{cid};
    return circuits_[cid];
}

Circuit build_voting_circuit(std::uint32_t n)
{
    if (n == 0)
        throw InvalidCircuit{"voting needs at least one voter"};
    CircuitBuilder b{"voting", n, n};
    std::vector<std::array<WireRef, 2>> x(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < 2; ++j)
            x[i][j] = b.input_secret(i, j, 1);
    WireRef s1 = b.mult_by_const(x[0][0], 0);
    WireRef s2 = b.mult_by_const(x[0][1], 0);
    for (std::uint32_t i = 1; i < n; ++i)
    {
        s1 = b.add(s1, b.mult_by_const(x[i][0], i));
        s2 = b.add(s2, b.mult_by_const(x[i][1], i));
    }
    const auto [max, max_id] = b.compare(Operand::of(s1), Operand::public_value(0), Operand::of(s2), Operand::public_value(1));
    (void)max;
    b.output(max_id, 0);
    return b.build();
}

Circuit build_auction_circuit(std::uint32_t n)
{
    if (n < 2)
        throw InvalidCircuit{"auction needs at least two bidders"};
    CircuitBuilder b{"auction", n, n};
    std::vector<WireRef> bids;
    for (std::uint32_t i = 0; i < n; ++i)
        bids.push_back(b.input_secret(i, 0));
    std::vector<WireRef> counted;
    for (std::uint32_t i = 0; i < n; ++i)
        counted.push_back(b.mult_by_const(bids[i], i));

    struct Slot
    {
        WireRef val;
        Operand id;
    };
    auto cmp = [&b](const Slot& l, const Slot& r) {
        auto [v, id] = b.compare(Operand::of(l.val), l.id, Operand::of(r.val), r.id);
        return Slot{v, Operand::of(id)};
    };

    std::vector<Slot> round;
    for (std::uint32_t i = 0; i < n; ++i)
        round.push_back({counted[i], Operand::public_value(i)});

    Slot winner;
    if (n == 10)
    {
        std::vector<Slot> m;
        for (std::uint32_t i = 0; i < 5; ++i)
            m.push_back(cmp(round[2 * i], round[2 * i + 1]));
        m.push_back(cmp(m[0], m[1]));  // m[5]
        m.push_back(cmp(m[2], m[3]));  // m[6]
        m.push_back(cmp(m[4], m[5]));  // m[7]
        m.push_back(cmp(m[6], m[7]));  // m[8]
        winner = m[8];
    }
    else
    {
        while (round.size() > 1)
        {
            std::vector<Slot> next;
            for (std::size_t i = 0; i + 1 < round.size(); i += 2)
                next.push_back(cmp(round[i], round[i + 1]));
            if (round.size() % 2 == 1)
                next.push_back(round.back());
            round = std::move(next);
        }
        winner = round[0];
    }
    b.output(winner.val, 0);
    b.output(*winner.id.wire, 1);
    return b.build();
}

Circuit build_parallel_mult_circuit(std::uint32_t n_parties, std::uint32_t per_party)
{
    if (per_party == 0)
        throw InvalidCircuit{"parallel mult needs inputs"};
    CircuitBuilder b{"parallel_mult", n_parties, 0};
    std::vector<WireRef> xs;
    for (std::uint32_t p = 0; p < n_parties; ++p)
        for (std::uint32_t s = 0; s < per_party; ++s)
            xs.push_back(b.input_secret(p, s, 0xffff));
    if (xs.size() < 2)
        throw InvalidCircuit{"parallel mult needs at least two inputs"};
    std::uint32_t slot = 0;
    std::vector<WireRef> products;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2)
        products.push_back(b.mult(xs[i], xs[i + 1]));
    for (const auto& w : products)
        b.output(w, slot++);
    return b.build();
}

Circuit build_weighted_sum_circuit(std::uint32_t n)
{
    if (n == 0)
        throw InvalidCircuit{"weighted sum needs inputs"};
    CircuitBuilder b{"weighted_sum", n, n};
    WireRef acc = b.mult_by_const(b.input_secret(0, 0), 0);
    for (std::uint32_t i = 1; i < n; ++i)
        acc = b.add(acc, b.mult_by_const(b.input_secret(i, 0), i));
    b.output(acc, 0);
    return b.build();
}

Circuit build_compare_circuit(std::uint32_t n_parties)
{
    if (n_parties < 2)
        throw InvalidCircuit{"compare needs two contributing parties"};
    CircuitBuilder b{"compare", n_parties, 0};
    const auto x = b.input_secret(0, 0);
    const auto y = b.input_secret(1, 0);
    const auto [max, id] = b.compare(Operand::of(x), Operand::public_value(0), Operand::of(y), Operand::public_value(1));
    b.output(max, 0);
    b.output(id, 1);
    return b.build();
}

Circuit build_named_circuit(const std::string& builder, std::uint32_t n, std::uint32_t param)
{
    if (builder == "voting")
        return build_voting_circuit(n);
    if (builder == "auction")
        return build_auction_circuit(n);
    if (builder == "parallel_mult")
        return build_parallel_mult_circuit(n, param == 0 ? 2 : param);
    if (builder == "weighted_sum")
        return build_weighted_sum_circuit(n);
    if (builder == "compare")
        return build_compare_circuit(n);
    throw InvalidCircuit{"unknown circuit builder '" + builder + "'"};
}

std::set<std::uint32_t> topo_ready_set(const Circuit& c, const std::set<std::uint32_t>& completed)
{
    std::set<std::uint32_t> out;
    for (const auto& g : c.gates)
    {
        if (completed.contains(g.id))
            continue;
        const auto ops = g.operands();
        if (std::all_of(ops.begin(), ops.end(), [&](std::uint32_t o) { return completed.contains(o); }))
            out.insert(g.id);
    }
    return out;
}

std::vector<std::uint64_t> evaluate_plain(const Circuit& c, const std::vector<std::vector<std::uint64_t>>& secret,
    const std::vector<std::uint64_t>& public_inputs, std::uint64_t modulus)
{
    if (public_inputs.size() != c.public_input_count)
        throw ShapeMismatch{"public input count"};
    std::vector<std::array<FieldElement, 2>> wires(c.gates.size());
    std::vector<std::uint64_t> out(c.output_count, 0);
    auto wire = [&](WireRef w) { return wires[w.gate][w.port]; };
    auto operand = [&](const Operand& o) { return o.is_wire() ? wire(*o.wire) : FieldElement{o.constant % modulus, modulus}; };
    for (const auto& g : c.gates)
    {
        auto& w = wires[g.id];
        switch (g.kind)
        {
        case GateKind::input_secret:
            if (g.party >= secret.size() || g.slot >= secret[g.party].size())
                throw ShapeMismatch{"missing secret input"};
            if (secret[g.party][g.slot] > g.max_value)
                throw InputOutOfRange{"secret input above its bound"};
            w[0] = {secret[g.party][g.slot], modulus};
            break;
        case GateKind::input_public:
            w[0] = {public_inputs[g.slot] % modulus, modulus};
            break;
        case GateKind::add:
            w[0] = wire(g.a) + wire(g.b);
            break;
        case GateKind::mult_by_const:
            w[0] = wire(g.a) * FieldElement{public_inputs[g.public_ref] % modulus, modulus};
            break;
        case GateKind::mult:
            w[0] = wire(g.a) * wire(g.b);
            break;
        case GateKind::compare:
        {
            const auto va = operand(g.val_a);
            const auto vb = operand(g.val_b);
            if (va.value() >= vb.value())
                w = {va, operand(g.id_a)};
            else
                w = {vb, operand(g.id_b)};
            break;
        }
        case GateKind::output:
            out[g.slot] = wire(g.a).value();
            break;
        }
    }
    return out;
}

void check_ranges(const Circuit& c, const std::vector<std::uint64_t>& public_inputs)
{
    if (public_inputs.size() != c.public_input_count)
        throw ShapeMismatch{"circuit expects " + std::to_string(c.public_input_count) + " public inputs, got " +
                            std::to_string(public_inputs.size())};
    // Upper bounds per wire, saturating at 2^64-1.
    using u128 = unsigned __int128;
    constexpr u128 cap = ~std::uint64_t{0};
    auto sat = [](u128 v) { return static_cast<std::uint64_t>(v > cap ? cap : v); };
    std::vector<std::array<std::uint64_t, 2>> bound(c.gates.size(), {0, 0});
    auto wb = [&](WireRef w) { return bound[w.gate][w.port]; };
    auto ob = [&](const Operand& o) { return o.is_wire() ? wb(*o.wire) : o.constant; };
    const std::uint64_t limit = std::uint64_t{1} << c.bit_width;
    for (const auto& g : c.gates)
    {
        auto& b = bound[g.id];
        switch (g.kind)
        {
        case GateKind::input_secret:
            b[0] = g.max_value;
            break;
        case GateKind::input_public:
            b[0] = public_inputs[g.slot];
            break;
        case GateKind::add:
            b[0] = sat(u128{wb(g.a)} + wb(g.b));
            break;
        case GateKind::mult_by_const:
            b[0] = sat(u128{wb(g.a)} * public_inputs[g.public_ref]);
            break;
        case GateKind::mult:
            b[0] = sat(u128{wb(g.a)} * wb(g.b));
            break;
        case GateKind::compare:
            if (ob(g.val_a) >= limit || ob(g.val_b) >= limit)
                throw InputOutOfRange{"compare operand of gate " + std::to_string(g.id) + " may reach 2^" +
                                      std::to_string(c.bit_width)};
            b = {std::max(ob(g.val_a), ob(g.val_b)), std::max(ob(g.id_a), ob(g.id_b))};
            break;
        case GateKind::output:
            break;
        }
    }
}
}  // namespace mpcevm
