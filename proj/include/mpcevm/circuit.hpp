// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/field.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpcevm
{
inline constexpr unsigned default_bit_width = 32;

struct InvalidCircuit : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct UnknownCircuit : std::out_of_range
{
    explicit UnknownCircuit(std::uint64_t cid) : std::out_of_range{"unknown circuit id " + std::to_string(cid)} {}
};

struct InputOutOfRange : std::out_of_range
{
    using std::out_of_range::out_of_range;
};

struct ShapeMismatch : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

/// Port 1 exists only on COMPARE (the max id).
struct WireRef
{
    std::uint32_t gate = 0;
    std::uint8_t port = 0;

    friend constexpr auto operator<=>(const WireRef&, const WireRef&) = default;
};

/// A wire or a public constant. Leaf COMPAREs take constant ids.
struct Operand
{
    std::optional<WireRef> wire;
    std::uint64_t constant = 0;

    static Operand of(WireRef w) { return {w, 0}; }
    static Operand public_value(std::uint64_t v) { return {std::nullopt, v}; }
    bool is_wire() const noexcept { return wire.has_value(); }
};

enum class GateKind
{
    input_secret,
    input_public,
    add,
    mult_by_const,
    mult,
    compare,
    output,
};

const char* to_string(GateKind kind) noexcept;

struct Gate
{
    std::uint32_t id = 0;
    GateKind kind = GateKind::add;
    std::uint32_t party = 0;      // input_secret
    std::uint32_t slot = 0;       // input_secret, input_public, output
    std::uint64_t max_value = 0;  // input_secret, inclusive
    WireRef a;                    // add, mult, mult_by_const, output
    WireRef b;                    // add, mult
    std::uint32_t public_ref = 0; // mult_by_const
    Operand val_a, id_a, val_b, id_b;

    /// Gate ids this gate reads, in operand order.
    std::vector<std::uint32_t> operands() const;
};

struct Circuit
{
    std::string name;
    std::vector<Gate> gates;
    std::uint32_t n_parties = 0;
    std::vector<std::uint32_t> secret_input_shape;
    std::uint32_t public_input_count = 0;
    std::uint32_t output_count = 0;
    unsigned bit_width = default_bit_width;

    std::size_t count(GateKind kind) const;
};

/// Throws InvalidCircuit on forward or dangling references and shape errors.
void validate(const Circuit& c);

class CircuitBuilder
{
public:
    CircuitBuilder(std::string name, std::uint32_t n_parties, std::uint32_t public_inputs);

    WireRef input_secret(std::uint32_t party, std::uint32_t slot,
        std::uint64_t max_value = (std::uint64_t{1} << default_bit_width) - 1);
    WireRef input_public(std::uint32_t slot);
    WireRef add(WireRef a, WireRef b);
    WireRef mult_by_const(WireRef a, std::uint32_t public_ref);
    WireRef mult(WireRef a, WireRef b);
    std::pair<WireRef, WireRef> compare(Operand val_a, Operand id_a, Operand val_b, Operand id_b);
    void output(WireRef src, std::uint32_t slot);

    Circuit build();

private:
    Gate& push(GateKind kind);
    Circuit c_;
};

class CircuitRegistry
{
public:
    std::uint32_t register_circuit(Circuit c);
    const Circuit& get(std::uint64_t cid) const;
    std::shared_ptr<const Circuit> share(std::uint64_t cid) const;
    bool contains(std::uint64_t cid) const noexcept { return cid < circuits_.size(); }
    std::size_t size() const noexcept { return circuits_.size(); }

private:
    std::vector<std::shared_ptr<const Circuit>> circuits_;
};

/// Two proposals; x[i][0..1] are ballot bits, w[i] is public.
Circuit build_voting_circuit(std::uint32_t n);

/// Ten bidders use the fixed bracket of the reference contract; any other n
/// uses a balanced left-first tournament.
Circuit build_auction_circuit(std::uint32_t n = 10);

/// Each party contributes `per_party` values; consecutive inputs are multiplied
/// pairwise, all products independent.
Circuit build_parallel_mult_circuit(std::uint32_t n_parties, std::uint32_t per_party);

/// sum_i w[i] * x[i]; no multiplications.
Circuit build_weighted_sum_circuit(std::uint32_t n);

/// Party 0 and 1 each submit one value; outputs (max, id).
Circuit build_compare_circuit(std::uint32_t n_parties);

/// Dispatches on a builder name as used in scenario files.
Circuit build_named_circuit(const std::string& builder, std::uint32_t n, std::uint32_t param);

std::set<std::uint32_t> topo_ready_set(const Circuit& c, const std::set<std::uint32_t>& completed);

/// Plaintext semantics. secret[party][slot]; COMPARE keeps the first pair on ties.
std::vector<std::uint64_t> evaluate_plain(const Circuit& c,
    const std::vector<std::vector<std::uint64_t>>& secret, const std::vector<std::uint64_t>& public_inputs,
    std::uint64_t modulus = default_prime);

/// Throws InputOutOfRange when a COMPARE operand can reach 2^bit_width for the
/// given public inputs, or ShapeMismatch when the public vector has the wrong size.
void check_ranges(const Circuit& c, const std::vector<std::uint64_t>& public_inputs);
}  // namespace mpcevm
