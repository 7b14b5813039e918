// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>

namespace mpcevm
{
struct ContractCode;

struct Account
{
    std::uint64_t nonce = 0;
    Word balance = 0;
    std::map<Word, Word> storage;
    std::shared_ptr<const ContractCode> code;
};

struct NegativeBalance : std::runtime_error
{
    NegativeBalance() : std::runtime_error{"balance would go negative"} {}
};

/// Uncommitted changes to one account. Balances and nonces are deltas so a
/// saved write set stays valid while other transactions move the same account.
struct AccountDelta
{
    std::uint64_t nonce_add = 0;
    std::int64_t balance_add = 0;
    std::map<Word, Word> storage;
    std::shared_ptr<const ContractCode> code;
    bool destroyed = false;
};

using WriteSet = std::map<Address, AccountDelta>;

/// Folds `from` into `into`; later storage writes win.
void merge_writes(WriteSet& into, const WriteSet& from);

class WorldState
{
public:
    const Account* find(Address a) const;
    Account& at(Address a) { return accounts_[a]; }
    const std::map<Address, Account>& accounts() const noexcept { return accounts_; }

    /// Throws NegativeBalance and leaves the state untouched on failure.
    void apply(const WriteSet& writes);
    void credit(Address a, Word amount);
    void debit(Address a, Word amount);

private:
    std::map<Address, Account> accounts_;
};

enum class AccessKind
{
    read,
    write,
    /// Code is immutable, so reading it is not a state observation.
    code,
};

using AccessHook = std::function<void(Address, AccessKind)>;

/// Committed state overlaid with an optional read-only layer and a write set.
class StateView
{
public:
    StateView(const WorldState& base, WriteSet& writes, const WriteSet* under = nullptr, AccessHook hook = {});

    bool exists(Address a) const;
    std::uint64_t nonce(Address a) const;
    Word balance(Address a) const;
    Word sload(Address a, Word key) const;
    std::shared_ptr<const ContractCode> code(Address a) const;

    void sstore(Address a, Word key, Word value);
    /// False if `from` cannot cover the amount.
    bool transfer(Address from, Address to, Word amount);
    void bump_nonce(Address a);
    void deploy(Address a, std::shared_ptr<const ContractCode> code);
    void destroy(Address a, Address beneficiary);

    WriteSet& writes() noexcept { return writes_; }
    const WriteSet& writes() const noexcept { return writes_; }

private:
    void touch(Address a, AccessKind k) const
    {
        if (hook_)
            hook_(a, k);
    }
    const AccountDelta* delta(const WriteSet* ws, Address a) const;

    const WorldState& base_;
    WriteSet& writes_;
    const WriteSet* under_;
    AccessHook hook_;
};
}  // namespace mpcevm
