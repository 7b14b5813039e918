// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/state.hpp"

namespace mpcevm
{
void merge_writes(WriteSet& into, const WriteSet& from)
{
    for (const auto& [addr, d] : from)
    {
        auto& dst = into[addr];
        dst.nonce_add += d.nonce_add;
        dst.balance_add += d.balance_add;
        for (const auto& [k, v] : d.storage)
            dst.storage[k] = v;
        if (d.code)
            dst.code = d.code;
        dst.destroyed = dst.destroyed || d.destroyed;
    }
}

const Account* WorldState::find(Address a) const
{
    auto it = accounts_.find(a);
    return it == accounts_.end() ? nullptr : &it->second;
}

namespace
{
Word shifted(Word balance, std::int64_t delta)
{
    if (delta < 0 && static_cast<Word>(-delta) > balance)
        throw NegativeBalance{};
    return balance + static_cast<Word>(delta);
}
}  // namespace

void WorldState::apply(const WriteSet& writes)
{
    // Check first so a failure leaves nothing half-applied.
    for (const auto& [addr, d] : writes)
    {
        const Account* acc = find(addr);
        shifted(acc ? acc->balance : 0, d.balance_add);
    }
    for (const auto& [addr, d] : writes)
    {
        if (d.destroyed)
        {
            accounts_.erase(addr);
            continue;
        }
        Account& acc = accounts_[addr];
        acc.nonce += d.nonce_add;
        acc.balance = shifted(acc.balance, d.balance_add);
        if (d.code)
            acc.code = d.code;
        for (const auto& [k, v] : d.storage)
        {
            if (v == 0)
                acc.storage.erase(k);
            else
                acc.storage[k] = v;
        }
    }
}

void WorldState::credit(Address a, Word amount)
{
    accounts_[a].balance += amount;
}

void WorldState::debit(Address a, Word amount)
{
    Account& acc = accounts_[a];
    if (acc.balance < amount)
        throw NegativeBalance{};
    acc.balance -= amount;
}

StateView::StateView(const WorldState& base, WriteSet& writes, const WriteSet* under, AccessHook hook)
  : base_{base}, writes_{writes}, under_{under}, hook_{std::move(hook)}
{}

const AccountDelta* StateView::delta(const WriteSet* ws, Address a) const
{
    if (!ws)
        return nullptr;
    auto it = ws->find(a);
    return it == ws->end() ? nullptr : &it->second;
}

bool StateView::exists(Address a) const
{
    touch(a, AccessKind::read);
    const auto* w = delta(&writes_, a);
    if (w && w->destroyed)
        return false;
    return base_.find(a) || w || delta(under_, a);
}

std::uint64_t StateView::nonce(Address a) const
{
    touch(a, AccessKind::read);
    const Account* acc = base_.find(a);
    std::uint64_t n = acc ? acc->nonce : 0;
    for (const auto* d : {delta(under_, a), delta(&writes_, a)})
        if (d)
            n += d->nonce_add;
    return n;
}

Word StateView::balance(Address a) const
{
    touch(a, AccessKind::read);
    const Account* acc = base_.find(a);
    std::int64_t adj = 0;
    for (const auto* d : {delta(under_, a), delta(&writes_, a)})
        if (d)
            adj += d->balance_add;
    return shifted(acc ? acc->balance : 0, adj);
}

Word StateView::sload(Address a, Word key) const
{
    touch(a, AccessKind::read);
    for (const auto* d : {delta(&writes_, a), delta(under_, a)})
        if (d)
            if (auto it = d->storage.find(key); it != d->storage.end())
                return it->second;
    const Account* acc = base_.find(a);
    if (!acc)
        return 0;
    auto it = acc->storage.find(key);
    return it == acc->storage.end() ? 0 : it->second;
}

std::shared_ptr<const ContractCode> StateView::code(Address a) const
{
    touch(a, AccessKind::code);
    for (const auto* d : {delta(&writes_, a), delta(under_, a)})
        if (d && d->code)
            return d->destroyed ? nullptr : d->code;
    if (const auto* w = delta(&writes_, a); w && w->destroyed)
        return nullptr;
    const Account* acc = base_.find(a);
    return acc ? acc->code : nullptr;
}

void StateView::sstore(Address a, Word key, Word value)
{
    touch(a, AccessKind::write);
    writes_[a].storage[key] = value;
}

bool StateView::transfer(Address from, Address to, Word amount)
{
    if (amount == 0)
        return true;
    if (balance(from) < amount)
        return false;
    touch(from, AccessKind::write);
    touch(to, AccessKind::write);
    writes_[from].balance_add -= static_cast<std::int64_t>(amount);
    writes_[to].balance_add += static_cast<std::int64_t>(amount);
    return true;
}

void StateView::bump_nonce(Address a)
{
    touch(a, AccessKind::write);
    writes_[a].nonce_add += 1;
}

void StateView::deploy(Address a, std::shared_ptr<const ContractCode> code)
{
    touch(a, AccessKind::write);
    writes_[a].code = std::move(code);
}

void StateView::destroy(Address a, Address beneficiary)
{
    const Word bal = balance(a);
    transfer(a, beneficiary, bal);
    writes_[a].destroyed = true;
}
}  // namespace mpcevm
