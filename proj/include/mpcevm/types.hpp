// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace mpcevm
{
using Word = std::uint64_t;
using Hash32 = std::array<std::uint8_t, 32>;

struct Address
{
    std::uint64_t value = 0;

    friend constexpr auto operator<=>(const Address&, const Address&) = default;
    explicit constexpr operator bool() const noexcept { return value != 0; }
};

inline constexpr Address txmgr_address{0x0888000000000008ULL};
inline constexpr Address gas_sink_address{0x0000000000000feeULL};

std::string to_hex(Address a);
std::string to_hex(const Hash32& h);
Address parse_address(std::string_view hex);

/// EOAs get addresses from their scenario label.
Address address_from_label(std::string_view label);
Address contract_address(Address creator, std::uint64_t nonce);

/// Incremental SHA-256 with length-prefixed framing helpers.
class Sha256
{
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& bytes(const void* data, std::size_t size);
    Sha256& u64(std::uint64_t v);
    Sha256& str(std::string_view s);
    Sha256& hash(const Hash32& h);
    Hash32 finish();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Hash32 sha256(std::string_view data);
}  // namespace mpcevm
