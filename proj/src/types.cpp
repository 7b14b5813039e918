// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/types.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace mpcevm
{
namespace
{
constexpr char hex_digits[] = "0123456789abcdef";

std::uint64_t first_word(const Hash32& h)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | h[i];
    return v;
}
}  // namespace

std::string to_hex(Address a)
{
    std::string out = "0x";
    for (int shift = 60; shift >= 0; shift -= 4)
        out.push_back(hex_digits[(a.value >> shift) & 0xf]);
    return out;
}

std::string to_hex(const Hash32& h)
{
    std::string out;
    out.reserve(64);
    for (auto b : h)
    {
        out.push_back(hex_digits[b >> 4]);
        out.push_back(hex_digits[b & 0xf]);
    }
    return out;
}

Address parse_address(std::string_view hex)
{
    if (hex.starts_with("0x"))
        hex.remove_prefix(2);
    if (hex.empty() || hex.size() > 16)
        throw std::invalid_argument{"bad address literal"};
    std::uint64_t v = 0;
    for (char c : hex)
    {
        const char* p = std::strchr(hex_digits, c >= 'A' && c <= 'F' ? c - 'A' + 'a' : c);
        if (p == nullptr || c == '\0')
            throw std::invalid_argument{"bad address literal"};
        v = (v << 4) | static_cast<std::uint64_t>(p - hex_digits);
    }
    return {v};
}

Address address_from_label(std::string_view label)
{
    Sha256 h;
    h.str("eoa").str(label);
    return {first_word(h.finish())};
}

Address contract_address(Address creator, std::uint64_t nonce)
{
    Sha256 h;
    h.str("create").u64(creator.value).u64(nonce);
    return {first_word(h.finish())};
}

struct Sha256::Impl
{
    EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : impl_{std::make_unique<Impl>()}
{
    impl_->ctx = EVP_MD_CTX_new();
    if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error{"sha256 init failed"};
}

Sha256::~Sha256()
{
    EVP_MD_CTX_free(impl_->ctx);
}

Sha256& Sha256::bytes(const void* data, std::size_t size)
{
    EVP_DigestUpdate(impl_->ctx, data, size);
    return *this;
}

Sha256& Sha256::u64(std::uint64_t v)
{
    std::uint8_t buf[8];
    for (int i = 7; i >= 0; --i, v >>= 8)
        buf[i] = static_cast<std::uint8_t>(v);
    return bytes(buf, sizeof buf);
}

Sha256& Sha256::str(std::string_view s)
{
    u64(s.size());
    return bytes(s.data(), s.size());
}

Sha256& Sha256::hash(const Hash32& h)
{
    return bytes(h.data(), h.size());
}

Hash32 Sha256::finish()
{
    Hash32 out{};
    unsigned len = 0;
    EVP_DigestFinal_ex(impl_->ctx, out.data(), &len);
    return out;
}

Hash32 sha256(std::string_view data)
{
    Sha256 h;
    h.bytes(data.data(), data.size());
    return h.finish();
}
}  // namespace mpcevm
