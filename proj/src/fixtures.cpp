// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/fixtures.hpp"

#include <mutex>

namespace mpcevm
{
std::shared_ptr<const ContractCode> load_fixture(const std::string& name)
{
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const ContractCode>> cache;
    std::lock_guard lock{mu};
    if (auto it = cache.find(name); it != cache.end())
        return it->second;
    const auto& sources = fixture_sources();
    auto src = sources.find(name);
    if (src == sources.end())
        return nullptr;
    auto code = std::make_shared<const ContractCode>(assemble(src->second, name));
    cache.emplace(name, code);
    return code;
}
}  // namespace mpcevm
