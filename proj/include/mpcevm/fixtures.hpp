// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/vm.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace mpcevm
{
/// Bundled contract sources keyed by file stem (mpc_vote, lock_c1, ...).
const std::map<std::string, std::string_view>& fixture_sources();

/// Assembles a bundled fixture once and caches it. Nullptr for unknown names.
std::shared_ptr<const ContractCode> load_fixture(const std::string& name);
}  // namespace mpcevm
