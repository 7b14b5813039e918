// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/engine.hpp"

#include <map>
#include <memory>
#include <vector>

namespace mpcevm
{
struct LocalSessionOptions
{
    EngineConfig config;
    std::uint64_t seed = 1;
    /// 0-based committee position to fault.
    std::map<std::uint32_t, FaultProfile> faults;
    std::uint64_t max_blocks = 5000;
};

struct LocalSession
{
    std::shared_ptr<SessionBoard> board;
    std::vector<std::unique_ptr<PartyEngine>> parties;
    /// [outputs..., flag, index]; empty if the block budget ran out.
    std::vector<std::uint64_t> result;
    std::uint64_t blocks = 0;
};

/// Runs one session with an idealised broadcast channel and quorum logic:
/// every broadcast lands in the next block, READY approves at 2t+1 with no
/// queue limit. Lets engine behaviour be tested without a ledger.
LocalSession run_local_session(const Circuit& c, const std::vector<std::uint64_t>& public_inputs,
    const std::vector<std::vector<std::uint64_t>>& secrets, std::uint32_t n, const LocalSessionOptions& options = {});

std::vector<std::uint64_t> cheater_result(std::size_t output_count, std::uint32_t index);
}  // namespace mpcevm
