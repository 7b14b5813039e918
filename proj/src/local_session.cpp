// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/local_session.hpp"

#include <set>

namespace mpcevm
{
std::vector<std::uint64_t> cheater_result(std::size_t output_count, std::uint32_t index)
{
    std::vector<std::uint64_t> out(output_count, 0);
    out.push_back(1);
    out.push_back(index);
    return out;
}

LocalSession run_local_session(const Circuit& c, const std::vector<std::uint64_t>& public_inputs,
    const std::vector<std::vector<std::uint64_t>>& secrets, std::uint32_t n, const LocalSessionOptions& options)
{
    const unsigned t = options.config.t;
    auto program = std::make_shared<const Program>(compile_program(c, public_inputs, options.config.kappa));
    LocalSession s;
    s.board = std::make_shared<SessionBoard>(program, n, options.config, 0);
    for (std::uint32_t i = 0; i < n; ++i)
    {
        auto inputs = i < secrets.size() ? secrets[i] : std::vector<std::uint64_t>{};
        s.parties.push_back(
            std::make_unique<PartyEngine>(i + 1, s.board, std::move(inputs), derive_seed(options.seed, i + 1)));
        if (auto f = options.faults.find(i); f != options.faults.end())
            s.parties.back()->set_fault(f->second);
    }

    auto deliver = [&] {
        for (auto& p : s.parties)
            for (const auto& m : p->take_p2p())
                s.parties[m.party - 1]->receive(m);
        for (auto& p : s.parties)
            p->advance();
    };
    for (auto& p : s.parties)
        p->start();
    deliver();

    std::map<std::uint32_t, std::set<std::uint32_t>> ready, accusations;
    std::map<std::vector<std::uint64_t>, std::set<std::uint32_t>> attest;
    for (std::uint64_t h = 1; h <= options.max_blocks && s.result.empty(); ++h)
    {
        s.blocks = h;
        s.board->begin_block(h);
        for (auto& p : s.parties)
        {
            const std::uint32_t who = p->index();
            for (const auto& m : p->take_broadcasts())
            {
                if (!s.result.empty())
                    break;
                s.board->ingest(who, m);
                if (m.kind == MsgKind::ready && ready[m.op].insert(who).second && ready[m.op].size() == 2 * t + 1)
                    s.board->approve(m.op);
                if (m.kind != MsgKind::accuse || m.party < 1 || m.party > n)
                    continue;
                auto& accusers = accusations[m.party];
                accusers.insert(who);
                if (accusers.size() >= t + 1)
                    s.result = cheater_result(program->outputs.size(), m.party - 1);
            }
            if (auto a = p->take_attestation(); a && s.result.empty())
            {
                auto& voters = attest[*a];
                voters.insert(who);
                if (voters.size() >= t + 1)
                    s.result = *a;
            }
        }
        if (!s.result.empty())
            break;
        s.board->end_block();
        for (auto& p : s.parties)
        {
            p->on_block();
            p->advance();
        }
        deliver();
    }
    s.board->finish();
    return s;
}
}  // namespace mpcevm
