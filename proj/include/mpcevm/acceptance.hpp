// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace mpcevm
{
struct CriterionResult
{
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

/// Where the bundled scenarios live in the source tree.
std::string default_scenario_dir();

/// Runs the end-to-end acceptance checks; `only` limits them by number.
std::vector<CriterionResult> run_acceptance(
    const std::filesystem::path& scenario_dir, std::ostream& log, const std::set<int>& only = {});

/// One line per criterion; returns whether all passed.
bool print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);
}  // namespace mpcevm
