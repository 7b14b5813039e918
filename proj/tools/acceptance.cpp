// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any failure.

#include "mpcevm/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"mpcevm acceptance checks"};
    std::string dir = mpcevm::default_scenario_dir();
    std::vector<int> only;
    app.add_option("--scenarios", dir, "directory with the bundled scenarios")->check(CLI::ExistingDirectory);
    app.add_option("criteria", only, "run only these criteria (1-10)");
    CLI11_PARSE(app, argc, argv);

    const auto results = mpcevm::run_acceptance(dir, std::cerr, {only.begin(), only.end()});
    return mpcevm::print_acceptance(results, std::cout) ? 0 : 1;
}
