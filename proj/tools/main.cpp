// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

// Scenario runner: run / throughput / selftest.

#include "mpcevm/acceptance.hpp"
#include "mpcevm/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace mpcevm;

namespace
{
int run_cmd(const std::string& file, std::optional<std::uint64_t> seed, std::optional<std::uint64_t> latency,
    const std::string& report_path, const std::string& trace_path)
{
    const Scenario s = load_scenario(file);
    std::ofstream trace_file;
    RunOptions opt;
    opt.seed = seed;
    opt.latency = latency;
    if (!trace_path.empty())
    {
        trace_file.open(trace_path);
        opt.trace = &trace_file;
    }
    const RunOutcome out = run_scenario(s, opt);
    const std::string text = out.report.dump(2) + "\n";
    if (!report_path.empty())
        std::ofstream{report_path} << text;
    else
        std::cout << text;

    for (const auto& j : out.report["sessions"])
        if (j.contains("verdict"))
            std::cerr << "session " << j["contract"].get<std::string>() << "#" << j["invocation"] << ": "
                      << j["verdict"].get<std::string>() << "\n";
    for (const auto& j : out.report["transactions"])
        if (j.contains("verdict") && j["verdict"] != "PASS")
            std::cerr << "tx '" << j["label"].get<std::string>() << "': " << j["outcome"].get<std::string>()
                      << ", expected " << j["expect"].get<std::string>() << "\n";
    for (const auto& j : out.report["checks"])
        if (j["verdict"] != "PASS")
            std::cerr << "check '" << j["label"].get<std::string>() << "' failed\n";
    std::cerr << s.name << ": " << out.report["verdict"].get<std::string>() << " (audit "
              << out.report["audit"]["verdict"].get<std::string>() << ")\n";
    return out.exit_code();
}

int throughput_cmd(const std::string& baseline, const std::string& mixed, const std::string& sync)
{
    const RunOutcome b = run_scenario(load_scenario(baseline));
    const RunOutcome m = run_scenario(load_scenario(mixed));
    std::cout << std::fixed << std::setprecision(2);
    std::cout << "baseline  " << mean_regular(b) << " regular tx/block\n";
    std::cout << "mixed     " << mean_regular(m) << " regular tx/block, degradation " << degradation(b, m)
              << "%\n";
    int code = std::max(b.exit_code(), m.exit_code());
    if (!sync.empty())
    {
        const RunOutcome s = run_scenario(load_scenario(sync));
        std::cout << "sync      " << mean_regular(s) << " regular tx/block, degradation " << degradation(b, s)
                  << "%\n";
        code = std::max(code, s.exit_code());
    }
    return code;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mpcevm scenario runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one scenario and print its report");
    std::string file, report, trace;
    std::optional<std::uint64_t> seed, latency;
    run->add_option("scenario", file, "scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--latency", latency, "override the per-link latency in ticks");
    run->add_option("--report", report, "write the JSON report here instead of stdout");
    run->add_option("--trace", trace, "write the JSON-lines event trace here");

    auto* tp = app.add_subcommand("throughput", "compare regular commits per block");
    std::string baseline, mixed, sync;
    tp->add_option("--baseline", baseline, "scenario without MPC load")->required()->check(CLI::ExistingFile);
    tp->add_option("--mixed", mixed, "same workload with MPC load")->required()->check(CLI::ExistingFile);
    tp->add_option("--sync", sync, "optional synchronous-MPC contrast run")->check(CLI::ExistingFile);

    auto* self = app.add_subcommand("selftest", "run the bundled acceptance suite");
    std::string dir = default_scenario_dir();
    self->add_option("--scenarios", dir, "directory with the bundled scenarios");

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*run)
            return run_cmd(file, seed, latency, report, trace);
        if (*tp)
            return throughput_cmd(baseline, mixed, sync);
        return print_acceptance(run_acceptance(dir, std::cerr), std::cout) ? 0 : 1;
    }
    catch (const ScenarioInvalid& e)
    {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
