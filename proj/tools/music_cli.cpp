/*
 * Copyright 2026 The music-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <music/harness/experiment.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void dump_profiles(std::ostream& os, const music::ProfileSet& p)
{
    char line[256];
    os << "# link profiles (per 100 KB; values at 2048 KB in parentheses)\n";
    for (const auto& l : p.links()) {
        std::snprintf(line, sizeof line, "link %-10s %-6s delay_ms=%.4f (%.1f) energy_mj=%.4f (%.1f)\n",
                      music::to_string(l.link), music::to_string(l.tier), l.delay_per_100kb,
                      l.delay_per_100kb * music::kReferenceKB / 100.0, l.energy_per_100kb,
                      l.energy_per_100kb * music::kReferenceKB / 100.0);
        os << line;
    }
    os << "# compute profiles (per 100 KB)\n";
    for (const auto& c : p.computes()) {
        std::snprintf(line, sizeof line, "compute %-8s class='%s' delay_ms=%.4f device_energy_mj=%.4f\n",
                      music::to_string(c.tier), c.service_class.c_str(), c.proc_delay_per_100kb,
                      c.device_power_per_100kb);
        os << line;
    }
    const auto& m = p.price();
    std::snprintf(line, sizeof line,
                  "# prices\nprice public_compute_usd_per_h=%.4f storage_usd_per_gb=%.4f transfer_usd_per_gb=%.4f "
                  "streaming_usd_per_h=%.4f cellular_usd_per_gb=%.4f local_and_wifi_usd=%.4f\n",
                  m.public_compute_rate, m.storage_rate, m.transfer_rate, m.streaming_rate, m.cellular_rate,
                  m.local_and_wifi_price);
    os << line;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mobility-aware service allocation on a 2-tier cloud: experiment runner"};
    std::string scenario_path, algorithm, output, format = "csv";
    std::optional<int> users, groups, repetitions;
    std::optional<double> uncertainty;
    std::optional<std::uint64_t> seed;
    bool public_only = false, dump = false;
    app.add_option("--scenario", scenario_path, "Scenario file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--algorithm", algorithm, "Algorithm to run")
        ->check(CLI::IsMember({"music", "gmusic", "rsa", "greedy", "bruteforce", "all"}));
    app.add_option("--users", users, "Number of mobile users")->check(CLI::NonNegativeNumber);
    app.add_option("--groups", groups, "Number of user groups (0: single users)")->check(CLI::NonNegativeNumber);
    app.add_option("--uncertainty", uncertainty, "Uncertainty level in percent")->check(CLI::Range(0.0, 100.0));
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--repetitions", repetitions, "Repetitions")->check(CLI::PositiveNumber);
    app.add_option("--output", output, "Output file (default: stdout)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "table"}));
    app.add_flag("--public-only", public_only, "Withdraw every local-cloud service (baseline mode)");
    app.add_flag("--dump-profiles", dump, "Print the QoS profile tables and exit");
    CLI11_PARSE(app, argc, argv);

    try {
        music::Scenario sc;
        if (!scenario_path.empty())
            sc = music::load_scenario(scenario_path);
        if (dump) {
            dump_profiles(std::cout, sc.profiles);
            return 0;
        }
        if (users)
            sc.users = *users;
        if (groups)
            sc.groups = *groups;
        if (uncertainty)
            sc.uncertainty_pct = {*uncertainty};
        if (seed)
            sc.seed = *seed;
        if (repetitions)
            sc.repetitions = *repetitions;
        if (algorithm == "all")
            sc.algorithms = {sc.groups > 0 ? "gmusic" : "music", "rsa", "greedy", "bruteforce"};
        else if (!algorithm.empty())
            sc.algorithms = {algorithm};
        if (sc.users == 0 && scenario_path.empty())
            throw music::ScenarioError("users: give --users or a scenario file");
        sc.validate();

        music::ExperimentOptions opt;
        opt.public_only = public_only;
        opt.progress = [](const std::string& s) { std::cerr << s << '\n'; };
        const auto rows = music::run_experiment(sc, opt);
        for (const auto& r : rows)
            if (!r.feasible)
                std::cerr << "warning: infeasible result: algorithm=" << r.algorithm << " repetition=" << r.repetition
                          << " uncertainty=" << r.uncertainty_pct << " fixed=" << r.fixed_dimension << '\n';

        std::ostringstream out;
        if (format == "csv")
            music::write_csv(out, rows);
        else
            music::write_table(out, rows);
        if (output.empty()) {
            std::cout << out.str();
        } else {
            std::ofstream f(output, std::ios::binary);
            if (!f)
                throw music::InvalidInput("cannot open output file " + output);
            f << out.str();
            if (!f)
                throw music::InvalidInput("failed writing " + output);
        }
    } catch (const music::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
