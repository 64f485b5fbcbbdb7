// Copyright 2026 The hqsdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hqsdc: run hyperdense-coding QSDC sessions, adversary sweeps and source scans.
//
//   hqsdc simulate --config PATH --seed N --out PATH [--transcripts]
//   hqsdc attack-sweep --config PATH --axis NAME --values LIST --out PATH
//   hqsdc source-scan --r LIST --phi LIST --out PATH

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hqsdc/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitOther = 1;

void print_summary(const hqsdc::RunStats& st) {
    std::cout << "sessions " << st.sessions << "  accepted " << st.accepted << "  aborted " << st.aborted << '\n'
              << "first check:  samples " << st.first_check.checked << "  error_pol " << st.first_check.rate_pol()
              << "  error_spa " << st.first_check.rate_spa() << '\n'
              << "second check: samples " << st.second_check.checked << "  error_pol "
              << st.second_check.rate_pol() << "  error_spa " << st.second_check.rate_spa() << '\n'
              << "message bit error rate " << st.message_bit_error_rate << "  bits per photon transit "
              << st.bits_per_photon_transit << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperdense-coding quantum secure direct communication simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool transcripts = false;
    auto* simulate = app.add_subcommand("simulate", "Run the configured sessions and write a stats document");
    simulate->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--seed", seed, "Master seed")->required();
    simulate->add_option("--out", out_path, "Stats output path")->required();
    simulate->add_flag("--transcripts", transcripts, "Also write <out>.transcripts.jsonl");

    std::string axis;
    std::string values;
    auto* sweep = app.add_subcommand("attack-sweep", "Run one configuration per grid value and write CSV");
    sweep->add_option("--config", config_path, "Base config file (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--axis", axis, "Axis name")->required();
    sweep->add_option("--values", values, "Comma separated grid values")->required();
    sweep->add_option("--out", out_path, "CSV output path")->required();

    std::string r_list;
    std::string phi_list;
    auto* scan = app.add_subcommand("source-scan", "Tabulate source fidelity and check error rates");
    scan->add_option("--r", r_list, "Comma separated r values")->required();
    scan->add_option("--phi", phi_list, "Comma separated phi values (radians; pi, K*pi/D accepted)")->required();
    scan->add_option("--out", out_path, "CSV output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const auto stats = hqsdc::run(config_path, seed, out_path, transcripts);
            print_summary(stats);
            std::cerr << "wall time " << stats.wall_time_seconds << " s\n";
        } else if (*sweep) {
            const auto rows = hqsdc::attack_sweep(config_path, axis, hqsdc::split_list(values), out_path);
            std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
        } else if (*scan) {
            const auto rows = hqsdc::source_fidelity_scan(hqsdc::parse_number_list(r_list),
                                                          hqsdc::parse_number_list(phi_list), out_path);
            std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
        }
    } catch (const hqsdc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hqsdc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return 0;
}
