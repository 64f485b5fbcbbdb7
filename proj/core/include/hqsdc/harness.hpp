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

#ifndef HQSDC_HARNESS_HPP
#define HQSDC_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hqsdc/protocol.hpp"

namespace hqsdc {

/// Failure to read or write a file.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Harness configuration. `setup.protocol.seed` is ignored: session k runs
/// with seed derive_seed(seed, k).
struct HarnessConfig {
    std::size_t sessions = 1;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    std::uint64_t seed = 0;
    SessionSetup setup;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses the JSON config document. Every field is optional; unknown fields,
/// wrong types and out-of-range values raise ConfigError naming the field.
HarnessConfig parse_config(std::string_view text);
/// Throws IoError when the file cannot be read.
HarnessConfig load_config(const std::string& path);
/// Canonical JSON form of a config; parse_config(config_to_json(c)) == c.
std::string config_to_json(const HarnessConfig& cfg);

struct CheckTotals {
    std::size_t checked = 0;
    std::size_t pol_errors = 0;
    std::size_t spa_errors = 0;
    std::size_t any_errors = 0;

    double rate_pol() const noexcept;
    double rate_spa() const noexcept;
    /// Fraction of samples with an error in at least one DOF.
    double rate_any() const noexcept;
    void add(const CheckReport& r) noexcept;
};

struct RunStats {
    std::size_t sessions = 0;
    std::size_t accepted = 0;
    std::size_t aborted = 0;
    std::size_t aborted_too_few_pairs = 0;
    std::size_t aborted_trojan_alarm = 0;
    std::size_t aborted_first_check = 0;
    std::size_t aborted_second_check = 0;

    /// Pooled over every sample of every session that ran the check.
    CheckTotals first_check;
    CheckTotals second_check;

    /// Accepted sessions only.
    std::size_t message_pairs = 0;
    std::size_t message_bits_delivered = 0;
    std::size_t message_bit_errors = 0;
    double message_bit_error_rate = 0.0;
    /// Delivered message bits / (2 x message pairs); photon A travels twice.
    double bits_per_photon_transit = 0.0;

    std::size_t lost_pairs = 0;
    std::size_t trojan_probes_seen = 0;
    std::size_t trojan_filtered_out = 0;
    std::size_t trojan_pns_alarms = 0;

    std::size_t eve_guesses = 0;
    std::size_t eve_correct = 0;
    /// Present only when an adversary is configured.
    std::optional<double> eve_bell_guess_accuracy;

    /// Not part of the serialized stats, which must be reproducible.
    double wall_time_seconds = 0.0;
};

struct RunResult {
    RunStats stats;
    /// Per session: a header line followed by the session's event lines.
    std::vector<std::string> transcript_lines;
};

/// Runs cfg.sessions sessions, possibly in parallel, merging in session order.
RunResult run_sessions(const HarnessConfig& cfg, bool transcripts = false);

/// Stats document. A function of (config, seed) only.
std::string stats_to_json(const RunStats& stats, const HarnessConfig& cfg);

/// CLI `simulate`: loads the config, overrides its seed, writes the stats
/// document to out_path and, when requested, transcripts to
/// out_path + ".transcripts.jsonl".
RunStats run(const std::string& config_path, std::uint64_t seed, const std::string& out_path,
             bool transcripts = false);

/// Re-runs the session described by a transcript header line.
SessionOutcome replay_session(std::string_view header_line);

/// Sweep axes: pauli_p_pol, pauli_p_spa, pauli_p (both DOFs), loss_prob,
/// strategy, basis_policy, legs, pns_kind, first_samples (absolute count),
/// sample_fraction_first, sample_fraction_second, error_threshold, r, phi.
std::vector<std::string> sweep_axes();

struct SweepRow {
    std::string axis;
    std::string value;
    RunStats stats;
};

/// One run per value of `axis`, each applied on top of `base`. Throws
/// ConfigError on an empty grid, an unknown axis or an invalid value.
std::vector<SweepRow> attack_sweep(const HarnessConfig& base, std::string_view axis,
                                   const std::vector<std::string>& values);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// CLI `attack-sweep`.
std::vector<SweepRow> attack_sweep(const std::string& config_path, std::string_view axis,
                                   const std::vector<std::string>& values, const std::string& out_path);

/// Exact first-check error probabilities of a noiseless session fed by the
/// source, per basis and averaged over Alice's uniform basis choice.
struct SourceScanRow {
    double r = 0.0;
    double phi = 0.0;
    double fidelity = 0.0;
    double err_pol = 0.0;
    double err_spa = 0.0;
    double err_pol_z = 0.0;
    double err_pol_x = 0.0;
    double err_spa_z = 0.0;
    double err_spa_x = 0.0;
};

std::vector<SourceScanRow> source_fidelity_scan(const std::vector<double>& r_grid,
                                                const std::vector<double>& phi_grid);
std::string source_scan_to_csv(const std::vector<SourceScanRow>& rows);
/// CLI `source-scan`.
std::vector<SourceScanRow> source_fidelity_scan(const std::vector<double>& r_grid,
                                                const std::vector<double>& phi_grid, const std::string& out_path);

/// Comma separated list parser for CLI grids; throws ConfigError.
std::vector<std::string> split_list(std::string_view list);
std::vector<double> parse_number_list(std::string_view list);

}  // namespace hqsdc

#endif  // HQSDC_HARNESS_HPP
