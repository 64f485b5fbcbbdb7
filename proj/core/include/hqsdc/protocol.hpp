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

// The QSDC session state machine.
//
// Bob prepares a block of hyperentangled pairs, keeps photon B of every pair
// (sequence S_B) and sends photon A (sequence S_A) to Alice. Alice and Bob run
// a first eavesdropping check on a random sample, Alice encodes the message
// and a random redundancy on a second sample with the 16 encoding unitaries,
// sends S_A back, and Bob decodes every pair with a complete hyper-Bell
// analysis and runs the second check before accepting the message.
//
// Phases advance strictly in the order
//
//   Prepared -> SAInFlight1 -> FirstCheck -> Encoding -> SAInFlight2
//            -> Decoding -> SecondCheck -> Accepted
//
// with Aborted reachable from FirstCheck and SecondCheck only. Every
// operation throws PhaseError when called in the wrong phase.

#ifndef HQSDC_PROTOCOL_HPP
#define HQSDC_PROTOCOL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hqsdc/adversary.hpp"
#include "hqsdc/channel.hpp"
#include "hqsdc/hyperstate.hpp"
#include "hqsdc/random.hpp"

namespace hqsdc {

class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class PhaseError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

class SizingError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

enum class Phase : std::uint8_t {
    Prepared,
    SAInFlight1,
    FirstCheck,
    Encoding,
    SAInFlight2,
    Decoding,
    SecondCheck,
    Accepted,
    Aborted,
};

std::string_view to_string(Phase p);

/// Message bits, one 0/1 value per element.
using BitString = std::vector<std::uint8_t>;

BitString bits_from_string(std::string_view s);
std::string bits_to_string(const BitString& bits);

/// The 4-bit string <-> EncodingOp table is fixed by EncodingOp::bits().
struct ProtocolConfig {
    std::size_t n_pairs = 200;
    double sample_fraction_first = 0.25;
    double sample_fraction_second = 0.25;
    double error_threshold = 0.05;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the violated bound.
    void validate() const;

    /// Number of first/second check samples for a block of `delivered` pairs.
    std::size_t first_sample_count(std::size_t delivered) const;
    std::size_t second_sample_count(std::size_t delivered) const;
};

enum class Verdict : std::uint8_t { Pass, Fail };

std::string_view to_string(Verdict v);

struct CheckReport {
    std::size_t n_checked = 0;
    std::size_t n_pol_errors = 0;
    std::size_t n_spa_errors = 0;
    /// Samples with an error in at least one DOF.
    std::size_t n_any_errors = 0;
    double error_rate_pol = 0.0;
    double error_rate_spa = 0.0;
    Verdict verdict = Verdict::Fail;
};

enum class AbortReason : std::uint8_t { None, TooFewPairs, TrojanAlarm, FirstCheckErrors, SecondCheckErrors };

std::string_view to_string(AbortReason r);

/// Append-only log of session events, one JSON object per line with a fixed
/// field order. Disabled transcripts drop every record.
class Transcript {
   public:
    explicit Transcript(bool enabled = false) : enabled_(enabled) {}

    bool enabled() const noexcept { return enabled_; }
    void append(std::string line);
    const std::vector<std::string>& lines() const noexcept { return lines_; }
    std::string to_jsonl() const;

   private:
    bool enabled_;
    std::vector<std::string> lines_;
};

/// One position of the quantum data block. `state` is the joint state of
/// photon A (member of S_A) and photon B (member of S_B).
struct PairSlot {
    HyperState state;
    SignalMeta meta;
    bool lost = false;
    std::optional<EveRecord> eve_forward;
    std::optional<EveRecord> eve_return;
    /// Operation read out by a Trojan probe that got past Alice's defenses.
    std::optional<EncodingOp> probed_op;
};

struct DefenseTally {
    std::size_t probes_seen = 0;
    std::size_t filtered_out = 0;
    std::size_t pns_alarms = 0;
};

struct SessionState {
    Phase phase = Phase::Prepared;
    std::vector<PairSlot> pairs;
    std::vector<std::size_t> first_sample_positions;
    std::vector<std::size_t> second_sample_positions;
    std::map<std::size_t, EncodingOp> second_sample_ops;
    /// Positions carrying message chunks, ascending. Fixed when the first check passes.
    std::vector<std::size_t> message_positions;
    /// Alice's operation for each entry of message_positions.
    std::vector<EncodingOp> message_ops;
    std::optional<CheckReport> first_report;
    std::optional<CheckReport> second_report;
    DefenseTally defenses;
    std::size_t lost_forward = 0;
    std::size_t lost_return = 0;
    AbortReason abort_reason = AbortReason::None;
    Transcript transcript;

    std::size_t n_pairs() const noexcept { return pairs.size(); }
    /// 4 bits per message position. Meaningful from phase Encoding on.
    std::size_t message_capacity_bits() const noexcept { return 4 * message_positions.size(); }
};

/// Bob prepares n_pairs copies of the source state. Throws ConfigError.
SessionState prepare_block(const ProtocolConfig& cfg, const SourceParams& source, bool record_transcript = false);

/// Sends S_A from Bob to Alice (Prepared -> SAInFlight1 -> FirstCheck). Lost
/// positions are announced and discarded; Alice runs her defenses on every
/// delivered signal.
void transmit_forward(SessionState& state, const ChannelParams& channel, const EveStrategy& eve,
                      const DefenseConfig& defenses, RandomStream& rng);

/// First eavesdropping check. Alice samples positions without replacement,
/// measures photon A of each in a uniformly random basis and announces
/// positions, bases and outcomes; Bob measures photon B in the same bases and
/// compares. Fails on any PNS alarm or when a DOF error rate exceeds the
/// threshold. On Pass, Alice also fixes her secret second-check sample and
/// the message positions.
CheckReport first_check(SessionState& state, RandomStream& rng, const ProtocolConfig& cfg);

/// Alice encodes 4 bits per message position and a uniformly random operation
/// per second-check sample (Encoding -> SAInFlight2). Throws SizingError when
/// message.size() != message_capacity_bits().
void encode_message(SessionState& state, const BitString& message, RandomStream& rng, const ProtocolConfig& cfg);

/// Sends S_A back to Bob (SAInFlight2 -> Decoding).
void transmit_return(SessionState& state, const ChannelParams& channel, const EveStrategy& eve, RandomStream& rng);

struct DecodeResult {
    /// Decoded message; empty when the session aborts. Chunks lost on the
    /// return leg decode as zeros and are listed in erased_chunks.
    BitString message;
    std::vector<std::size_t> erased_chunks;
    CheckReport report;
};

/// Bob's hyper-Bell analysis of every returned pair followed by the second
/// check against Alice's announced sample operations
/// (Decoding -> SecondCheck -> Accepted | Aborted).
DecodeResult decode_and_second_check(SessionState& state, RandomStream& rng, const ProtocolConfig& cfg);

struct SessionSetup {
    ProtocolConfig protocol;
    SourceParams source;
    ChannelParams channel;
    EveStrategy eve;
    DefenseConfig defenses;
    bool record_transcript = false;

    /// Validates every part; throws ConfigError.
    void validate() const;
};

struct SessionOutcome {
    SessionState state;
    BitString sent;
    DecodeResult decoded;
    /// Eve's guesses on delivered message positions (adversary present only).
    std::size_t eve_guesses = 0;
    std::size_t eve_correct = 0;

    bool accepted() const noexcept { return state.phase == Phase::Accepted; }
};

/// Runs one full session seeded with setup.protocol.seed. When `message` is
/// absent a uniformly random message of the session's capacity is used.
SessionOutcome run_session(const SessionSetup& setup, const std::optional<BitString>& message = std::nullopt);

}  // namespace hqsdc

#endif  // HQSDC_PROTOCOL_HPP
