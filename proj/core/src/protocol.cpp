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

#include "hqsdc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "json.hpp"

namespace hqsdc {

namespace {

using Record = nlohmann::ordered_json;

void require_phase(const SessionState& state, Phase expected, std::string_view op) {
    if (state.phase != expected) {
        throw PhaseError(std::string(op) + " requires phase " + std::string(to_string(expected)) + ", session is in " +
                         std::string(to_string(state.phase)));
    }
}

// Appends {seq, phase, event, ...fill} when the transcript is enabled.
template <typename Fill>
void record(SessionState& state, std::string_view event, Fill&& fill) {
    if (!state.transcript.enabled()) {
        return;
    }
    Record r;
    r["seq"] = state.transcript.lines().size();
    r["phase"] = to_string(state.phase);
    r["event"] = event;
    fill(r);
    state.transcript.append(r.dump());
}

Record eve_record_json(const EveRecord& rec) {
    auto dof = [](const std::optional<EveDofRecord>& d) -> Record {
        if (!d) {
            return nullptr;
        }
        Record r;
        r["basis"] = d->basis == BasisChoice::Z ? "Z" : "X";
        r["bit"] = d->bit;
        return r;
    };
    Record r;
    r["pol"] = dof(rec.pol);
    r["spa"] = dof(rec.spa);
    return r;
}

void record_verdict(SessionState& state) {
    record(state, "verdict", [&](Record& r) { r["reason"] = to_string(state.abort_reason); });
}

CheckReport finish_report(CheckReport report, double threshold) {
    if (report.n_checked == 0) {
        report.verdict = Verdict::Fail;
        return report;
    }
    const auto n = static_cast<double>(report.n_checked);
    report.error_rate_pol = static_cast<double>(report.n_pol_errors) / n;
    report.error_rate_spa = static_cast<double>(report.n_spa_errors) / n;
    report.verdict = std::max(report.error_rate_pol, report.error_rate_spa) > threshold ? Verdict::Fail : Verdict::Pass;
    return report;
}

void record_check(SessionState& state, std::string_view which, const CheckReport& rep) {
    record(state, "check", [&](Record& r) {
        r["which"] = which;
        r["n_checked"] = rep.n_checked;
        r["n_pol_errors"] = rep.n_pol_errors;
        r["n_spa_errors"] = rep.n_spa_errors;
        r["n_any_errors"] = rep.n_any_errors;
        r["verdict"] = to_string(rep.verdict);
    });
}

std::vector<std::size_t> delivered_positions(const SessionState& state) {
    std::vector<std::size_t> out;
    out.reserve(state.pairs.size());
    for (std::size_t k = 0; k < state.pairs.size(); ++k) {
        if (!state.pairs[k].lost) {
            out.push_back(k);
        }
    }
    return out;
}

void abort_session(SessionState& state, AbortReason reason) {
    state.phase = Phase::Aborted;
    state.abort_reason = reason;
    record_verdict(state);
}

}  // namespace

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Prepared:
            return "Prepared";
        case Phase::SAInFlight1:
            return "SAInFlight1";
        case Phase::FirstCheck:
            return "FirstCheck";
        case Phase::Encoding:
            return "Encoding";
        case Phase::SAInFlight2:
            return "SAInFlight2";
        case Phase::Decoding:
            return "Decoding";
        case Phase::SecondCheck:
            return "SecondCheck";
        case Phase::Accepted:
            return "Accepted";
        case Phase::Aborted:
            return "Aborted";
    }
    return "?";
}

std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

std::string_view to_string(AbortReason r) {
    switch (r) {
        case AbortReason::None:
            return "none";
        case AbortReason::TooFewPairs:
            return "too_few_pairs";
        case AbortReason::TrojanAlarm:
            return "trojan_alarm";
        case AbortReason::FirstCheckErrors:
            return "first_check_errors";
        case AbortReason::SecondCheckErrors:
            return "second_check_errors";
    }
    return "?";
}

BitString bits_from_string(std::string_view s) {
    BitString out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may contain only '0' and '1'");
        }
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

std::string bits_to_string(const BitString& bits) {
    std::string out;
    out.reserve(bits.size());
    for (auto b : bits) {
        out.push_back(b ? '1' : '0');
    }
    return out;
}

void Transcript::append(std::string line) {
    if (enabled_) {
        lines_.push_back(std::move(line));
    }
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const auto& l : lines_) {
        out += l;
        out += '\n';
    }
    return out;
}

std::size_t ProtocolConfig::first_sample_count(std::size_t delivered) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_fraction_first * delivered)));
}

std::size_t ProtocolConfig::second_sample_count(std::size_t delivered) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_fraction_second * delivered)));
}

void ProtocolConfig::validate() const {
    if (n_pairs < 4) {
        throw ConfigError("protocol.n_pairs must be at least 4, got " + std::to_string(n_pairs));
    }
    auto open_unit = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
    if (!open_unit(sample_fraction_first)) {
        throw ConfigError("protocol.sample_fraction_first must lie in (0, 1)");
    }
    if (!open_unit(sample_fraction_second)) {
        throw ConfigError("protocol.sample_fraction_second must lie in (0, 1)");
    }
    if (!std::isfinite(error_threshold) || error_threshold < 0.0 || error_threshold > 1.0) {
        throw ConfigError("protocol.error_threshold must lie in [0, 1]");
    }
    if (first_sample_count(n_pairs) + second_sample_count(n_pairs) + 1 > n_pairs) {
        throw ConfigError("protocol sample fractions leave no message pair for n_pairs = " + std::to_string(n_pairs));
    }
}

void SessionSetup::validate() const {
    protocol.validate();
    try {
        channel.validate();
        eve.validate();
        defenses.validate();
        if (!std::isfinite(source.r) || source.r < 0.0 || !std::isfinite(source.phi)) {
            throw std::invalid_argument("source.r must be finite and non-negative and source.phi finite");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SessionState prepare_block(const ProtocolConfig& cfg, const SourceParams& source, bool record_transcript) {
    cfg.validate();
    HyperState pair;
    try {
        pair = source_state(source);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    SessionState state;
    state.transcript = Transcript(record_transcript);
    state.pairs.assign(cfg.n_pairs, PairSlot{pair, SignalMeta{}, false, std::nullopt, std::nullopt, std::nullopt});
    record(state, "prepare", [&](Record& r) {
        r["n_pairs"] = cfg.n_pairs;
        r["seed"] = cfg.seed;
        Record amps = Record::array();
        for (const auto& [re, im] : pair.to_pairs()) {
            amps.push_back({re, im});
        }
        r["state"] = amps;
    });
    return state;
}

void transmit_forward(SessionState& state, const ChannelParams& channel, const EveStrategy& eve,
                      const DefenseConfig& defenses, RandomStream& rng) {
    require_phase(state, Phase::Prepared, "transmit_forward");
    state.phase = Phase::SAInFlight1;
    for (std::size_t k = 0; k < state.pairs.size(); ++k) {
        auto& slot = state.pairs[k];
        auto result = transmit(slot.state, slot.meta, channel, eve, Leg::Forward, rng);
        if (std::holds_alternative<Lost>(result)) {
            slot.lost = true;
            ++state.lost_forward;
            record(state, "loss", [&](Record& r) {
                r["leg"] = "forward";
                r["pos"] = k;
            });
            continue;
        }
        auto& d = std::get<Delivered>(result);
        slot.state = d.state;
        slot.meta = d.meta;
        slot.eve_forward = d.eve_record;
        if (slot.eve_forward) {
            record(state, "eve", [&](Record& r) {
                r["leg"] = "forward";
                r["pos"] = k;
                r["record"] = eve_record_json(*slot.eve_forward);
            });
        }

        // Alice's filter and photon-number check on receipt.
        if (!slot.meta.legitimate()) {
            ++state.defenses.probes_seen;
        }
        const auto outcome = apply_defenses(slot.meta, defenses, rng);
        if (outcome == DefenseOutcome::FilteredOut) {
            ++state.defenses.filtered_out;
            slot.meta = SignalMeta{};
        } else if (outcome == DefenseOutcome::PnsAlarm) {
            ++state.defenses.pns_alarms;
        }
        if (outcome != DefenseOutcome::Clean || !slot.meta.legitimate()) {
            record(state, "defense", [&](Record& r) {
                r["pos"] = k;
                r["photon_count"] = slot.meta.photon_count;
                r["wavelength_offset"] = slot.meta.wavelength_offset;
                r["delayed"] = slot.meta.delayed;
                r["outcome"] = to_string(outcome);
            });
        }
    }
    state.phase = Phase::FirstCheck;
}

CheckReport first_check(SessionState& state, RandomStream& rng, const ProtocolConfig& cfg) {
    require_phase(state, Phase::FirstCheck, "first_check");
    const auto delivered = delivered_positions(state);
    const std::size_t n_first = cfg.first_sample_count(delivered.size());
    const std::size_t n_second = cfg.second_sample_count(delivered.size());
    if (delivered.size() < n_first + n_second + 1) {
        CheckReport rep = finish_report({}, cfg.error_threshold);
        state.first_report = rep;
        record_check(state, "first", rep);
        abort_session(state, AbortReason::TooFewPairs);
        return rep;
    }

    state.first_sample_positions = rng.sample_without_replacement(delivered, n_first);
    std::sort(state.first_sample_positions.begin(), state.first_sample_positions.end());

    CheckReport rep;
    for (std::size_t pos : state.first_sample_positions) {
        auto& slot = state.pairs[pos];
        const MeasBasis basis = random_basis(rng);
        const auto alice = measure_photon(slot.state, Photon::A, basis, rng);
        const auto bob = measure_photon(alice.collapsed, Photon::B, basis, rng);
        slot.state = bob.collapsed;
        const bool pol_err = alice.outcome.pol_bit != bob.outcome.pol_bit;
        const bool spa_err = alice.outcome.spa_bit != bob.outcome.spa_bit;
        ++rep.n_checked;
        rep.n_pol_errors += pol_err;
        rep.n_spa_errors += spa_err;
        rep.n_any_errors += (pol_err || spa_err);
        record(state, "first_sample", [&](Record& r) {
            r["pos"] = pos;
            r["basis"] = to_string(basis);
            r["alice"] = {alice.outcome.pol_bit, alice.outcome.spa_bit};
            r["bob"] = {bob.outcome.pol_bit, bob.outcome.spa_bit};
        });
    }
    rep = finish_report(rep, cfg.error_threshold);
    state.first_report = rep;
    record_check(state, "first", rep);

    if (state.defenses.pns_alarms > 0) {
        abort_session(state, AbortReason::TrojanAlarm);
        return rep;
    }
    if (rep.verdict == Verdict::Fail) {
        abort_session(state, AbortReason::FirstCheckErrors);
        return rep;
    }

    std::vector<std::size_t> remaining;
    std::set_difference(delivered.begin(), delivered.end(), state.first_sample_positions.begin(),
                        state.first_sample_positions.end(), std::back_inserter(remaining));
    state.second_sample_positions = rng.sample_without_replacement(remaining, n_second);
    std::sort(state.second_sample_positions.begin(), state.second_sample_positions.end());
    std::set_difference(remaining.begin(), remaining.end(), state.second_sample_positions.begin(),
                        state.second_sample_positions.end(), std::back_inserter(state.message_positions));
    state.phase = Phase::Encoding;
    return rep;
}

void encode_message(SessionState& state, const BitString& message, RandomStream& rng, const ProtocolConfig& cfg) {
    (void)cfg;
    require_phase(state, Phase::Encoding, "encode_message");
    if (message.size() != state.message_capacity_bits()) {
        throw SizingError("message has " + std::to_string(message.size()) + " bits, session capacity is " +
                          std::to_string(state.message_capacity_bits()) + " bits (4 per message pair)");
    }
    auto apply = [&](std::size_t pos, EncodingOp op, std::string_view role) {
        auto& slot = state.pairs[pos];
        slot.state = apply_encoding(slot.state, op);
        if (!slot.meta.legitimate()) {
            slot.probed_op = op;
        }
        record(state, "encode", [&](Record& r) {
            r["pos"] = pos;
            r["role"] = role;
            r["op"] = to_string(op);
        });
    };

    state.message_ops.clear();
    state.message_ops.reserve(state.message_positions.size());
    for (std::size_t c = 0; c < state.message_positions.size(); ++c) {
        std::uint8_t nibble = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const auto bit = message[4 * c + b];
            if (bit > 1) {
                throw std::invalid_argument("message bits must be 0 or 1");
            }
            nibble = static_cast<std::uint8_t>((nibble << 1) | bit);
        }
        const EncodingOp op = EncodingOp::from_bits(nibble);
        state.message_ops.push_back(op);
        apply(state.message_positions[c], op, "message");
    }
    state.second_sample_ops.clear();
    for (std::size_t pos : state.second_sample_positions) {
        const EncodingOp op = EncodingOp::from_ordinal(rng.below(16));
        state.second_sample_ops.emplace(pos, op);
        apply(pos, op, "sample");
    }
    state.phase = Phase::SAInFlight2;
}

void transmit_return(SessionState& state, const ChannelParams& channel, const EveStrategy& eve, RandomStream& rng) {
    require_phase(state, Phase::SAInFlight2, "transmit_return");
    std::vector<std::size_t> travelling;
    std::merge(state.message_positions.begin(), state.message_positions.end(), state.second_sample_positions.begin(),
               state.second_sample_positions.end(), std::back_inserter(travelling));
    for (std::size_t pos : travelling) {
        auto& slot = state.pairs[pos];
        const EveRecord* fwd = slot.eve_forward ? &*slot.eve_forward : nullptr;
        auto result = transmit(slot.state, slot.meta, channel, eve, Leg::Return, rng, fwd);
        if (std::holds_alternative<Lost>(result)) {
            slot.lost = true;
            ++state.lost_return;
            record(state, "loss", [&](Record& r) {
                r["leg"] = "return";
                r["pos"] = pos;
            });
            continue;
        }
        auto& d = std::get<Delivered>(result);
        slot.state = d.state;
        slot.meta = d.meta;
        slot.eve_return = d.eve_record;
        if (slot.eve_return) {
            record(state, "eve", [&](Record& r) {
                r["leg"] = "return";
                r["pos"] = pos;
                r["record"] = eve_record_json(*slot.eve_return);
            });
        }
    }
    state.phase = Phase::Decoding;
}

DecodeResult decode_and_second_check(SessionState& state, RandomStream& rng, const ProtocolConfig& cfg) {
    require_phase(state, Phase::Decoding, "decode_and_second_check");
    std::vector<std::size_t> arrived;
    std::merge(state.message_positions.begin(), state.message_positions.end(), state.second_sample_positions.begin(),
               state.second_sample_positions.end(), std::back_inserter(arrived));
    std::map<std::size_t, BellIndex> outcomes;
    for (std::size_t pos : arrived) {
        if (state.pairs[pos].lost) {
            continue;
        }
        const BellIndex b = chbsa(state.pairs[pos].state, rng);
        outcomes.emplace(pos, b);
        record(state, "chbsa", [&](Record& r) {
            r["pos"] = pos;
            r["bell"] = to_string(b);
        });
    }

    // Alice announces sample positions and operations.
    state.phase = Phase::SecondCheck;
    CheckReport rep;
    for (const auto& [pos, op] : state.second_sample_ops) {
        const auto it = outcomes.find(pos);
        if (it == outcomes.end()) {
            continue;
        }
        const BellIndex expected = bell_from_op(op);
        const bool pol_err = it->second.p != expected.p;
        const bool spa_err = it->second.s != expected.s;
        ++rep.n_checked;
        rep.n_pol_errors += pol_err;
        rep.n_spa_errors += spa_err;
        rep.n_any_errors += (pol_err || spa_err);
        record(state, "second_sample", [&](Record& r) {
            r["pos"] = pos;
            r["op"] = to_string(op);
            r["expected"] = to_string(expected);
            r["observed"] = to_string(it->second);
        });
    }
    rep = finish_report(rep, cfg.error_threshold);
    state.second_report = rep;
    record_check(state, "second", rep);

    DecodeResult result;
    result.report = rep;
    if (rep.verdict == Verdict::Fail) {
        abort_session(state, rep.n_checked == 0 ? AbortReason::TooFewPairs : AbortReason::SecondCheckErrors);
        return result;
    }
    result.message.reserve(state.message_capacity_bits());
    for (std::size_t c = 0; c < state.message_positions.size(); ++c) {
        const auto it = outcomes.find(state.message_positions[c]);
        std::uint8_t nibble = 0;
        if (it == outcomes.end()) {
            result.erased_chunks.push_back(c);
        } else {
            nibble = op_from_bell(it->second).bits();
        }
        for (int b = 3; b >= 0; --b) {
            result.message.push_back(static_cast<std::uint8_t>((nibble >> b) & 1));
        }
    }
    state.phase = Phase::Accepted;
    record_verdict(state);
    return result;
}

SessionOutcome run_session(const SessionSetup& setup, const std::optional<BitString>& message) {
    setup.validate();
    const auto& cfg = setup.protocol;
    RandomStream rng(cfg.seed);
    SessionOutcome out{prepare_block(cfg, setup.source, setup.record_transcript), {}, {}, 0, 0};
    auto& st = out.state;

    transmit_forward(st, setup.channel, setup.eve, setup.defenses, rng);
    first_check(st, rng, cfg);
    if (st.phase == Phase::Aborted) {
        return out;
    }

    if (message) {
        out.sent = *message;
    } else {
        out.sent.resize(st.message_capacity_bits());
        for (auto& b : out.sent) {
            b = rng.coin() ? 1 : 0;
        }
    }
    encode_message(st, out.sent, rng, cfg);
    transmit_return(st, setup.channel, setup.eve, rng);
    out.decoded = decode_and_second_check(st, rng, cfg);

    if (setup.eve.kind != EveKind::None) {
        // Separate stream so that Eve's bookkeeping never perturbs the session.
        RandomStream eve_rng(derive_seed(cfg.seed, 0x455645));
        for (std::size_t c = 0; c < st.message_positions.size(); ++c) {
            const auto& slot = st.pairs[st.message_positions[c]];
            if (slot.lost) {
                continue;
            }
            const EncodingOp guess =
                slot.probed_op ? *slot.probed_op
                               : guess_operation(slot.eve_forward ? &*slot.eve_forward : nullptr,
                                                 slot.eve_return ? &*slot.eve_return : nullptr, eve_rng);
            ++out.eve_guesses;
            out.eve_correct += guess == st.message_ops[c];
        }
    }
    return out;
}

}  // namespace hqsdc
