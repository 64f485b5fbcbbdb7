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

#include "hqsdc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace hqsdc {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Reads typed fields from one JSON object and rejects unknown keys.
class Section {
   public:
    Section(const Json& obj, std::string path, std::initializer_list<const char*> keys)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError(name("") + ": expected an object");
        }
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [key, value] : obj_.items()) {
            if (!allowed.contains(key)) {
                throw ConfigError(name(key) + ": unknown field");
            }
        }
    }

    bool has(const char* key) const { return obj_.contains(key); }
    const Json& at(const char* key) const { return obj_.at(key); }

    void read(const char* key, double& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(name(key) + ": expected a number");
        out = v.get<double>();
    }
    void read(const char* key, std::size_t& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number_unsigned()) throw ConfigError(name(key) + ": expected a non-negative integer");
        out = v.get<std::size_t>();
    }
    void read(const char* key, unsigned& out) const {
        std::size_t tmp = out;
        read(key, tmp);
        out = static_cast<unsigned>(tmp);
    }
    void read(const char* key, std::uint64_t& out, int) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_number_unsigned()) throw ConfigError(name(key) + ": expected a non-negative integer");
        out = v.get<std::uint64_t>();
    }
    void read(const char* key, bool& out) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_boolean()) throw ConfigError(name(key) + ": expected true or false");
        out = v.get<bool>();
    }
    template <typename Enum, typename Parse>
    void read_enum(const char* key, Enum& out, Parse parse) const {
        if (!has(key)) return;
        const auto& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(name(key) + ": expected a string");
        try {
            out = parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(name(key) + ": " + e.what());
        }
    }

    std::string name(std::string_view key) const {
        if (key.empty()) return path_.empty() ? std::string("config") : path_;
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

   private:
    const Json& obj_;
    std::string path_;
};

DofMask parse_mask(const Json& v, const std::string& path) {
    if (!v.is_array()) {
        throw ConfigError(path + ": expected an array of \"pol\" / \"spa\"");
    }
    DofMask mask{false, false};
    for (const auto& e : v) {
        if (e == "pol") {
            mask.pol = true;
        } else if (e == "spa") {
            mask.spa = true;
        } else {
            throw ConfigError(path + ": unknown DOF " + e.dump());
        }
    }
    return mask;
}

OrderedJson config_json(const HarnessConfig& cfg) {
    const auto& s = cfg.setup;
    OrderedJson j;
    j["sessions"] = cfg.sessions;
    j["threads"] = cfg.threads;
    j["seed"] = cfg.seed;
    j["protocol"] = {{"n_pairs", s.protocol.n_pairs},
                     {"sample_fraction_first", s.protocol.sample_fraction_first},
                     {"sample_fraction_second", s.protocol.sample_fraction_second},
                     {"error_threshold", s.protocol.error_threshold}};
    j["source"] = {{"r", s.source.r}, {"phi", s.source.phi}};
    j["channel"] = {{"loss_prob", s.channel.loss_prob},
                    {"pauli_p_pol", s.channel.pauli_p_pol},
                    {"pauli_p_spa", s.channel.pauli_p_spa}};
    OrderedJson mask = OrderedJson::array();
    if (s.eve.dof_mask.pol) mask.push_back("pol");
    if (s.eve.dof_mask.spa) mask.push_back("spa");
    j["adversary"] = {{"kind", to_string(s.eve.kind)},
                      {"dof_mask", mask},
                      {"basis_policy", to_string(s.eve.basis_policy)},
                      {"legs", to_string(s.eve.legs)}};
    j["defenses"] = {{"filter_enabled", s.defenses.filter_enabled},
                     {"filter_tolerance", s.defenses.filter_tolerance},
                     {"pns_enabled", s.defenses.pns_enabled},
                     {"pns_kind", to_string(s.defenses.pns_kind)}};
    return j;
}

HarnessConfig config_from_json(const Json& root) {
    HarnessConfig cfg;
    Section top(root, "", {"sessions", "threads", "seed", "protocol", "source", "channel", "adversary", "defenses"});
    top.read("sessions", cfg.sessions);
    top.read("threads", cfg.threads);
    top.read("seed", cfg.seed, 0);
    auto& s = cfg.setup;
    if (top.has("protocol")) {
        Section p(top.at("protocol"), "protocol",
                  {"n_pairs", "sample_fraction_first", "sample_fraction_second", "error_threshold"});
        p.read("n_pairs", s.protocol.n_pairs);
        p.read("sample_fraction_first", s.protocol.sample_fraction_first);
        p.read("sample_fraction_second", s.protocol.sample_fraction_second);
        p.read("error_threshold", s.protocol.error_threshold);
    }
    if (top.has("source")) {
        Section p(top.at("source"), "source", {"r", "phi"});
        p.read("r", s.source.r);
        p.read("phi", s.source.phi);
    }
    if (top.has("channel")) {
        Section p(top.at("channel"), "channel", {"loss_prob", "pauli_p_pol", "pauli_p_spa"});
        p.read("loss_prob", s.channel.loss_prob);
        p.read("pauli_p_pol", s.channel.pauli_p_pol);
        p.read("pauli_p_spa", s.channel.pauli_p_spa);
    }
    if (top.has("adversary")) {
        Section p(top.at("adversary"), "adversary", {"kind", "dof_mask", "basis_policy", "legs"});
        p.read_enum("kind", s.eve.kind, eve_kind_from_string);
        if (p.has("dof_mask")) {
            s.eve.dof_mask = parse_mask(p.at("dof_mask"), "adversary.dof_mask");
        }
        p.read_enum("basis_policy", s.eve.basis_policy, basis_policy_from_string);
        p.read_enum("legs", s.eve.legs, attack_legs_from_string);
    }
    if (top.has("defenses")) {
        Section p(top.at("defenses"), "defenses", {"filter_enabled", "filter_tolerance", "pns_enabled", "pns_kind"});
        p.read("filter_enabled", s.defenses.filter_enabled);
        p.read("filter_tolerance", s.defenses.filter_tolerance);
        p.read("pns_enabled", s.defenses.pns_enabled);
        p.read_enum("pns_kind", s.defenses.pns_kind, pns_kind_from_string);
    }
    cfg.validate();
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading '" + path + "'");
    }
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError("error while writing '" + path + "'");
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Everything the aggregate needs from one session.
struct SessionSummary {
    Phase phase = Phase::Prepared;
    AbortReason reason = AbortReason::None;
    std::optional<CheckReport> first;
    std::optional<CheckReport> second;
    std::size_t message_pairs = 0;
    std::size_t bits_delivered = 0;
    std::size_t bit_errors = 0;
    std::size_t lost = 0;
    DefenseTally defenses;
    std::size_t eve_guesses = 0;
    std::size_t eve_correct = 0;
    std::vector<std::string> transcript;
};

SessionSummary summarize(const SessionOutcome& out) {
    const auto& st = out.state;
    SessionSummary s;
    s.phase = st.phase;
    s.reason = st.abort_reason;
    s.first = st.first_report;
    s.second = st.second_report;
    s.lost = st.lost_forward + st.lost_return;
    s.defenses = st.defenses;
    s.eve_guesses = out.eve_guesses;
    s.eve_correct = out.eve_correct;
    if (out.accepted()) {
        s.message_pairs = st.message_positions.size();
        std::set<std::size_t> erased(out.decoded.erased_chunks.begin(), out.decoded.erased_chunks.end());
        for (std::size_t c = 0; c < st.message_positions.size(); ++c) {
            if (erased.contains(c)) continue;
            for (std::size_t b = 4 * c; b < 4 * c + 4; ++b) {
                ++s.bits_delivered;
                s.bit_errors += out.sent[b] != out.decoded.message[b];
            }
        }
    }
    s.transcript = st.transcript.lines();
    return s;
}

std::string transcript_header(std::size_t session, std::uint64_t session_seed, const HarnessConfig& cfg) {
    HarnessConfig one = cfg;
    one.sessions = 1;
    OrderedJson h;
    h["session"] = session;
    h["session_seed"] = session_seed;
    h["setup"] = config_json(one);
    return h.dump();
}

OrderedJson checks_json(const CheckTotals& c) {
    OrderedJson j;
    j["samples"] = c.checked;
    j["pol_errors"] = c.pol_errors;
    j["spa_errors"] = c.spa_errors;
    j["any_errors"] = c.any_errors;
    j["error_rate_pol"] = c.rate_pol();
    j["error_rate_spa"] = c.rate_spa();
    j["detection_rate"] = c.rate_any();
    return j;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_plain_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// Accepts plain numbers and the forms pi, K*pi, pi/D, K*pi/D.
double parse_number(const std::string& token) {
    double v = 0.0;
    if (parse_plain_double(token, v)) {
        return v;
    }
    const auto p = token.find("pi");
    if (p != std::string::npos) {
        double k = 1.0;
        double d = 1.0;
        const std::string head = token.substr(0, p);
        const std::string tail = token.substr(p + 2);
        bool ok = true;
        if (!head.empty()) {
            ok = head.back() == '*' && parse_plain_double(head.substr(0, head.size() - 1), k);
        }
        if (ok && !tail.empty()) {
            ok = tail.front() == '/' && parse_plain_double(tail.substr(1), d) && d != 0.0;
        }
        if (ok) {
            return k * std::numbers::pi / d;
        }
    }
    throw ConfigError("not a number: '" + token + "'");
}

double parse_axis_number(std::string_view axis, const std::string& value) {
    try {
        return parse_number(value);
    } catch (const ConfigError&) {
        throw ConfigError("sweep axis " + std::string(axis) + ": not a number: '" + value + "'");
    }
}

using AxisApply = std::function<void(HarnessConfig&, const std::string&)>;

const std::map<std::string, AxisApply, std::less<>>& axis_table() {
    static const std::map<std::string, AxisApply, std::less<>> table = {
        {"pauli_p_pol",
         [](HarnessConfig& c, const std::string& v) { c.setup.channel.pauli_p_pol = parse_axis_number("pauli_p_pol", v); }},
        {"pauli_p_spa",
         [](HarnessConfig& c, const std::string& v) { c.setup.channel.pauli_p_spa = parse_axis_number("pauli_p_spa", v); }},
        {"pauli_p",
         [](HarnessConfig& c, const std::string& v) {
             const double p = parse_axis_number("pauli_p", v);
             c.setup.channel.pauli_p_pol = p;
             c.setup.channel.pauli_p_spa = p;
         }},
        {"loss_prob",
         [](HarnessConfig& c, const std::string& v) { c.setup.channel.loss_prob = parse_axis_number("loss_prob", v); }},
        {"strategy",
         [](HarnessConfig& c, const std::string& v) {
             try {
                 c.setup.eve.kind = eve_kind_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("sweep axis strategy: ") + e.what());
             }
         }},
        {"basis_policy",
         [](HarnessConfig& c, const std::string& v) {
             try {
                 c.setup.eve.basis_policy = basis_policy_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("sweep axis basis_policy: ") + e.what());
             }
         }},
        {"legs",
         [](HarnessConfig& c, const std::string& v) {
             try {
                 c.setup.eve.legs = attack_legs_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("sweep axis legs: ") + e.what());
             }
         }},
        {"pns_kind",
         [](HarnessConfig& c, const std::string& v) {
             try {
                 c.setup.defenses.pns_kind = pns_kind_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("sweep axis pns_kind: ") + e.what());
             }
         }},
        {"first_samples",
         [](HarnessConfig& c, const std::string& v) {
             const double n = parse_axis_number("first_samples", v);
             if (!(n >= 1.0) || n != std::floor(n)) {
                 throw ConfigError("sweep axis first_samples: expected a positive integer, got '" + v + "'");
             }
             c.setup.protocol.sample_fraction_first = n / static_cast<double>(c.setup.protocol.n_pairs);
         }},
        {"sample_fraction_first",
         [](HarnessConfig& c, const std::string& v) {
             c.setup.protocol.sample_fraction_first = parse_axis_number("sample_fraction_first", v);
         }},
        {"sample_fraction_second",
         [](HarnessConfig& c, const std::string& v) {
             c.setup.protocol.sample_fraction_second = parse_axis_number("sample_fraction_second", v);
         }},
        {"error_threshold",
         [](HarnessConfig& c, const std::string& v) {
             c.setup.protocol.error_threshold = parse_axis_number("error_threshold", v);
         }},
        {"r", [](HarnessConfig& c, const std::string& v) { c.setup.source.r = parse_axis_number("r", v); }},
        {"phi", [](HarnessConfig& c, const std::string& v) { c.setup.source.phi = parse_axis_number("phi", v); }},
    };
    return table;
}

}  // namespace

void HarnessConfig::validate() const {
    if (sessions == 0) {
        throw ConfigError("sessions must be at least 1");
    }
    setup.validate();
}

HarnessConfig parse_config(std::string_view text) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(root);
}

HarnessConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string config_to_json(const HarnessConfig& cfg) { return config_json(cfg).dump(2); }

double CheckTotals::rate_pol() const noexcept { return ratio(pol_errors, checked); }
double CheckTotals::rate_spa() const noexcept { return ratio(spa_errors, checked); }
double CheckTotals::rate_any() const noexcept { return ratio(any_errors, checked); }

void CheckTotals::add(const CheckReport& r) noexcept {
    checked += r.n_checked;
    pol_errors += r.n_pol_errors;
    spa_errors += r.n_spa_errors;
    any_errors += r.n_any_errors;
}

RunResult run_sessions(const HarnessConfig& cfg, bool transcripts) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = cfg.sessions;
    std::vector<SessionSummary> summaries(n);

    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned t) {
        try {
            for (std::size_t k = next++; k < n; k = next++) {
                SessionSetup setup = cfg.setup;
                setup.protocol.seed = derive_seed(cfg.seed, k);
                setup.record_transcript = transcripts;
                summaries[k] = summarize(run_session(setup));
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    RunResult result;
    auto& st = result.stats;
    st.sessions = n;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& s = summaries[k];
        if (s.phase == Phase::Accepted) {
            ++st.accepted;
        } else {
            ++st.aborted;
        }
        switch (s.reason) {
            case AbortReason::TooFewPairs:
                ++st.aborted_too_few_pairs;
                break;
            case AbortReason::TrojanAlarm:
                ++st.aborted_trojan_alarm;
                break;
            case AbortReason::FirstCheckErrors:
                ++st.aborted_first_check;
                break;
            case AbortReason::SecondCheckErrors:
                ++st.aborted_second_check;
                break;
            case AbortReason::None:
                break;
        }
        if (s.first) st.first_check.add(*s.first);
        if (s.second) st.second_check.add(*s.second);
        st.message_pairs += s.message_pairs;
        st.message_bits_delivered += s.bits_delivered;
        st.message_bit_errors += s.bit_errors;
        st.lost_pairs += s.lost;
        st.trojan_probes_seen += s.defenses.probes_seen;
        st.trojan_filtered_out += s.defenses.filtered_out;
        st.trojan_pns_alarms += s.defenses.pns_alarms;
        st.eve_guesses += s.eve_guesses;
        st.eve_correct += s.eve_correct;
        if (transcripts) {
            result.transcript_lines.push_back(transcript_header(k, derive_seed(cfg.seed, k), cfg));
            result.transcript_lines.insert(result.transcript_lines.end(), s.transcript.begin(), s.transcript.end());
        }
    }
    st.message_bit_error_rate = ratio(st.message_bit_errors, st.message_bits_delivered);
    st.bits_per_photon_transit = ratio(st.message_bits_delivered, 2 * st.message_pairs);
    if (cfg.setup.eve.kind != EveKind::None) {
        st.eve_bell_guess_accuracy = ratio(st.eve_correct, st.eve_guesses);
    }
    st.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string stats_to_json(const RunStats& st, const HarnessConfig& cfg) {
    OrderedJson j;
    j["config"] = config_json(cfg);
    j["sessions"] = st.sessions;
    j["accepted"] = st.accepted;
    j["aborted"] = st.aborted;
    j["aborted_by"] = {{"too_few_pairs", st.aborted_too_few_pairs},
                       {"trojan_alarm", st.aborted_trojan_alarm},
                       {"first_check_errors", st.aborted_first_check},
                       {"second_check_errors", st.aborted_second_check}};
    j["first_check"] = checks_json(st.first_check);
    j["second_check"] = checks_json(st.second_check);
    j["message"] = {{"pairs", st.message_pairs},
                    {"bits_delivered", st.message_bits_delivered},
                    {"bit_errors", st.message_bit_errors},
                    {"bit_error_rate", st.message_bit_error_rate},
                    {"bits_per_photon_transit", st.bits_per_photon_transit}};
    j["lost_pairs"] = st.lost_pairs;
    j["trojan"] = {{"probes_seen", st.trojan_probes_seen},
                   {"filtered_out", st.trojan_filtered_out},
                   {"pns_alarms", st.trojan_pns_alarms}};
    if (st.eve_bell_guess_accuracy) {
        j["eve"] = {{"guesses", st.eve_guesses},
                    {"correct", st.eve_correct},
                    {"bell_guess_accuracy", *st.eve_bell_guess_accuracy}};
    } else {
        j["eve"] = nullptr;
    }
    return j.dump(2) + "\n";
}

RunStats run(const std::string& config_path, std::uint64_t seed, const std::string& out_path, bool transcripts) {
    HarnessConfig cfg = load_config(config_path);
    cfg.seed = seed;
    auto result = run_sessions(cfg, transcripts);
    write_file(out_path, stats_to_json(result.stats, cfg));
    if (transcripts) {
        std::string text;
        for (const auto& l : result.transcript_lines) {
            text += l;
            text += '\n';
        }
        write_file(out_path + ".transcripts.jsonl", text);
    }
    return result.stats;
}

SessionOutcome replay_session(std::string_view header_line) {
    Json h;
    try {
        h = Json::parse(header_line);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("transcript header is not valid JSON: ") + e.what());
    }
    if (!h.is_object() || !h.contains("session_seed") || !h.contains("setup") ||
        !h.at("session_seed").is_number_unsigned()) {
        throw ConfigError("transcript header must carry session_seed and setup");
    }
    HarnessConfig cfg = config_from_json(h.at("setup"));
    SessionSetup setup = cfg.setup;
    setup.protocol.seed = h.at("session_seed").get<std::uint64_t>();
    setup.record_transcript = true;
    return run_session(setup);
}

std::vector<std::string> sweep_axes() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : axis_table()) {
        out.push_back(name);
    }
    return out;
}

std::vector<SweepRow> attack_sweep(const HarnessConfig& base, std::string_view axis,
                                   const std::vector<std::string>& values) {
    if (values.empty()) {
        throw ConfigError("sweep grid for axis '" + std::string(axis) + "' is empty");
    }
    const auto it = axis_table().find(axis);
    if (it == axis_table().end()) {
        throw ConfigError("unknown sweep axis '" + std::string(axis) + "'");
    }
    std::vector<HarnessConfig> grid;
    grid.reserve(values.size());
    for (const auto& v : values) {
        HarnessConfig c = base;
        it->second(c, v);
        c.validate();
        grid.push_back(std::move(c));
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        rows.push_back({std::string(axis), values[k], run_sessions(grid[k]).stats});
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "axis,value,sessions,accepted,aborted,accept_rate,first_samples,first_error_pol,first_error_spa,"
        "first_detection_rate,second_samples,second_error_pol,second_error_spa,second_detection_rate,"
        "message_bit_error_rate,bits_per_photon_transit,eve_bell_guess_accuracy,trojan_pns_alarms,"
        "trojan_filtered_out,lost_pairs\n";
    for (const auto& row : rows) {
        const auto& s = row.stats;
        std::ostringstream line;
        line << row.axis << ',' << row.value << ',' << s.sessions << ',' << s.accepted << ',' << s.aborted << ','
             << format_number(ratio(s.accepted, s.sessions)) << ',' << s.first_check.checked << ','
             << format_number(s.first_check.rate_pol()) << ',' << format_number(s.first_check.rate_spa()) << ','
             << format_number(s.first_check.rate_any()) << ',' << s.second_check.checked << ','
             << format_number(s.second_check.rate_pol()) << ',' << format_number(s.second_check.rate_spa()) << ','
             << format_number(s.second_check.rate_any()) << ',' << format_number(s.message_bit_error_rate) << ','
             << format_number(s.bits_per_photon_transit) << ','
             << (s.eve_bell_guess_accuracy ? format_number(*s.eve_bell_guess_accuracy) : std::string()) << ','
             << s.trojan_pns_alarms << ',' << s.trojan_filtered_out << ',' << s.lost_pairs << '\n';
        out += line.str();
    }
    return out;
}

std::vector<SweepRow> attack_sweep(const std::string& config_path, std::string_view axis,
                                   const std::vector<std::string>& values, const std::string& out_path) {
    auto rows = attack_sweep(load_config(config_path), axis, values);
    write_file(out_path, sweep_to_csv(rows));
    return rows;
}

std::vector<SourceScanRow> source_fidelity_scan(const std::vector<double>& r_grid,
                                                const std::vector<double>& phi_grid) {
    if (r_grid.empty() || phi_grid.empty()) {
        throw ConfigError("source scan grids must be nonempty");
    }
    std::vector<SourceScanRow> rows;
    rows.reserve(r_grid.size() * phi_grid.size());
    for (double r : r_grid) {
        for (double phi : phi_grid) {
            const SourceParams params{r, phi};
            HyperState state;
            try {
                state = source_state(params);
            } catch (const std::domain_error& e) {
                throw ConfigError(std::string("source scan: ") + e.what());
            }
            const auto z = mismatch_probability(state, {BasisChoice::Z, BasisChoice::Z});
            const auto x = mismatch_probability(state, {BasisChoice::X, BasisChoice::X});
            SourceScanRow row;
            row.r = r;
            row.phi = phi;
            row.fidelity = source_fidelity(params);
            row.err_pol_z = z.pol;
            row.err_pol_x = x.pol;
            row.err_spa_z = z.spa;
            row.err_spa_x = x.spa;
            row.err_pol = 0.5 * (z.pol + x.pol);
            row.err_spa = 0.5 * (z.spa + x.spa);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string source_scan_to_csv(const std::vector<SourceScanRow>& rows) {
    std::string out = "r,phi,fidelity,err_pol,err_spa,err_pol_z,err_pol_x,err_spa_z,err_spa_x\n";
    for (const auto& row : rows) {
        for (double v : {row.r, row.phi, row.fidelity, row.err_pol, row.err_spa, row.err_pol_z, row.err_pol_x,
                         row.err_spa_z}) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(row.err_spa_x);
        out += '\n';
    }
    return out;
}

std::vector<SourceScanRow> source_fidelity_scan(const std::vector<double>& r_grid,
                                                const std::vector<double>& phi_grid, const std::string& out_path) {
    auto rows = source_fidelity_scan(r_grid, phi_grid);
    write_file(out_path, source_scan_to_csv(rows));
    return rows;
}

std::vector<std::string> split_list(std::string_view list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const auto end = comma == std::string_view::npos ? list.size() : comma;
        auto token = trim(list.substr(start, end - start));
        if (token.empty()) {
            if (comma == std::string_view::npos && out.empty() && trim(list).empty()) {
                break;
            }
            throw ConfigError("empty entry in list '" + std::string(list) + "'");
        }
        out.push_back(std::move(token));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> parse_number_list(std::string_view list) {
    std::vector<double> out;
    for (const auto& token : split_list(list)) {
        out.push_back(parse_number(token));
    }
    return out;
}

}  // namespace hqsdc
