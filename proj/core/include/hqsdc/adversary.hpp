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

#ifndef HQSDC_ADVERSARY_HPP
#define HQSDC_ADVERSARY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hqsdc/hyperstate.hpp"
#include "hqsdc/random.hpp"

namespace hqsdc {

enum class EveKind : std::uint8_t { None, InterceptResend, TrojanMultiPhoton, TrojanInvisible, TrojanDelay };

enum class BasisPolicy : std::uint8_t { UniformZX, FixedZ, FixedX };

/// Direction of a transit of photon A: Bob -> Alice (forward) or Alice -> Bob (return).
enum class Leg : std::uint8_t { Forward, Return };

/// Which transits an intercept-resend attacker touches.
enum class AttackLegs : std::uint8_t { Forward, Return, Both };

std::string_view to_string(EveKind k);
std::string_view to_string(BasisPolicy p);
std::string_view to_string(AttackLegs l);
std::string_view to_string(Leg l);
/// Inverses of to_string; throw std::invalid_argument on unknown names.
EveKind eve_kind_from_string(std::string_view s);
BasisPolicy basis_policy_from_string(std::string_view s);
AttackLegs attack_legs_from_string(std::string_view s);

struct DofMask {
    bool pol = true;
    bool spa = true;
    bool empty() const noexcept { return !pol && !spa; }
    friend constexpr bool operator==(DofMask, DofMask) = default;
};

struct EveStrategy {
    EveKind kind = EveKind::None;
    DofMask dof_mask;
    BasisPolicy basis_policy = BasisPolicy::UniformZX;
    /// Intercept-resend only. Trojan probes are always injected on the forward
    /// leg and read out on the return leg.
    AttackLegs legs = AttackLegs::Both;

    bool is_trojan() const noexcept {
        return kind == EveKind::TrojanMultiPhoton || kind == EveKind::TrojanInvisible || kind == EveKind::TrojanDelay;
    }
    bool intercepts(Leg leg) const noexcept;
    /// Throws std::invalid_argument when kind = InterceptResend and the mask is empty.
    void validate() const;
};

/// Classical attributes of a signal travelling with photon A.
struct SignalMeta {
    int photon_count = 1;
    double wavelength_offset = 0.0;
    bool delayed = false;

    bool legitimate() const noexcept { return photon_count == 1 && wavelength_offset == 0.0 && !delayed; }
    friend bool operator==(const SignalMeta&, const SignalMeta&) = default;
};

enum class PnsKind : std::uint8_t { Ideal, BeamSplitter5050 };

std::string_view to_string(PnsKind k);
PnsKind pns_kind_from_string(std::string_view s);

struct DefenseConfig {
    bool filter_enabled = true;
    double filter_tolerance = 1.0;
    bool pns_enabled = true;
    PnsKind pns_kind = PnsKind::Ideal;

    /// Throws std::invalid_argument unless filter_tolerance > 0.
    void validate() const;
};

enum class DefenseOutcome : std::uint8_t { Clean, FilteredOut, PnsAlarm };

std::string_view to_string(DefenseOutcome o);

/// One DOF measurement made by Eve.
struct EveDofRecord {
    BasisChoice basis = BasisChoice::Z;
    std::uint8_t bit = 0;
    friend constexpr bool operator==(EveDofRecord, EveDofRecord) = default;
};

struct EveRecord {
    std::optional<EveDofRecord> pol;
    std::optional<EveDofRecord> spa;
};

struct InterceptResult {
    HyperState state;
    EveRecord record;
};

/// Eve measures each DOF in the strategy's mask and forwards a photon prepared
/// in her outcome state. A projective measurement already leaves the measured
/// DOF of photon A in that state, so the collapsed pair is the forwarded pair.
///
/// On the return leg Eve reuses the basis she used on the same position on the
/// forward leg (when `forward` is given), which lets her read one bit per DOF
/// of Alice's operation. Precondition: strategy.kind == InterceptResend.
InterceptResult intercept_resend(const HyperState& state, const EveStrategy& strategy, RandomStream& rng,
                                 const EveRecord* forward = nullptr);

/// Invisible-photon offsets are drawn with uniform magnitude in
/// [min_invisible_offset, max_invisible_offset] and random sign.
struct TrojanParams {
    double min_invisible_offset = 2.0;
    double max_invisible_offset = 10.0;
};

/// Signal metadata for a Trojan probe riding along with a legitimate photon.
/// Precondition: kind is one of the Trojan kinds.
SignalMeta craft_trojan(EveKind kind, RandomStream& rng, const TrojanParams& params = {});

/// Alice's receive-side countermeasures. The filter acts first; a PNS then
/// flags multi-photon signals. A 50/50 beam splitter flags an n-photon signal
/// only when both outputs click, i.e. with probability 1 - 2^(1-n).
DefenseOutcome apply_defenses(const SignalMeta& meta, const DefenseConfig& cfg, RandomStream& rng);

/// Eve's best guess of Alice's operation from her forward and return
/// measurements on one position. In a DOF measured twice in the same basis,
/// a Z-basis flip reveals the high bit of (index - 1) and an X-basis flip the
/// low bit; every bit she cannot read is guessed uniformly.
EncodingOp guess_operation(const EveRecord* forward, const EveRecord* ret, RandomStream& rng);

}  // namespace hqsdc

#endif  // HQSDC_ADVERSARY_HPP
