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

#include "hqsdc/adversary.hpp"

#include <cmath>
#include <stdexcept>

namespace hqsdc {

namespace {

BasisChoice draw_basis(BasisPolicy policy, RandomStream& rng) {
    switch (policy) {
        case BasisPolicy::FixedZ:
            return BasisChoice::Z;
        case BasisPolicy::FixedX:
            return BasisChoice::X;
        case BasisPolicy::UniformZX:
            break;
    }
    return rng.coin() ? BasisChoice::X : BasisChoice::Z;
}

// Two-bit index (i - 1 or j - 1) for one DOF.
int guess_dof(const std::optional<EveDofRecord>& fwd, const std::optional<EveDofRecord>& ret, RandomStream& rng) {
    const int high = static_cast<int>(rng.coin());
    const int low = static_cast<int>(rng.coin());
    if (!fwd || !ret || fwd->basis != ret->basis) {
        return high * 2 + low;
    }
    const int flip = fwd->bit != ret->bit ? 1 : 0;
    return fwd->basis == BasisChoice::Z ? flip * 2 + low : high * 2 + flip;
}

}  // namespace

std::string_view to_string(EveKind k) {
    switch (k) {
        case EveKind::None:
            return "none";
        case EveKind::InterceptResend:
            return "intercept_resend";
        case EveKind::TrojanMultiPhoton:
            return "trojan_multi_photon";
        case EveKind::TrojanInvisible:
            return "trojan_invisible";
        case EveKind::TrojanDelay:
            return "trojan_delay";
    }
    return "?";
}

std::string_view to_string(BasisPolicy p) {
    switch (p) {
        case BasisPolicy::UniformZX:
            return "uniform_zx";
        case BasisPolicy::FixedZ:
            return "fixed_z";
        case BasisPolicy::FixedX:
            return "fixed_x";
    }
    return "?";
}

std::string_view to_string(AttackLegs l) {
    switch (l) {
        case AttackLegs::Forward:
            return "forward";
        case AttackLegs::Return:
            return "return";
        case AttackLegs::Both:
            return "both";
    }
    return "?";
}

std::string_view to_string(Leg l) { return l == Leg::Forward ? "forward" : "return"; }

std::string_view to_string(PnsKind k) { return k == PnsKind::Ideal ? "ideal" : "beam_splitter_5050"; }

std::string_view to_string(DefenseOutcome o) {
    switch (o) {
        case DefenseOutcome::Clean:
            return "clean";
        case DefenseOutcome::FilteredOut:
            return "filtered_out";
        case DefenseOutcome::PnsAlarm:
            return "pns_alarm";
    }
    return "?";
}

EveKind eve_kind_from_string(std::string_view s) {
    for (auto k : {EveKind::None, EveKind::InterceptResend, EveKind::TrojanMultiPhoton, EveKind::TrojanInvisible,
                   EveKind::TrojanDelay}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown adversary kind '" + std::string(s) + "'");
}

BasisPolicy basis_policy_from_string(std::string_view s) {
    for (auto p : {BasisPolicy::UniformZX, BasisPolicy::FixedZ, BasisPolicy::FixedX}) {
        if (to_string(p) == s) {
            return p;
        }
    }
    throw std::invalid_argument("unknown basis policy '" + std::string(s) + "'");
}

AttackLegs attack_legs_from_string(std::string_view s) {
    for (auto l : {AttackLegs::Forward, AttackLegs::Return, AttackLegs::Both}) {
        if (to_string(l) == s) {
            return l;
        }
    }
    throw std::invalid_argument("unknown attack legs '" + std::string(s) + "'");
}

PnsKind pns_kind_from_string(std::string_view s) {
    for (auto k : {PnsKind::Ideal, PnsKind::BeamSplitter5050}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown PNS kind '" + std::string(s) + "'");
}

bool EveStrategy::intercepts(Leg leg) const noexcept {
    if (kind != EveKind::InterceptResend) {
        return false;
    }
    switch (legs) {
        case AttackLegs::Both:
            return true;
        case AttackLegs::Forward:
            return leg == Leg::Forward;
        case AttackLegs::Return:
            return leg == Leg::Return;
    }
    return false;
}

void EveStrategy::validate() const {
    if (kind == EveKind::InterceptResend && dof_mask.empty()) {
        throw std::invalid_argument("intercept-resend requires a nonempty dof_mask");
    }
}

void DefenseConfig::validate() const {
    if (!(filter_tolerance > 0.0) || !std::isfinite(filter_tolerance)) {
        throw std::invalid_argument("filter_tolerance must be positive and finite");
    }
}

InterceptResult intercept_resend(const HyperState& state, const EveStrategy& strategy, RandomStream& rng,
                                 const EveRecord* forward) {
    if (strategy.kind != EveKind::InterceptResend) {
        throw std::invalid_argument("intercept_resend called with a non intercept-resend strategy");
    }
    InterceptResult result{state, {}};
    auto measure = [&](Dof dof, const std::optional<EveDofRecord>& earlier) {
        const BasisChoice basis = earlier ? earlier->basis : draw_basis(strategy.basis_policy, rng);
        auto m = measure_dof(result.state, Photon::A, dof, basis, rng);
        result.state = m.collapsed;
        return EveDofRecord{basis, m.bit};
    };
    if (strategy.dof_mask.pol) {
        result.record.pol = measure(Dof::Pol, forward ? forward->pol : std::nullopt);
    }
    if (strategy.dof_mask.spa) {
        result.record.spa = measure(Dof::Spa, forward ? forward->spa : std::nullopt);
    }
    return result;
}

SignalMeta craft_trojan(EveKind kind, RandomStream& rng, const TrojanParams& params) {
    SignalMeta meta;
    switch (kind) {
        case EveKind::TrojanMultiPhoton:
            meta.photon_count = 2;
            break;
        case EveKind::TrojanInvisible: {
            // The invisible probe is an extra photon at a shifted wavelength.
            meta.photon_count = 2;
            const double span = params.max_invisible_offset - params.min_invisible_offset;
            const double magnitude = params.min_invisible_offset + span * rng.uniform();
            meta.wavelength_offset = rng.coin() ? magnitude : -magnitude;
            break;
        }
        case EveKind::TrojanDelay:
            meta.photon_count = 2;
            meta.delayed = true;
            break;
        default:
            throw std::invalid_argument("craft_trojan requires a Trojan adversary kind");
    }
    return meta;
}

DefenseOutcome apply_defenses(const SignalMeta& meta, const DefenseConfig& cfg, RandomStream& rng) {
    if (cfg.filter_enabled && std::abs(meta.wavelength_offset) > cfg.filter_tolerance) {
        return DefenseOutcome::FilteredOut;
    }
    if (cfg.pns_enabled && meta.photon_count >= 2) {
        if (cfg.pns_kind == PnsKind::Ideal) {
            return DefenseOutcome::PnsAlarm;
        }
        // Every photon picks an arm independently; silent only if all pick the same arm.
        const int first_arm = rng.coin() ? 1 : 0;
        for (int k = 1; k < meta.photon_count; ++k) {
            if ((rng.coin() ? 1 : 0) != first_arm) {
                return DefenseOutcome::PnsAlarm;
            }
        }
    }
    return DefenseOutcome::Clean;
}

EncodingOp guess_operation(const EveRecord* forward, const EveRecord* ret, RandomStream& rng) {
    const std::optional<EveDofRecord> none;
    const int i = guess_dof(forward ? forward->pol : none, ret ? ret->pol : none, rng);
    const int j = guess_dof(forward ? forward->spa : none, ret ? ret->spa : none, rng);
    return EncodingOp(i + 1, j + 1);
}

}  // namespace hqsdc
