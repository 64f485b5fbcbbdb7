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

#include "hqsdc/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hqsdc {

namespace {

void check_probability(double value, const char* name, bool allow_one) {
    const bool ok = std::isfinite(value) && value >= 0.0 && (allow_one ? value <= 1.0 : value < 1.0);
    if (!ok) {
        throw std::invalid_argument(std::string("channel.") + name + " out of range: " + std::to_string(value));
    }
}

}  // namespace

void ChannelParams::validate() const {
    check_probability(loss_prob, "loss_prob", false);
    check_probability(pauli_p_pol, "pauli_p_pol", true);
    check_probability(pauli_p_spa, "pauli_p_spa", true);
}

HyperState apply_pauli_noise(const HyperState& state, Dof dof, double p, RandomStream& rng) {
    if (p <= 0.0) {
        return state;
    }
    if (!rng.bernoulli(p)) {
        return state;
    }
    constexpr Pauli kErrors[] = {Pauli::X, Pauli::Y, Pauli::Z};
    return apply_pauli(state, Photon::A, dof, kErrors[rng.below(3)]);
}

TransitResult transmit(const HyperState& state, const SignalMeta& meta, const ChannelParams& params,
                       const EveStrategy& eve, Leg leg, RandomStream& rng, const EveRecord* forward_record) {
    if (params.loss_prob > 0.0 && rng.bernoulli(params.loss_prob)) {
        return Lost{};
    }
    Delivered out{state, meta, std::nullopt};
    if (eve.intercepts(leg)) {
        auto r = intercept_resend(out.state, eve, rng, forward_record);
        out.state = r.state;
        out.eve_record = r.record;
    } else if (eve.is_trojan() && leg == Leg::Forward) {
        out.meta = craft_trojan(eve.kind, rng);
    }
    out.state = apply_pauli_noise(out.state, Dof::Pol, params.pauli_p_pol, rng);
    out.state = apply_pauli_noise(out.state, Dof::Spa, params.pauli_p_spa, rng);
    return out;
}

}  // namespace hqsdc
