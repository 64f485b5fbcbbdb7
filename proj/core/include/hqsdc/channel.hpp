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

#ifndef HQSDC_CHANNEL_HPP
#define HQSDC_CHANNEL_HPP

#include <optional>
#include <variant>

#include "hqsdc/adversary.hpp"
#include "hqsdc/hyperstate.hpp"
#include "hqsdc/random.hpp"

namespace hqsdc {

/// Two-fiber channel between Bob and Alice. A Pauli probability p applies
/// each of X, Y, Z with probability p / 3 to the matching DOF of photon A.
struct ChannelParams {
    double loss_prob = 0.0;
    double pauli_p_pol = 0.0;
    double pauli_p_spa = 0.0;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
};

struct Delivered {
    HyperState state;
    SignalMeta meta;
    std::optional<EveRecord> eve_record;
};

struct Lost {};

using TransitResult = std::variant<Delivered, Lost>;

/// Stochastic Pauli channel on one DOF of photon A.
HyperState apply_pauli_noise(const HyperState& state, Dof dof, double p, RandomStream& rng);

/// One transit of photon A. Order: loss draw, then Eve, then Pauli noise per
/// DOF. Photon B never enters the channel. Trojan probes are attached on the
/// forward leg. `forward_record` is Eve's record for this position from the
/// forward leg, if any.
TransitResult transmit(const HyperState& state, const SignalMeta& meta, const ChannelParams& params,
                       const EveStrategy& eve, Leg leg, RandomStream& rng,
                       const EveRecord* forward_record = nullptr);

}  // namespace hqsdc

#endif  // HQSDC_CHANNEL_HPP
