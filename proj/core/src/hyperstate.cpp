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

#include "hqsdc/hyperstate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hqsdc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Probabilities below this are treated as exact zeros when sampling, so that
// a state which is exactly one basis vector up to rounding always yields it.
constexpr double kProbabilityFloor = 1e-20;

// Bit position of (photon, dof) inside the normative index.
constexpr unsigned bit_of(Photon who, Dof dof) {
    if (dof == Dof::Pol) {
        return who == Photon::A ? 3 : 2;
    }
    return who == Photon::A ? 1 : 0;
}

// Two-qubit Bell vectors over index qA * 2 + qB.
constexpr std::array<std::array<double, 4>, 4> kBellVectors = {{
    {kInvSqrt2, 0.0, 0.0, kInvSqrt2},
    {kInvSqrt2, 0.0, 0.0, -kInvSqrt2},
    {0.0, kInvSqrt2, kInvSqrt2, 0.0},
    {0.0, kInvSqrt2, -kInvSqrt2, 0.0},
}};

// Index split into the polarization pair (polA, polB) and spatial pair (spaA, spaB).
constexpr std::size_t pol_pair(std::size_t k) { return k >> 2; }
constexpr std::size_t spa_pair(std::size_t k) { return k & 3; }

template <std::size_t N>
std::size_t sample_index(const std::array<double, N>& probs, RandomStream& rng) {
    double total = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < N; ++k) {
        if (probs[k] > kProbabilityFloor) {
            total += probs[k];
            last_nonzero = k;
        }
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        if (probs[k] > kProbabilityFloor) {
            acc += probs[k];
            if (u < acc) {
                return k;
            }
        }
    }
    return last_nonzero;
}

HyperState to_measurement_frame(const HyperState& state, Photon who, MeasBasis basis) {
    HyperState out = state;
    if (basis.pol == BasisChoice::X) {
        out = apply_hadamard(out, who, Dof::Pol);
    }
    if (basis.spa == BasisChoice::X) {
        out = apply_hadamard(out, who, Dof::Spa);
    }
    return out;
}

}  // namespace

std::string_view to_string(Bell b) {
    switch (b) {
        case Bell::PhiPlus:
            return "phi+";
        case Bell::PhiMinus:
            return "phi-";
        case Bell::PsiPlus:
            return "psi+";
        case Bell::PsiMinus:
            return "psi-";
    }
    return "?";
}

std::string to_string(BellIndex b) {
    std::string out(to_string(b.p));
    out += '/';
    out += to_string(b.s);
    return out;
}

EncodingOp::EncodingOp(int i, int j) : i_(i), j_(j) {
    if (i < 1 || i > 4 || j < 1 || j > 4) {
        throw std::invalid_argument("EncodingOp indices must lie in 1..4, got (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
    }
}

EncodingOp EncodingOp::from_bits(std::uint8_t nibble) {
    if (nibble > 15) {
        throw std::invalid_argument("EncodingOp::from_bits: value exceeds 4 bits");
    }
    return EncodingOp((nibble >> 2) + 1, (nibble & 3) + 1);
}

std::string to_string(EncodingOp op) {
    return "U" + std::to_string(op.pol_index()) + std::to_string(op.spa_index());
}

std::string to_string(MeasBasis b) {
    std::string out = b.pol == BasisChoice::Z ? "ZP" : "XP";
    out += b.spa == BasisChoice::Z ? ",ZS" : ",XS";
    return out;
}

double SourceParams::phi_reduced() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phi, two_pi);
    if (p < 0) {
        p += two_pi;
    }
    return p;
}

HyperState::HyperState() {
    amps_.fill(Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

double HyperState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) {
        s += std::norm(a);
    }
    return s;
}

bool HyperState::is_normalized(double tol) const noexcept { return std::abs(norm_squared() - 1.0) <= tol; }

HyperState& HyperState::normalize() {
    const double n2 = norm_squared();
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw std::domain_error("HyperState::normalize: state has zero or non-finite norm");
    }
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) {
        a *= scale;
    }
    return *this;
}

Amplitude HyperState::inner(const HyperState& other) const noexcept {
    Amplitude s{0.0, 0.0};
    for (std::size_t k = 0; k < kDim; ++k) {
        s += std::conj(amps_[k]) * other.amps_[k];
    }
    return s;
}

bool HyperState::equivalent(const HyperState& other, double tol) const noexcept {
    return std::abs(std::abs(inner(other)) - 1.0) <= tol;
}

std::vector<std::pair<double, double>> HyperState::to_pairs() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(kDim);
    for (const auto& a : amps_) {
        out.emplace_back(a.real(), a.imag());
    }
    return out;
}

HyperState HyperState::from_pairs(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() != kDim) {
        throw std::invalid_argument("HyperState::from_pairs: expected 16 (re, im) pairs, got " +
                                    std::to_string(pairs.size()));
    }
    Amplitudes amps;
    for (std::size_t k = 0; k < kDim; ++k) {
        amps[k] = {pairs[k].first, pairs[k].second};
    }
    return HyperState(amps);
}

Op2 pol_encoding_matrix(int i) {
    // Row-major in the {H, V} basis.
    switch (i) {
        case 1:
            return {1.0, 0.0, 0.0, 1.0};
        case 2:
            return {1.0, 0.0, 0.0, -1.0};
        case 3:
            return {0.0, 1.0, 1.0, 0.0};
        case 4:
            return {0.0, -1.0, 1.0, 0.0};
        default:
            throw std::invalid_argument("polarization encoding index must lie in 1..4");
    }
}

Op2 spa_encoding_matrix(int j) {
    // Same algebra as polarization with a1 -> H, a2 -> V.
    return pol_encoding_matrix(j);
}

Op2 pauli_matrix(Pauli p) {
    constexpr Amplitude i{0.0, 1.0};
    switch (p) {
        case Pauli::I:
            return {1.0, 0.0, 0.0, 1.0};
        case Pauli::X:
            return {0.0, 1.0, 1.0, 0.0};
        case Pauli::Y:
            return {0.0, -i, i, 0.0};
        case Pauli::Z:
            return {1.0, 0.0, 0.0, -1.0};
    }
    throw std::invalid_argument("unknown Pauli");
}

Op2 hadamard_matrix() { return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}; }

HyperState apply_local(const HyperState& state, Photon who, Dof dof, const Op2& op) {
    const std::size_t mask = std::size_t{1} << bit_of(who, dof);
    HyperState out = state;
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        if (k & mask) {
            continue;
        }
        const Amplitude a0 = state[k];
        const Amplitude a1 = state[k | mask];
        out[k] = op[0] * a0 + op[1] * a1;
        out[k | mask] = op[2] * a0 + op[3] * a1;
    }
    return out;
}

HyperState make_hyper_bell(BellIndex idx) {
    const auto& pol = kBellVectors[static_cast<std::size_t>(idx.p)];
    const auto& spa = kBellVectors[static_cast<std::size_t>(idx.s)];
    HyperState::Amplitudes amps;
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        amps[k] = pol[pol_pair(k)] * spa[spa_pair(k)];
    }
    return HyperState(amps);
}

HyperState apply_encoding(const HyperState& state, EncodingOp op) {
    HyperState out = apply_local(state, Photon::A, Dof::Pol, pol_encoding_matrix(op.pol_index()));
    return apply_local(out, Photon::A, Dof::Spa, spa_encoding_matrix(op.spa_index()));
}

HyperState apply_pauli(const HyperState& state, Photon who, Dof dof, Pauli p) {
    if (p == Pauli::I) {
        return state;
    }
    return apply_local(state, who, dof, pauli_matrix(p));
}

HyperState apply_hadamard(const HyperState& state, Photon who, Dof dof) {
    return apply_local(state, who, dof, hadamard_matrix());
}

std::array<double, 16> bell_probabilities(const HyperState& state) {
    // Project the polarization pair and the spatial pair onto their Bell bases
    // independently; the hyper-Bell basis is their tensor product.
    std::array<double, 16> probs{};
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t s = 0; s < 4; ++s) {
            Amplitude c{0.0, 0.0};
            for (std::size_t k = 0; k < HyperState::kDim; ++k) {
                c += kBellVectors[p][pol_pair(k)] * kBellVectors[s][spa_pair(k)] * state[k];
            }
            probs[p * 4 + s] = std::norm(c);
        }
    }
    return probs;
}

BellIndex chbsa(const HyperState& state, RandomStream& rng) {
    return BellIndex::from_ordinal(sample_index(bell_probabilities(state), rng));
}

PhotonMeasurement measure_photon(const HyperState& state, Photon who, MeasBasis basis, RandomStream& rng) {
    HyperState frame = to_measurement_frame(state, who, basis);
    const unsigned pol_bit = bit_of(who, Dof::Pol);
    const unsigned spa_bit = bit_of(who, Dof::Spa);

    std::array<double, 4> probs{};
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        probs[((k >> pol_bit) & 1) * 2 + ((k >> spa_bit) & 1)] += std::norm(frame[k]);
    }
    const std::size_t pick = sample_index(probs, rng);
    const PhotonOutcome outcome{static_cast<std::uint8_t>(pick >> 1), static_cast<std::uint8_t>(pick & 1)};

    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        if (((k >> pol_bit) & 1) != outcome.pol_bit || ((k >> spa_bit) & 1) != outcome.spa_bit) {
            frame[k] = 0.0;
        }
    }
    frame.normalize();
    // Undo the frame change; Hadamard is its own inverse.
    return {outcome, to_measurement_frame(frame, who, basis)};
}

DofMeasurement measure_dof(const HyperState& state, Photon who, Dof dof, BasisChoice basis, RandomStream& rng) {
    HyperState frame = basis == BasisChoice::X ? apply_hadamard(state, who, dof) : state;
    const unsigned bit = bit_of(who, dof);
    std::array<double, 2> probs{};
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        probs[(k >> bit) & 1] += std::norm(frame[k]);
    }
    const auto outcome = static_cast<std::uint8_t>(sample_index(probs, rng));
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        if (((k >> bit) & 1) != outcome) {
            frame[k] = 0.0;
        }
    }
    frame.normalize();
    if (basis == BasisChoice::X) {
        frame = apply_hadamard(frame, who, dof);
    }
    return {outcome, frame};
}

std::array<double, 16> joint_outcome_probabilities(const HyperState& state, MeasBasis basis) {
    const HyperState frame = to_measurement_frame(to_measurement_frame(state, Photon::A, basis), Photon::B, basis);
    std::array<double, 16> probs{};
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        // Normative index is polA, polB, spaA, spaB, which is already the requested layout.
        probs[k] = std::norm(frame[k]);
    }
    return probs;
}

DofMismatch mismatch_probability(const HyperState& state, MeasBasis basis) {
    const auto probs = joint_outcome_probabilities(state, basis);
    DofMismatch m;
    for (std::size_t k = 0; k < HyperState::kDim; ++k) {
        if (((k >> 3) & 1) != ((k >> 2) & 1)) {
            m.pol += probs[k];
        }
        if (((k >> 1) & 1) != (k & 1)) {
            m.spa += probs[k];
        }
    }
    return m;
}

HyperState source_state(const SourceParams& params) {
    if (!std::isfinite(params.r) || params.r < 0.0 || !std::isfinite(params.phi)) {
        throw std::domain_error("source_state: r must be finite and non-negative and phi finite");
    }
    const Amplitude lower = std::polar(params.r, params.phi);
    HyperState::Amplitudes amps;
    amps.fill(Amplitude{0.0, 0.0});
    for (Pol p : {Pol::H, Pol::V}) {
        amps[HyperState::index(p, p, Spatial::M1, Spatial::M1)] = 1.0;
        amps[HyperState::index(p, p, Spatial::M2, Spatial::M2)] = lower;
    }
    HyperState s(amps);
    s.normalize();
    return s;
}

double source_fidelity(const SourceParams& params) {
    return std::norm(make_hyper_bell({Bell::PhiPlus, Bell::PhiPlus}).inner(source_state(params)));
}

double source_fidelity_closed_form(const SourceParams& params) {
    const double r2 = params.r * params.r;
    return (1.0 + r2 + 2.0 * params.r * std::cos(params.phi)) / (2.0 * (1.0 + r2));
}

namespace {

struct DenseCodingTables {
    std::array<BellIndex, 16> bell_of_op;
    std::array<EncodingOp, 16> op_of_bell;
};

DenseCodingTables build_dense_coding_tables() {
    const HyperState reference = make_hyper_bell({Bell::PhiPlus, Bell::PhiPlus});
    DenseCodingTables t;
    std::array<bool, 16> seen{};
    for (std::size_t k = 0; k < 16; ++k) {
        const EncodingOp op = EncodingOp::from_ordinal(k);
        const auto probs = bell_probabilities(apply_encoding(reference, op));
        std::size_t best = 0;
        for (std::size_t b = 1; b < 16; ++b) {
            if (probs[b] > probs[best]) {
                best = b;
            }
        }
        if (std::abs(probs[best] - 1.0) > kAmplitudeTolerance || seen[best]) {
            throw std::logic_error("dense-coding table is not a bijection onto the hyper-Bell basis");
        }
        seen[best] = true;
        t.bell_of_op[k] = BellIndex::from_ordinal(best);
        t.op_of_bell[best] = op;
    }
    return t;
}

const DenseCodingTables& dense_coding_tables() {
    static const DenseCodingTables tables = build_dense_coding_tables();
    return tables;
}

}  // namespace

BellIndex bell_from_op(EncodingOp op) { return dense_coding_tables().bell_of_op[op.ordinal()]; }

EncodingOp op_from_bell(BellIndex bell) { return dense_coding_tables().op_of_bell[bell.ordinal()]; }

MeasBasis random_basis(RandomStream& rng) {
    MeasBasis b;
    b.pol = rng.coin() ? BasisChoice::X : BasisChoice::Z;
    b.spa = rng.coin() ? BasisChoice::X : BasisChoice::Z;
    return b;
}

}  // namespace hqsdc
