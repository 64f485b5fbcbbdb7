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

#ifndef HQSDC_HYPERSTATE_HPP
#define HQSDC_HYPERSTATE_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hqsdc/random.hpp"

namespace hqsdc {

using Amplitude = std::complex<double>;

/// Tolerance for exact amplitude-level assertions.
inline constexpr double kAmplitudeTolerance = 1e-12;

enum class Pol : std::uint8_t { H = 0, V = 1 };

/// Spatial mode label. Photon A reads M1/M2 as a1/a2, photon B as b1/b2.
enum class Spatial : std::uint8_t { M1 = 0, M2 = 1 };

enum class Photon : std::uint8_t { A, B };

enum class Dof : std::uint8_t { Pol, Spa };

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Two-qubit Bell state label, used for both degrees of freedom.
enum class Bell : std::uint8_t { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

std::string_view to_string(Bell b);

/// One of the 16 hyperentangled Bell states: polarization Bell state `p`
/// tensored with spatial Bell state `s`.
struct BellIndex {
    Bell p = Bell::PhiPlus;
    Bell s = Bell::PhiPlus;

    /// p * 4 + s, in [0, 16).
    constexpr std::size_t ordinal() const noexcept {
        return static_cast<std::size_t>(p) * 4 + static_cast<std::size_t>(s);
    }
    static constexpr BellIndex from_ordinal(std::size_t k) noexcept {
        return {static_cast<Bell>((k >> 2) & 3), static_cast<Bell>(k & 3)};
    }
    friend constexpr bool operator==(BellIndex, BellIndex) = default;
};

std::string to_string(BellIndex b);

/// Encoding unitary U_ij = U^P_i (x) U^S_j acting on photon A, i, j in 1..4.
///
///   U^P_1 = |H><H| + |V><V|     U^P_2 = |H><H| - |V><V|
///   U^P_3 = |V><H| + |H><V|     U^P_4 = |V><H| - |H><V|
///
/// and U^S_j likewise with a1, a2 in place of H, V.
class EncodingOp {
   public:
    /// Throws std::invalid_argument unless 1 <= i, j <= 4.
    EncodingOp(int i, int j);
    constexpr EncodingOp() = default;

    int pol_index() const noexcept { return i_; }
    int spa_index() const noexcept { return j_; }

    /// Normative 4-bit mapping: (i - 1) in the high two bits, (j - 1) in the low two.
    std::uint8_t bits() const noexcept { return static_cast<std::uint8_t>(((i_ - 1) << 2) | (j_ - 1)); }
    static EncodingOp from_bits(std::uint8_t nibble);

    /// (i - 1) * 4 + (j - 1); equals bits().
    std::size_t ordinal() const noexcept { return bits(); }
    static EncodingOp from_ordinal(std::size_t k) { return from_bits(static_cast<std::uint8_t>(k)); }

    friend bool operator==(EncodingOp, EncodingOp) = default;

   private:
    int i_ = 1;
    int j_ = 1;
};

std::string to_string(EncodingOp op);

enum class BasisChoice : std::uint8_t { Z, X };

/// Measuring basis for one photon: Z^P/X^P for polarization and Z^S/X^S for
/// the spatial mode. X bases are the Hadamard conjugates of Z.
struct MeasBasis {
    BasisChoice pol = BasisChoice::Z;
    BasisChoice spa = BasisChoice::Z;
    friend constexpr bool operator==(MeasBasis, MeasBasis) = default;
};

std::string to_string(MeasBasis b);

/// Nonideal source parameters: relative emission amplitude into the lower
/// modes and the relative phase between the two emission paths.
struct SourceParams {
    double r = 1.0;
    double phi = 0.0;

    /// phi reduced into [0, 2pi). Reporting only.
    double phi_reduced() const;
};

/// Pure state of a two-photon pair over {H,V} x {m1,m2} per photon.
///
/// Amplitudes are stored in the normative order
/// polA * 8 + polB * 4 + spaA * 2 + spaB.
class HyperState {
   public:
    static constexpr std::size_t kDim = 16;
    using Amplitudes = std::array<Amplitude, kDim>;

    /// |HH a1b1>.
    HyperState();
    /// Takes the amplitudes as given; call normalize() for unnormalized input.
    explicit HyperState(const Amplitudes& amps) : amps_(amps) {}

    static constexpr std::size_t index(Pol pol_a, Pol pol_b, Spatial spa_a, Spatial spa_b) noexcept {
        return static_cast<std::size_t>(pol_a) * 8 + static_cast<std::size_t>(pol_b) * 4 +
               static_cast<std::size_t>(spa_a) * 2 + static_cast<std::size_t>(spa_b);
    }

    const Amplitude& operator[](std::size_t k) const { return amps_[k]; }
    Amplitude& operator[](std::size_t k) { return amps_[k]; }
    std::span<const Amplitude, kDim> amplitudes() const noexcept { return amps_; }

    double norm_squared() const noexcept;
    bool is_normalized(double tol = kAmplitudeTolerance) const noexcept;
    /// Throws std::domain_error on the zero vector.
    HyperState& normalize();

    /// <this|other>.
    Amplitude inner(const HyperState& other) const noexcept;

    /// True when |<this|other>| = 1 within tol, i.e. equal as rays.
    bool equivalent(const HyperState& other, double tol = kAmplitudeTolerance) const noexcept;

    /// Bit-exact amplitude equality.
    friend bool operator==(const HyperState&, const HyperState&) = default;

    /// Serialization: 16 (re, im) pairs in the normative index order.
    std::vector<std::pair<double, double>> to_pairs() const;
    static HyperState from_pairs(std::span<const std::pair<double, double>> pairs);

   private:
    Amplitudes amps_;
};

/// 2x2 operator on one degree of freedom of one photon, row-major.
using Op2 = std::array<Amplitude, 4>;

Op2 pol_encoding_matrix(int i);
Op2 spa_encoding_matrix(int j);
Op2 pauli_matrix(Pauli p);
Op2 hadamard_matrix();

/// Applies `op` to one degree of freedom of one photon.
HyperState apply_local(const HyperState& state, Photon who, Dof dof, const Op2& op);

/// Tensor product of polarization Bell state idx.p and spatial Bell state idx.s.
HyperState make_hyper_bell(BellIndex idx);

/// Applies U^P_i (x) U^S_j to photon A; photon B is untouched.
HyperState apply_encoding(const HyperState& state, EncodingOp op);

HyperState apply_pauli(const HyperState& state, Photon who, Dof dof, Pauli p);

/// Hadamard on one DOF of one photon; maps the Z basis of that DOF onto X.
HyperState apply_hadamard(const HyperState& state, Photon who, Dof dof);

/// |<Bell_k|state>|^2 for every k, indexed by BellIndex::ordinal().
std::array<double, 16> bell_probabilities(const HyperState& state);

/// Ideal complete hyperentangled-Bell-state analysis: projective measurement
/// in the 16-element hyper-Bell basis, sampled by the Born rule.
BellIndex chbsa(const HyperState& state, RandomStream& rng);

/// Classical bits of a single-photon measurement. 0 means H / m1 / "+",
/// 1 means V / m2 / "-", depending on the basis used.
struct PhotonOutcome {
    std::uint8_t pol_bit = 0;
    std::uint8_t spa_bit = 0;
    friend constexpr bool operator==(PhotonOutcome, PhotonOutcome) = default;
};

struct PhotonMeasurement {
    PhotonOutcome outcome;
    HyperState collapsed;
};

/// Measures both DOFs of one photon in `basis` and returns the outcome and
/// the renormalized post-measurement state.
PhotonMeasurement measure_photon(const HyperState& state, Photon who, MeasBasis basis, RandomStream& rng);

struct DofMeasurement {
    std::uint8_t bit = 0;
    HyperState collapsed;
};

/// Measures a single DOF of one photon, leaving the other DOF coherent.
DofMeasurement measure_dof(const HyperState& state, Photon who, Dof dof, BasisChoice basis, RandomStream& rng);

/// Exact joint outcome distribution when photon A and photon B are both
/// measured in `basis`. Indexed by a_pol * 8 + b_pol * 4 + a_spa * 2 + b_spa.
std::array<double, 16> joint_outcome_probabilities(const HyperState& state, MeasBasis basis);

/// Exact probability that A and B disagree, per DOF, when both are measured in `basis`.
struct DofMismatch {
    double pol = 0.0;
    double spa = 0.0;
};
DofMismatch mismatch_probability(const HyperState& state, MeasBasis basis);

/// Normalized single-pair source state, proportional to
/// (|a1b1> + r e^{i phi} |a2b2>) (x) (|HH> + |VV>).
/// Throws std::domain_error for non-finite or negative r.
HyperState source_state(const SourceParams& params);

/// |<Phi+ Phi+|source_state(params)>|^2.
double source_fidelity(const SourceParams& params);

/// (1 + r^2 + 2 r cos phi) / (2 (1 + r^2)).
double source_fidelity_closed_form(const SourceParams& params);

/// The Bell state produced by applying `op` to Phi+ Phi+.
BellIndex bell_from_op(EncodingOp op);
/// Inverse of bell_from_op.
EncodingOp op_from_bell(BellIndex bell);

/// Uniform over the four combinations.
MeasBasis random_basis(RandomStream& rng);

}  // namespace hqsdc

#endif  // HQSDC_HYPERSTATE_HPP
