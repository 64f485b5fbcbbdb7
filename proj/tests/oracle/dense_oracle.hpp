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

// Brute-force reference model used only by tests.
//
// States are plain dense vectors built from explicit kets with Kronecker
// products in the factor order (polA, polB, spaA, spaB); operators are dense
// 16x16 matrices built the same way; measurements are projector sandwiches.
// Nothing here calls into the library, so agreement between the two is a
// real cross-check of the library's index arithmetic.

#ifndef HQSDC_TESTS_DENSE_ORACLE_HPP
#define HQSDC_TESTS_DENSE_ORACLE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<Vec>;

inline Vec kron(const Vec& a, const Vec& b) {
    Vec out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
    const std::size_t n = a.size() * b.size();
    Mat out(n, Vec(n));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k)
                for (std::size_t l = 0; l < b.size(); ++l) out[i * b.size() + k][j * b.size() + l] = a[i][j] * b[k][l];
    return out;
}

inline Vec matvec(const Mat& m, const Vec& v) {
    Vec out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        C s = 0;
        for (std::size_t j = 0; j < v.size(); ++j) s += m[i][j] * v[j];
        out[i] = s;
    }
    return out;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size();
    Mat out(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline C dot(const Vec& a, const Vec& b) {
    C s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline double norm2(const Vec& v) { return std::real(dot(v, v)); }

inline Vec scale(const Vec& v, C f) {
    Vec out = v;
    for (auto& x : out) x *= f;
    return out;
}

inline Vec add(const Vec& a, const Vec& b, C fb = 1.0) {
    Vec out = a;
    for (std::size_t k = 0; k < a.size(); ++k) out[k] += fb * b[k];
    return out;
}

inline Mat outer(const Vec& ket, const Vec& bra) {
    Mat m(ket.size(), Vec(bra.size()));
    for (std::size_t i = 0; i < ket.size(); ++i)
        for (std::size_t j = 0; j < bra.size(); ++j) m[i][j] = ket[i] * std::conj(bra[j]);
    return m;
}

inline Mat madd(const Mat& a, const Mat& b, C fb = 1.0) {
    Mat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] += fb * b[i][j];
    return out;
}

// Single-qubit kets. The spatial modes reuse the same two vectors: a1 ~ H, a2 ~ V.
inline const Vec kH{1.0, 0.0};
inline const Vec kV{0.0, 1.0};
inline const Vec kPlus = scale(add(kH, kV), 1.0 / std::sqrt(2.0));
inline const Vec kMinus = scale(add(kH, kV, -1.0), 1.0 / std::sqrt(2.0));
inline const Mat kId2 = madd(outer(kH, kH), outer(kV, kV));

// Two-qubit Bell pair: 0 phi+, 1 phi-, 2 psi+, 3 psi-.
inline Vec bell_pair(int which) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (which) {
        case 0:
            return scale(add(kron(kH, kH), kron(kV, kV)), s);
        case 1:
            return scale(add(kron(kH, kH), kron(kV, kV), -1.0), s);
        case 2:
            return scale(add(kron(kH, kV), kron(kV, kH)), s);
        default:
            return scale(add(kron(kH, kV), kron(kV, kH), -1.0), s);
    }
}

inline Vec hyper_bell(int p, int s) { return kron(bell_pair(p), bell_pair(s)); }

// Encoding operators written as ket-bra sums, exactly as tabulated.
inline Mat encoding_2x2(int i) {
    switch (i) {
        case 1:
            return madd(outer(kH, kH), outer(kV, kV));
        case 2:
            return madd(outer(kH, kH), outer(kV, kV), -1.0);
        case 3:
            return madd(outer(kV, kH), outer(kH, kV));
        default:
            return madd(outer(kV, kH), outer(kH, kV), -1.0);
    }
}

// Factor slots: 0 polA, 1 polB, 2 spaA, 3 spaB.
inline Mat embed(const Mat& op, int slot) {
    Mat out = slot == 0 ? op : kId2;
    for (int k = 1; k < 4; ++k) out = kron(out, k == slot ? op : kId2);
    return out;
}

inline Mat encoding_full(int i, int j) { return matmul(embed(encoding_2x2(i), 0), embed(encoding_2x2(j), 2)); }

inline Mat pauli_2x2(int k) {  // 0 I, 1 X, 2 Y, 3 Z
    const C im{0.0, 1.0};
    switch (k) {
        case 0:
            return kId2;
        case 1:
            return madd(outer(kV, kH), outer(kH, kV));
        case 2:
            // Y = i|V><H| - i|H><V|
            return madd(madd(Mat(2, Vec(2)), outer(kV, kH), im), outer(kH, kV), -im);
        default:
            return madd(outer(kH, kH), outer(kV, kV), -1.0);
    }
}

// Projector onto outcome `bit` of `basis` (0 = Z, 1 = X) in a factor slot.
inline Mat projector(int slot, int basis, int bit) {
    const Vec& ket = basis == 0 ? (bit == 0 ? kH : kV) : (bit == 0 ? kPlus : kMinus);
    return embed(outer(ket, ket), slot);
}

// |<hyper_bell(p, s)|v>|^2 for all 16, indexed p * 4 + s.
inline std::array<double, 16> bell_probs(const Vec& v) {
    std::array<double, 16> out{};
    for (int p = 0; p < 4; ++p)
        for (int s = 0; s < 4; ++s) out[p * 4 + s] = std::norm(dot(hyper_bell(p, s), v));
    return out;
}

// Probability that photon A and B disagree in `dof` (0 pol, 1 spa) when both
// photons are measured in `basis` for that DOF. `v` may be unnormalized; the
// result is then weighted by its squared norm.
inline double mismatch_weight(const Vec& v, int dof, int basis) {
    const int slot_a = dof == 0 ? 0 : 2;
    const int slot_b = dof == 0 ? 1 : 3;
    double w = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (x != y) w += norm2(matvec(projector(slot_b, basis, y), matvec(projector(slot_a, basis, x), v)));
    return w;
}

// Probability of agreement in both DOFs for bases (pol_basis, spa_basis).
inline double full_match_weight(const Vec& v, int pol_basis, int spa_basis) {
    double w = 0.0;
    for (int p = 0; p < 2; ++p)
        for (int s = 0; s < 2; ++s) {
            Vec t = matvec(projector(0, pol_basis, p), v);
            t = matvec(projector(1, pol_basis, p), t);
            t = matvec(projector(2, spa_basis, s), t);
            t = matvec(projector(3, spa_basis, s), t);
            w += norm2(t);
        }
    return w;
}

struct CheckProbabilities {
    double pol = 0.0;
    double spa = 0.0;
    double any = 0.0;
};

// Eve's projective branches: every attacked DOF of photon A is measured in a
// basis drawn uniformly from {Z, X}. Each branch carries its weight in the
// squared norm of the returned (unnormalized) vector times the basis factor.
template <typename Visit>
void for_each_eve_branch(const Vec& psi, bool pol, bool spa, Visit&& visit) {
    for (int pb = 0; pb < (pol ? 2 : 1); ++pb)
        for (int po = 0; po < (pol ? 2 : 1); ++po)
            for (int sb = 0; sb < (spa ? 2 : 1); ++sb)
                for (int so = 0; so < (spa ? 2 : 1); ++so) {
                    Vec v = psi;
                    double basis_weight = 1.0;
                    if (pol) {
                        v = matvec(projector(0, pb, po), v);
                        basis_weight *= 0.5;
                    }
                    if (spa) {
                        v = matvec(projector(2, sb, so), v);
                        basis_weight *= 0.5;
                    }
                    visit(v, basis_weight);
                }
}

// First check after an intercept-resend on the forward leg: Alice picks each
// DOF basis uniformly; Bob measures in the same bases.
inline CheckProbabilities first_check_under_intercept(const Vec& psi, bool pol, bool spa) {
    CheckProbabilities out;
    for_each_eve_branch(psi, pol, spa, [&](const Vec& v, double w) {
        for (int ap = 0; ap < 2; ++ap)
            for (int as = 0; as < 2; ++as) {
                const double f = w * 0.25;
                out.pol += f * mismatch_weight(v, 0, ap);
                out.spa += f * mismatch_weight(v, 1, as);
                out.any += f * (norm2(v) - full_match_weight(v, ap, as));
            }
    });
    return out;
}

// Second check: Alice applies a uniformly random U_ij to Phi+ Phi+, Eve
// intercepts the return leg, Bob runs the 16-outcome Bell analysis and the
// outcome is compared against the Bell state U_ij should have produced.
inline CheckProbabilities second_check_under_intercept(bool pol, bool spa) {
    CheckProbabilities out;
    const Vec ref = hyper_bell(0, 0);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            const Vec encoded = matvec(encoding_full(i, j), ref);
            const auto clean = bell_probs(encoded);
            int expected = 0;
            for (int k = 1; k < 16; ++k)
                if (clean[k] > clean[expected]) expected = k;
            for_each_eve_branch(encoded, pol, spa, [&](const Vec& v, double w) {
                const auto probs = bell_probs(v);
                for (int k = 0; k < 16; ++k) {
                    const double f = w * probs[k] / 16.0;
                    const bool pe = k / 4 != expected / 4;
                    const bool se = k % 4 != expected % 4;
                    out.pol += pe ? f : 0.0;
                    out.spa += se ? f : 0.0;
                    out.any += (pe || se) ? f : 0.0;
                }
            });
        }
    return out;
}

// First-check error probability when photon A passes a Pauli channel with
// total probability p on one DOF (p / 3 per non-identity Pauli) and Alice
// picks her basis uniformly.
inline double pauli_channel_mismatch(const Vec& psi, int dof, double p) {
    const int slot = dof == 0 ? 0 : 2;
    double err = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double w = k == 0 ? 1.0 - p : p / 3.0;
        const Vec v = matvec(embed(pauli_2x2(k), slot), psi);
        for (int basis = 0; basis < 2; ++basis) err += w * 0.5 * mismatch_weight(v, dof, basis);
    }
    return err;
}

}  // namespace oracle

#endif  // HQSDC_TESTS_DENSE_ORACLE_HPP
