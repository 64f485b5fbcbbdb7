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

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace hqsdc;
using hqsdc::testing::kPhiPhi;
using hqsdc::testing::stat_band;

namespace {

EveStrategy intercept(DofMask mask, BasisPolicy policy = BasisPolicy::UniformZX) {
    EveStrategy s;
    s.kind = EveKind::InterceptResend;
    s.dof_mask = mask;
    s.basis_policy = policy;
    return s;
}

struct Rates {
    double pol = 0.0;
    double spa = 0.0;
    double any = 0.0;
};

// Eve attacks, then Alice and Bob compare outcomes in `alice_basis` (or a
// uniform basis when absent).
Rates check_after_attack(const EveStrategy& eve, std::size_t n, std::uint64_t seed,
                         std::optional<MeasBasis> alice_basis = std::nullopt) {
    RandomStream rng(seed);
    const auto pair = make_hyper_bell(kPhiPhi);
    std::size_t pol = 0;
    std::size_t spa = 0;
    std::size_t any = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const auto attacked = intercept_resend(pair, eve, rng).state;
        const MeasBasis basis = alice_basis ? *alice_basis : random_basis(rng);
        const auto a = measure_photon(attacked, Photon::A, basis, rng);
        const auto b = measure_photon(a.collapsed, Photon::B, basis, rng);
        const bool pe = a.outcome.pol_bit != b.outcome.pol_bit;
        const bool se = a.outcome.spa_bit != b.outcome.spa_bit;
        pol += pe;
        spa += se;
        any += pe || se;
    }
    const auto d = static_cast<double>(n);
    return {pol / d, spa / d, any / d};
}

}  // namespace

TEST(EveStrategy, intercept_resend_requires_a_dof) {
    EXPECT_THROW(intercept({false, false}).validate(), std::invalid_argument);
    EXPECT_NO_THROW(intercept({true, false}).validate());
    EveStrategy trojan;
    trojan.kind = EveKind::TrojanDelay;
    trojan.dof_mask = {false, false};
    EXPECT_NO_THROW(trojan.validate());
}

TEST(EveStrategy, names_round_trip) {
    for (auto k : {EveKind::None, EveKind::InterceptResend, EveKind::TrojanMultiPhoton, EveKind::TrojanInvisible,
                   EveKind::TrojanDelay}) {
        EXPECT_EQ(eve_kind_from_string(to_string(k)), k);
    }
    EXPECT_EQ(basis_policy_from_string("fixed_x"), BasisPolicy::FixedX);
    EXPECT_EQ(attack_legs_from_string("return"), AttackLegs::Return);
    EXPECT_EQ(pns_kind_from_string("beam_splitter_5050"), PnsKind::BeamSplitter5050);
    EXPECT_THROW(eve_kind_from_string("eavesdrop"), std::invalid_argument);
}

TEST(EveStrategy, legs_select_intercepted_transits) {
    auto s = intercept({true, true});
    s.legs = AttackLegs::Forward;
    EXPECT_TRUE(s.intercepts(Leg::Forward));
    EXPECT_FALSE(s.intercepts(Leg::Return));
    s.legs = AttackLegs::Both;
    EXPECT_TRUE(s.intercepts(Leg::Return));
    s.kind = EveKind::TrojanMultiPhoton;
    EXPECT_FALSE(s.intercepts(Leg::Forward));
}

TEST(InterceptResend, rejects_other_strategies) {
    RandomStream rng(1);
    EXPECT_THROW(intercept_resend(make_hyper_bell(kPhiPhi), EveStrategy{}, rng), std::invalid_argument);
}

TEST(InterceptResend, records_only_masked_dofs) {
    RandomStream rng(2);
    const auto r = intercept_resend(make_hyper_bell(kPhiPhi), intercept({true, false}), rng);
    EXPECT_TRUE(r.record.pol.has_value());
    EXPECT_FALSE(r.record.spa.has_value());
    EXPECT_TRUE(r.state.is_normalized());
}

TEST(InterceptResend, oracle_branch_probabilities) {
    // Frozen from the dense enumeration over Eve basis x outcome x Alice basis.
    const auto both = oracle::first_check_under_intercept(oracle::hyper_bell(0, 0), true, true);
    EXPECT_NEAR(both.pol, 0.25, 1e-12);
    EXPECT_NEAR(both.spa, 0.25, 1e-12);
    EXPECT_NEAR(both.any, 7.0 / 16.0, 1e-12);
    const auto pol_only = oracle::first_check_under_intercept(oracle::hyper_bell(0, 0), true, false);
    EXPECT_NEAR(pol_only.pol, 0.25, 1e-12);
    EXPECT_NEAR(pol_only.spa, 0.0, 1e-12);
}

TEST(InterceptResend, polarization_attack_gives_quarter_error_in_polarization_only) {
    constexpr std::size_t n = 100000;
    const auto r = check_after_attack(intercept({true, false}), n, 101);
    EXPECT_NEAR(r.pol, 0.25, stat_band(n));
    EXPECT_EQ(r.spa, 0.0);
}

TEST(InterceptResend, both_dofs_pass_with_probability_nine_sixteenths) {
    constexpr std::size_t n = 100000;
    const auto r = check_after_attack(intercept({true, true}), n, 103);
    EXPECT_NEAR(1.0 - r.any, 9.0 / 16.0, stat_band(n));
    EXPECT_NEAR(r.pol, 0.25, stat_band(n));
    EXPECT_NEAR(r.spa, 0.25, stat_band(n));
}

TEST(InterceptResend, fixed_basis_evades_matching_basis_only) {
    constexpr std::size_t n = 40000;
    const auto eve = intercept({false, true}, BasisPolicy::FixedZ);
    const auto matched = check_after_attack(eve, n, 105, MeasBasis{BasisChoice::Z, BasisChoice::Z});
    EXPECT_EQ(matched.spa, 0.0);
    const auto mismatched = check_after_attack(eve, n, 107, MeasBasis{BasisChoice::Z, BasisChoice::X});
    EXPECT_NEAR(mismatched.spa, 0.5, stat_band(n));
    const auto uniform = check_after_attack(eve, n, 109);
    EXPECT_NEAR(uniform.spa, 0.25, stat_band(n));
    EXPECT_EQ(uniform.pol, 0.0);
}

TEST(InterceptResend, return_leg_reuses_forward_basis) {
    RandomStream rng(4);
    const auto eve = intercept({true, true});
    const auto fwd = intercept_resend(make_hyper_bell(kPhiPhi), eve, rng);
    for (int t = 0; t < 50; ++t) {
        const auto ret = intercept_resend(fwd.state, eve, rng, &fwd.record);
        ASSERT_EQ(ret.record.pol->basis, fwd.record.pol->basis);
        ASSERT_EQ(ret.record.spa->basis, fwd.record.spa->basis);
        // Nothing happened in between, so Eve reads back what she sent.
        ASSERT_EQ(ret.record.pol->bit, fwd.record.pol->bit);
        ASSERT_EQ(ret.record.spa->bit, fwd.record.spa->bit);
    }
}

TEST(GuessOperation, two_leg_attack_reveals_one_bit_per_dof) {
    RandomStream rng(6);
    const auto eve = intercept({true, true});
    constexpr std::size_t n = 40000;
    std::size_t correct = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const auto fwd = intercept_resend(make_hyper_bell(kPhiPhi), eve, rng);
        const auto op = EncodingOp::from_ordinal(rng.below(16));
        const auto ret = intercept_resend(apply_encoding(fwd.state, op), eve, rng, &fwd.record);
        const auto guess = guess_operation(&fwd.record, &ret.record, rng);
        // The bit read in each DOF is always right.
        const int pi = op.pol_index() - 1;
        const int gi = guess.pol_index() - 1;
        if (fwd.record.pol->basis == BasisChoice::Z) {
            ASSERT_EQ(pi >> 1, gi >> 1);
        } else {
            ASSERT_EQ(pi & 1, gi & 1);
        }
        const int sj = op.spa_index() - 1;
        const int gj = guess.spa_index() - 1;
        if (fwd.record.spa->basis == BasisChoice::Z) {
            ASSERT_EQ(sj >> 1, gj >> 1);
        } else {
            ASSERT_EQ(sj & 1, gj & 1);
        }
        correct += guess == op;
    }
    EXPECT_NEAR(static_cast<double>(correct) / n, 0.25, stat_band(n));
}

TEST(GuessOperation, without_records_is_uniform) {
    RandomStream rng(8);
    std::array<std::size_t, 16> counts{};
    constexpr std::size_t n = 32000;
    for (std::size_t t = 0; t < n; ++t) {
        ++counts[guess_operation(nullptr, nullptr, rng).ordinal()];
    }
    for (auto c : counts) {
        EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 16.0, stat_band(n));
    }
}

TEST(CraftTrojan, definitional_metadata) {
    RandomStream rng(9);
    const auto multi = craft_trojan(EveKind::TrojanMultiPhoton, rng);
    EXPECT_EQ(multi.photon_count, 2);
    EXPECT_EQ(multi.wavelength_offset, 0.0);
    EXPECT_FALSE(multi.delayed);

    const DefenseConfig defaults;
    for (int t = 0; t < 1000; ++t) {
        const auto inv = craft_trojan(EveKind::TrojanInvisible, rng);
        ASSERT_GT(std::abs(inv.wavelength_offset), defaults.filter_tolerance);
    }

    const auto delay = craft_trojan(EveKind::TrojanDelay, rng);
    EXPECT_TRUE(delay.delayed);
    EXPECT_EQ(delay.photon_count, 2);
    EXPECT_FALSE(delay.legitimate());

    EXPECT_THROW(craft_trojan(EveKind::InterceptResend, rng), std::invalid_argument);
    EXPECT_TRUE(SignalMeta{}.legitimate());
}

TEST(Defenses, legitimate_signal_is_always_clean) {
    RandomStream rng(10);
    for (auto kind : {PnsKind::Ideal, PnsKind::BeamSplitter5050}) {
        const DefenseConfig cfg{true, 1.0, true, kind};
        for (int t = 0; t < 1000; ++t) {
            ASSERT_EQ(apply_defenses(SignalMeta{}, cfg, rng), DefenseOutcome::Clean);
        }
    }
}

TEST(Defenses, ideal_pns_always_alarms_on_two_photons) {
    RandomStream rng(12);
    const DefenseConfig cfg{false, 1.0, true, PnsKind::Ideal};
    for (int t = 0; t < 1000; ++t) {
        ASSERT_EQ(apply_defenses(SignalMeta{2, 0.0, false}, cfg, rng), DefenseOutcome::PnsAlarm);
    }
}

TEST(Defenses, beam_splitter_alarm_rate) {
    RandomStream rng(14);
    const DefenseConfig cfg{false, 1.0, true, PnsKind::BeamSplitter5050};
    constexpr std::size_t n = 100000;
    for (int photons : {2, 3}) {
        std::size_t alarms = 0;
        for (std::size_t t = 0; t < n; ++t) {
            alarms += apply_defenses(SignalMeta{photons, 0.0, false}, cfg, rng) == DefenseOutcome::PnsAlarm;
        }
        const double expected = 1.0 - std::pow(2.0, 1 - photons);
        EXPECT_NEAR(static_cast<double>(alarms) / n, expected, stat_band(n)) << photons;
    }
}

TEST(Defenses, filter_removes_off_wavelength_probes) {
    RandomStream rng(16);
    const DefenseConfig on{true, 1.0, true, PnsKind::Ideal};
    const DefenseConfig off{false, 1.0, true, PnsKind::Ideal};
    for (int t = 0; t < 1000; ++t) {
        const auto meta = craft_trojan(EveKind::TrojanInvisible, rng);
        ASSERT_EQ(apply_defenses(meta, on, rng), DefenseOutcome::FilteredOut);
        ASSERT_EQ(apply_defenses(meta, off, rng), DefenseOutcome::PnsAlarm);
    }
    // A probe inside the tolerance passes the filter and is left to the PNS.
    EXPECT_EQ(apply_defenses(SignalMeta{2, 0.5, false}, on, rng), DefenseOutcome::PnsAlarm);
}

TEST(Defenses, enabling_the_filter_never_reduces_removed_or_alarmed) {
    // Paired runs: identical random streams with and without the filter.
    for (auto pns : {PnsKind::Ideal, PnsKind::BeamSplitter5050}) {
        for (bool pns_on : {false, true}) {
            RandomStream make(18);
            RandomStream rng_on(20);
            RandomStream rng_off(20);
            const DefenseConfig on{true, 1.0, pns_on, pns};
            const DefenseConfig off{false, 1.0, pns_on, pns};
            std::size_t caught_on = 0;
            std::size_t caught_off = 0;
            for (int t = 0; t < 3000; ++t) {
                constexpr EveKind kinds[] = {EveKind::TrojanMultiPhoton, EveKind::TrojanInvisible,
                                             EveKind::TrojanDelay};
                const auto meta = craft_trojan(kinds[make.below(3)], make);
                caught_on += apply_defenses(meta, on, rng_on) != DefenseOutcome::Clean;
                caught_off += apply_defenses(meta, off, rng_off) != DefenseOutcome::Clean;
            }
            EXPECT_GE(caught_on, caught_off);
        }
    }
}

TEST(Defenses, tolerance_must_be_positive) {
    DefenseConfig cfg;
    cfg.filter_tolerance = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
