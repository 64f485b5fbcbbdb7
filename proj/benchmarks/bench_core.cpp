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

#include <benchmark/benchmark.h>

#include "hqsdc/adversary.hpp"
#include "hqsdc/channel.hpp"
#include "hqsdc/harness.hpp"
#include "hqsdc/hyperstate.hpp"
#include "hqsdc/protocol.hpp"

using namespace hqsdc;

static void BM_apply_encoding(benchmark::State& state) {
    auto s = make_hyper_bell({});
    std::size_t k = 0;
    for (auto _ : state) {
        s = apply_encoding(s, EncodingOp::from_ordinal(k++ & 15));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_apply_encoding);

static void BM_chbsa(benchmark::State& state) {
    const auto s = apply_encoding(make_hyper_bell({}), EncodingOp(3, 2));
    RandomStream rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chbsa(s, rng));
    }
}
BENCHMARK(BM_chbsa);

static void BM_measure_photon(benchmark::State& state) {
    const auto s = make_hyper_bell({});
    RandomStream rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(measure_photon(s, Photon::A, random_basis(rng), rng));
    }
}
BENCHMARK(BM_measure_photon);

static void BM_intercept_resend(benchmark::State& state) {
    const auto s = make_hyper_bell({});
    EveStrategy eve;
    eve.kind = EveKind::InterceptResend;
    RandomStream rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(intercept_resend(s, eve, rng));
    }
}
BENCHMARK(BM_intercept_resend);

static void BM_transmit_noisy(benchmark::State& state) {
    const auto s = make_hyper_bell({});
    const ChannelParams channel{0.1, 0.05, 0.05};
    RandomStream rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(transmit(s, SignalMeta{}, channel, EveStrategy{}, Leg::Forward, rng));
    }
}
BENCHMARK(BM_transmit_noisy);

static void BM_run_session(benchmark::State& state) {
    SessionSetup setup;
    setup.protocol.n_pairs = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        setup.protocol.seed = seed++;
        benchmark::DoNotOptimize(run_session(setup));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_run_session)->Arg(200)->Arg(2000);

static void BM_run_sessions(benchmark::State& state) {
    HarnessConfig cfg;
    cfg.sessions = 100;
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sessions(cfg));
    }
}
BENCHMARK(BM_run_sessions);

BENCHMARK_MAIN();
