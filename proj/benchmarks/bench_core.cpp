/*
 * Copyright 2026 The coinbox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <benchmark/benchmark.h>

#include "coinbox/attacks.hpp"
#include "coinbox/cascade.hpp"
#include "coinbox/wcf.hpp"

using namespace coinbox;

static void BM_run_exact_glued(benchmark::State& state) {
  SystemGraph s = glued_resources(Rational(1, 3), Rational(1, 6), coupling_simulator());
  for (auto _ : state) benchmark::DoNotOptimize(run_exact(s));
}
BENCHMARK(BM_run_exact_glued);

static void BM_best_cheat_capped(benchmark::State& state) {
  WcfProtocol p = cheat_capped(Rational(1, 2), Rational(1, 10));
  for (auto _ : state) benchmark::DoNotOptimize(best_cheat_alice(p).value);
}
BENCHMARK(BM_best_cheat_capped);

static void BM_cascade_dp(benchmark::State& state) {
  DyadicProb z("010101");
  for (auto _ : state)
    benchmark::DoNotOptimize(best_cascade_cheat(z, Rational(1, 20), CascadeParty::alice));
}
BENCHMARK(BM_cascade_dp);

static void BM_poset_union(benchmark::State& state) {
  Poset a = Poset::chain({"t0", "t1", "t2", "t3", "t4"});
  Poset b = Poset::chain({"t2", "u0", "u1", "u2"});
  for (auto _ : state) benchmark::DoNotOptimize(union_posets(a, b));
}
BENCHMARK(BM_poset_union);

static void BM_cut_enumeration(benchmark::State& state) {
  Poset p = union_posets(Poset::chain({"a0", "a1", "a2", "a3"}),
                         Poset::chain({"b0", "b1", "b2", "b3"}));
  for (auto _ : state) benchmark::DoNotOptimize(p.all_cuts());
}
BENCHMARK(BM_cut_enumeration);

static void BM_mitm_attack(benchmark::State& state) {
  MuProtocol mu = build_mu(xor_echo_protocol());
  for (auto _ : state) benchmark::DoNotOptimize(mitm_attack(mu).attacked_pr1);
}
BENCHMARK(BM_mitm_attack);

BENCHMARK_MAIN();
