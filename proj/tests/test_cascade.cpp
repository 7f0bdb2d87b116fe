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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coinbox/cascade.hpp"
#include "coinbox/errors.hpp"

using namespace coinbox;

TEST_CASE("dyadic strings validate") {
  CHECK(DyadicProb("1").value() == Rational(1, 2));
  CHECK(DyadicProb("01").value() == Rational(1, 4));
  CHECK(DyadicProb("011").value() == Rational(3, 8));
  CHECK_THROWS_AS(DyadicProb(""), ParamRangeError);
  CHECK_THROWS_AS(DyadicProb("02"), ParamRangeError);
  CHECK_THROWS_AS(DyadicProb("10"), ParamRangeError);  // trailing zero
  CHECK_THROWS_AS(DyadicProb("11"), ParamRangeError);  // 3/4 > 1/2
}

TEST_CASE("positions split by bit value") {
  DyadicProb z("011");
  CHECK(z.ones_positions() == std::vector<int>{2, 3});
  CHECK(z.zeros_positions() == std::vector<int>{1});
}

TEST_CASE("selection program traces") {
  // First deviation ends the scan; matching all the way outputs the last.
  CHECK(cascade_select({1, 1}, {0, 0}) == 0);  // deviates at round 1
  CHECK(cascade_select({1, 1}, {0, 1}) == 0);  // later rounds ignored after a break
  CHECK(cascade_select({1, 1}, {1, 1}) == 1);  // full match, output c_2
  CHECK(cascade_select({1, 0, 1}, {1, 1, 0}) == 1);  // break at round 2 with a 1

  DyadicProb z11("011");
  CHECK(cascade_select(z11, {1, 0, 0}) == 1);
  CHECK(cascade_select(z11, {0, 0, 1}) == 0);
  CHECK(cascade_select(z11, {0, 1, 1}) == 1);
  CHECK(cascade_select(z11, {0, 1, 0}) == 0);  // last round decides
  CHECK_THROWS_AS(cascade_select(z11, {0, 1}), LengthMismatchError);
}

TEST_CASE("honest cascade hits the dyadic value") {
  CHECK(honest_cascade_distribution(DyadicProb("1"))[0] == Rational(1, 2));
  CHECK(honest_cascade_distribution(DyadicProb("01"))[0] == Rational(1, 4));
  CHECK(honest_cascade_distribution(DyadicProb("011"))[0] == Rational(3, 8));
  for (const DyadicProb& z : all_dyadics_up_to(10))
    CHECK(honest_cascade_distribution(z)[0] == z.value());
}

TEST_CASE("closed forms at zero bias recover the honest values") {
  for (const DyadicProb& z : all_dyadics_up_to(6)) {
    CHECK(alice_bound_formula(z, Rational(0)) == z.value());
    CHECK(bob_bound_formula(z, Rational(0)) == 1 - z.value());
    CHECK(alice_bound_formula(z, Rational(0)) + bob_bound_formula(z, Rational(0)) == 1);
  }
}

TEST_CASE("alice closed form on the worked example") {
  // one ones-position at index 2: (1/2 + 1/100)^2 = 2601/10000
  DyadicProb z("01");
  CHECK(alice_bound_formula(z, Rational(1, 100)) == Rational(2601, 10000));
  CHECK(alice_bound_formula(z, Rational(1, 100)) - z.value() == Rational(101, 10000));
}

TEST_CASE("bob closed form on the worked examples") {
  // zeros position 1 contributes 51/100; the all-match run adds 51/100*49/100.
  DyadicProb z("01");
  Rational hi(51, 100), lo(49, 100);
  CHECK(bob_bound_formula(z, Rational(1, 100)) == hi + hi * lo);
  // single round: only the all-match term remains
  CHECK(bob_bound_formula(DyadicProb("1"), Rational(1, 7)) == Rational(1, 2) + Rational(1, 7));
}

TEST_CASE("dynamic program equals the closed forms on the full grid") {
  for (const DyadicProb& z : all_dyadics_up_to(6))
    for (const Rational& eps : {Rational(0), Rational(1, 100), Rational(1, 20), Rational(1, 10)}) {
      CHECK(best_cascade_cheat(z, eps, CascadeParty::alice) == alice_bound_formula(z, eps));
      CHECK(best_cascade_cheat(z, eps, CascadeParty::bob) == bob_bound_formula(z, eps));
    }
}

TEST_CASE("general strategy trees cannot beat the matched-prefix program") {
  for (const DyadicProb& z : all_dyadics_up_to(4))
    for (const Rational& eps : {Rational(0), Rational(1, 20), Rational(1, 10)}) {
      CHECK(best_cascade_cheat_tree(z, eps, CascadeParty::alice) ==
            best_cascade_cheat(z, eps, CascadeParty::alice));
      CHECK(best_cascade_cheat_tree(z, eps, CascadeParty::bob) ==
            best_cascade_cheat(z, eps, CascadeParty::bob));
    }
}

TEST_CASE("cheat values grow with the bias and never pass one") {
  for (const DyadicProb& z : all_dyadics_up_to(5)) {
    Rational prev(-1);
    for (const Rational& eps : {Rational(0), Rational(1, 100), Rational(1, 20), Rational(1, 10),
                                Rational(1, 4)}) {
      Rational v = best_cascade_cheat(z, eps, CascadeParty::alice);
      CHECK(v >= prev);
      CHECK(v <= 1);
      prev = v;
    }
  }
}

TEST_CASE("bias report on the worked example") {
  CascadeBiasReport r = cascade_bias_report(DyadicProb("01"), Rational(1, 100));
  CHECK(r.eps_prime_alice == Rational(101, 10000));
  CHECK(r.within_margin);
  CHECK(r.eps_prime <= Rational(2, 100) + Rational(10, 10000));
}

TEST_CASE("zero bias means zero excess") {
  for (const DyadicProb& z : all_dyadics_up_to(6)) {
    CascadeBiasReport r = cascade_bias_report(z, Rational(0));
    CHECK(r.eps_prime == 0);
  }
}

TEST_CASE("the margin holds across the sweep grid") {
  for (const DyadicProb& z : all_dyadics_up_to(6))
    for (const Rational& eps : {Rational(1, 100), Rational(1, 20), Rational(1, 10)}) {
      CascadeBiasReport r = cascade_bias_report(z, eps);
      CHECK(r.within_margin);
      CHECK(r.eps_prime <= 2 * eps + 10 * eps * eps);
    }
}

TEST_CASE("dyadic enumeration counts canonical strings") {
  // n=1: "1"; n>=2: first bit 0, last bit 1, middle free.
  CHECK(all_dyadics_up_to(1).size() == 1);
  CHECK(all_dyadics_up_to(2).size() == 2);
  CHECK(all_dyadics_up_to(6).size() == 1 + 1 + 2 + 4 + 8 + 16);
}
