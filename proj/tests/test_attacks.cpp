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

#include "coinbox/attacks.hpp"

using namespace coinbox;

namespace {

/// Independent oracle for the glued joint distribution: direct probability
/// algebra over the four shown-coin cases, no engine involved.
struct OracleMasses {
  Rational m00{0}, m11{0}, disc{0};
};

OracleMasses glued_oracle(const Rational& z, const Rational& eps, const SimTable& t) {
  const Rational qa = eps / (1 - z);
  const Rational qb = z == 0 ? Rational(0) : eps / z;
  OracleMasses out;
  for (int cp = 0; cp < 2; ++cp)
    for (int cq = 0; cq < 2; ++cq) {
      Rational w = (cp == 0 ? z : 1 - z) * (cq == 0 ? z : 1 - z);
      auto [bit_a, flag_a, bit_b, flag_b] = t[std::size_t(cp)][std::size_t(cq)];
      Rational pb0;  // Pr[c_B = 0] from the alice-side resource
      if (flag_a == 1)
        pb0 = 0;
      else if (bit_a == cp)
        pb0 = cp == 0 ? 1 : 0;
      else
        pb0 = bit_a == 0 ? (cp == 0 ? Rational(1) : qa) : (cp == 0 ? Rational(1 - qa) : Rational(0));
      Rational pa0;  // Pr[c_A = 0] from the bob-side resource
      if (flag_b == 1)
        pa0 = 1;
      else if (bit_b == cq)
        pa0 = cq == 0 ? 1 : 0;
      else
        pa0 = bit_b == 0 ? (cq == 0 ? Rational(1) : qb) : (cq == 0 ? Rational(1 - qb) : Rational(0));
      out.m00 += w * pa0 * pb0;
      out.m11 += w * (1 - pa0) * (1 - pb0);
      out.disc += w * (pa0 * (1 - pb0) + (1 - pa0) * pb0);
    }
  return out;
}

}  // namespace

TEST_CASE("coupling simulator reply table") {
  SimTable t = coupling_sim_table();
  CHECK(t[0][0] == SimReply{0, 0, 0, 0});
  CHECK(t[1][1] == SimReply{1, 0, 1, 0});
  CHECK(t[0][1][1] == 1);  // forfeit flag on the alice side
  CHECK(t[0][1][3] == 0);
  CHECK(t[1][0] == SimReply{0, 0, 0, 0});
}

TEST_CASE("glued joint masses match the closed form") {
  struct Cell {
    Rational z, eps;
  };
  for (const Cell& c : {Cell{Rational(1, 2), Rational(0)}, Cell{Rational(1, 2), Rational(1, 10)},
                        Cell{Rational(1, 4), Rational(1, 8)}, Cell{Rational(1, 3), Rational(1, 6)}}) {
    AdvantageReport r = resource_gluing_report(c.z, c.eps);
    CHECK(r.mass00 == c.z * (c.z + c.eps));
    CHECK(r.mass11 == 1 - c.z);
    CHECK(r.discordant == c.z * (1 - c.z - c.eps));
    CHECK(r.mass00 + r.mass11 + r.discordant == 1);
    CHECK(r.d_lower == c.z * (1 - c.z - c.eps));
    CHECK(r.delta_lower == c.z * (1 - c.z - c.eps) / 3);
    CHECK(r.agreement_gap == r.d_lower);

    // Engine output cross-checked against the direct-algebra oracle.
    OracleMasses oracle = glued_oracle(c.z, c.eps, coupling_sim_table());
    CHECK(r.mass00 == oracle.m00);
    CHECK(r.mass11 == oracle.m11);
    CHECK(r.discordant == oracle.disc);
  }
}

TEST_CASE("fair unbiased case gives one twelfth") {
  AdvantageReport r = resource_gluing_report(Rational(1, 2), Rational(0));
  CHECK(r.mass00 == Rational(1, 4));
  CHECK(r.mass11 == Rational(1, 2));
  CHECK(r.discordant == Rational(1, 4));
  CHECK(r.delta_lower == Rational(1, 12));
}

TEST_CASE("fully biasable case has no discordance") {
  AdvantageReport r = resource_gluing_report(Rational(1, 2), Rational(1, 2));
  CHECK(r.discordant == 0);
  CHECK(r.delta_lower == 0);
}

TEST_CASE("quarter-eighth case from direct substitution") {
  AdvantageReport r = resource_gluing_report(Rational(1, 4), Rational(1, 8));
  CHECK(r.mass00 == Rational(3, 32));
  CHECK(r.mass11 == Rational(3, 4));
  CHECK(r.discordant == Rational(5, 32));
}

TEST_CASE("simulator search attains the closed-form maximum") {
  {
    SimulatorSearch s = best_simulator_agreement(Rational(1, 2), Rational(0));
    CHECK(s.best_agreement == Rational(3, 4));
    CHECK(s.tables_scanned == 256);
  }
  {
    SimulatorSearch s = best_simulator_agreement(Rational(1, 3), Rational(0));
    CHECK(s.best_agreement == Rational(7, 9));
  }
  {
    SimulatorSearch s = best_simulator_agreement(Rational(1, 2), Rational(1, 2));
    CHECK(s.best_agreement == 1);
  }
  {
    SimulatorSearch s = best_simulator_agreement(Rational(1, 2), Rational(1, 10));
    CHECK(s.best_agreement == 1 - Rational(1, 2) * (1 - Rational(1, 2) - Rational(1, 10)));
  }
}

TEST_CASE("search maximum is never below the explicit simulator") {
  for (auto [z, eps] : std::vector<std::pair<Rational, Rational>>{
           {Rational(1, 2), Rational(0)}, {Rational(1, 4), Rational(1, 8)},
           {Rational(1, 3), Rational(1, 6)}}) {
    SimulatorSearch s = best_simulator_agreement(z, eps);
    OracleMasses oracle = glued_oracle(z, eps, coupling_sim_table());
    CHECK(s.best_agreement >= oracle.m00 + oracle.m11);
  }
}

TEST_CASE("mu doubles the honest win probability structure") {
  MuProtocol mu = build_mu(xor_echo_protocol());
  Distribution d = run_exact(mu.system);
  CHECK(d.pr(mu.coin_a, 0) == Rational(3, 4));
  CHECK(d.pr(mu.coin_a, 1) == Rational(1, 4));
  CHECK(mu.honest_win == Rational(3, 4));

  // Instance coins are independent under honest play.
  RunOptions opts;
  opts.taps = {mu.coin1_alice, mu.coin2_alice};
  Distribution joint = run_exact(mu.system, opts).marginal({mu.coin1_alice, mu.coin2_alice});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(joint.probs.at({a, b}) == Rational(1, 4));
}

TEST_CASE("mu rejects resource-backed instances") {
  CHECK_THROWS_AS(build_mu(cheat_capped(Rational(1, 2), Rational(1, 10))), NotCombModelError);
}

TEST_CASE("delayed relays make alice play herself") {
  MuProtocol mu = build_mu(xor_echo_protocol());
  MitmResult r = mitm_attack(mu);
  CHECK(r.equal);
  CHECK(r.attacked_pr1 == Rational(1, 2));
  CHECK(r.honest_mu_pr1 == Rational(1, 4));
}

TEST_CASE("the two coins coincide under the delayed relays") {
  MuProtocol mu = build_mu(xor_echo_protocol());
  MitmResult r = mitm_attack(mu);
  auto bias = conditional_bias(r.attacked, mu.coin1_alice, mu.coin2_alice);
  REQUIRE(bias);
  CHECK(*bias == 1);

  auto honest = conditional_bias(mu.system, mu.coin1_alice, mu.coin2_alice);
  REQUIRE(honest);
  CHECK(*honest == Rational(1, 2));  // independence
}

TEST_CASE("a deterministic instance relays its own coin") {
  WcfProtocol det = xor_echo_protocol(SymbolDist::point(1), SymbolDist::point(0));
  MuProtocol mu = build_mu(det);
  MitmResult r = mitm_attack(mu);
  CHECK(r.equal);
  CHECK(r.attacked_coin.pr(mu.coin_a, 1) == 1);
}

TEST_CASE("quantum instance gives the same relay identity, exactly") {
  MuProtocol mu = build_mu(entangled_pair_protocol());
  MitmResult r = mitm_attack(mu);
  CHECK(r.equal);
  CHECK(r.attacked_pr1 == Rational(1, 2));
  CHECK(r.honest_mu_pr1 == Rational(1, 4));
  auto bias = conditional_bias(r.attacked, mu.coin1_alice, mu.coin2_alice);
  REQUIRE(bias);
  CHECK(*bias == 1);
}
