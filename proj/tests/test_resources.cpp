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

#include "coinbox/resources.hpp"

using namespace coinbox;

TEST_CASE("honest resource is a shared biased coin") {
  Distribution d = run_exact({{wcf_resource_honest(Rational(1, 3))}, {}});
  CHECK(d.probs.at({0, 0}) == Rational(1, 3));
  CHECK(d.probs.at({1, 1}) == Rational(2, 3));
  CHECK(d.probs.size() == 2);

  Distribution degenerate = run_exact({{wcf_resource_honest(Rational(0))}, {}});
  CHECK(degenerate.probs.at({1, 1}) == 1);

  CHECK_THROWS_AS(wcf_resource_honest(Rational(2, 3)), ParamRangeError);
}

namespace {

/// Feeds a fixed reply into the alice-side resource and returns the coin law.
Distribution alice_side_with_reply(const Rational& z, const Rational& eps, int bit, int flag) {
  SystemGraph s{{wcf_resource_dishonest_alice(z, eps)}, {}};
  RunOptions opts;
  opts.external_inputs["sa_bit@tp1"] = bit;
  opts.external_inputs["sa_flag@tp1"] = flag;
  return run_exact(s, opts);
}

}  // namespace

TEST_CASE("raised flag forces the coin against alice") {
  Distribution d = alice_side_with_reply(Rational(1, 2), Rational(1, 10), 0, 1);
  CHECK(d.pr({"sa_coin_b", "tb"}, 1) == 1);
}

TEST_CASE("zero bias leaves no flip channel") {
  Distribution d = alice_side_with_reply(Rational(1, 3), Rational(0), 0, 0);
  // coin equals the shown value always: joint mass concentrates on agreement
  CHECK(d.probs.at({0, 0}) == Rational(1, 3));
  CHECK(d.probs.at({1, 1}) == Rational(2, 3));
}

TEST_CASE("flip probability is eps over one minus z") {
  // Shown 1, requested 0: the coin becomes 0 with probability 1/5.
  Distribution d = alice_side_with_reply(Rational(1, 2), Rational(1, 10), 0, 0);
  auto cond = d.conditional({"sa_show", "tp0"}, 1);
  REQUIRE(cond);
  CHECK(cond->pr({"sa_coin_b", "tb"}, 0) == Rational(1, 5));
}

TEST_CASE("bob-side resource mirrors with flip eps over z") {
  SystemGraph s{{wcf_resource_dishonest_bob(Rational(1, 2), Rational(1, 10))}, {}};
  RunOptions opts;
  opts.external_inputs["sb_bit@tq1"] = 0;
  opts.external_inputs["sb_flag@tq1"] = 0;
  Distribution d = run_exact(s, opts);
  auto cond = d.conditional({"sb_show", "tq0"}, 0);
  REQUIRE(cond);
  CHECK(cond->pr({"sb_coin_a", "ta"}, 0) == 1);  // request matches the shown coin

  RunOptions flag;
  flag.external_inputs["sb_bit@tq1"] = 0;
  flag.external_inputs["sb_flag@tq1"] = 1;
  CHECK(run_exact(s, flag).pr({"sb_coin_a", "ta"}, 0) == 1);  // forfeits to 0
}

TEST_CASE("honest-style reply reproduces the ideal marginal") {
  // Echoing the shown coin with a lowered flag keeps the coin law (z, 1-z).
  for (auto [z, eps] : std::vector<std::pair<Rational, Rational>>{
           {Rational(1, 2), Rational(1, 10)}, {Rational(1, 4), Rational(1, 8)},
           {Rational(1, 3), Rational(0)}}) {
    FullyExpressingReport r = fully_expressing_audit(
        wcf_resource_honest(z), wcf_resource_dishonest_alice(z, eps),
        wcf_resource_dishonest_bob(z, eps), WcfParams(z, eps));
    CHECK(r.honest_ok);
  }
}

TEST_CASE("fully expressing audit finds the exact caps") {
  WcfParams params(Rational(1, 2), Rational(1, 10));
  FullyExpressingReport r = fully_expressing_audit(
      wcf_resource_honest(params.z), wcf_resource_dishonest_alice(params.z, params.eps),
      wcf_resource_dishonest_bob(params.z, params.eps), params);
  CHECK(r.ok());
  CHECK(r.max_alice_cheat == Rational(3, 5));
  CHECK(r.max_bob_cheat == Rational(3, 5));
}

TEST_CASE("audit caps are tight across the grid") {
  for (auto [z, eps] : std::vector<std::pair<Rational, Rational>>{
           {Rational(1, 2), Rational(1, 10)}, {Rational(1, 4), Rational(1, 8)},
           {Rational(1, 3), Rational(1, 6)}, {Rational(1, 2), Rational(0)}}) {
    FullyExpressingReport r = fully_expressing_audit(
        wcf_resource_honest(z), wcf_resource_dishonest_alice(z, eps),
        wcf_resource_dishonest_bob(z, eps), WcfParams(z, eps));
    CHECK(r.max_alice_cheat == z + eps);
    CHECK(r.max_bob_cheat == 1 - z + eps);
  }
}

TEST_CASE("a doubled flip probability fails the audit") {
  WcfParams params(Rational(1, 2), Rational(1, 10));
  CausalBox leaky =
      wcf_resource_dishonest_alice_flip(params.z, 2 * params.eps / (1 - params.z));
  FullyExpressingReport r =
      fully_expressing_audit(wcf_resource_honest(params.z), leaky,
                             wcf_resource_dishonest_bob(params.z, params.eps), params);
  CHECK(!r.alice_capped);
  CHECK(r.max_alice_cheat == params.z + 2 * params.eps);
  CHECK(r.bob_capped);
}

TEST_CASE("saturated parameters cap at one") {
  WcfParams params(Rational(1, 2), Rational(1, 2));
  FullyExpressingReport r = fully_expressing_audit(
      wcf_resource_honest(params.z), wcf_resource_dishonest_alice(params.z, params.eps),
      wcf_resource_dishonest_bob(params.z, params.eps), params);
  CHECK(r.max_alice_cheat == 1);
  CHECK(r.ok());
}

TEST_CASE("resource pair with glue is a two-round protocol with tight caps") {
  const Rational z(1, 2), eps(1, 10);
  WcfParams params(z, eps);
  std::vector<Link> links = {{"sb_show", "g_show_b"}, {"g_bit_b", "sb_bit"},
                             {"g_flag_b", "sb_flag"}, {"sa_show", "g_show_a"},
                             {"g_bit_a", "sa_bit"},   {"g_flag_a", "sa_flag"}};
  WcfProtocol p = resource_to_protocol(wcf_resource_dishonest_bob(z, eps),
                                       {passthrough_glue(z, eps)},
                                       wcf_resource_dishonest_alice(z, eps), params, links);
  CHECK(interaction_rounds(p) == 2);
  SecurityReport r = verify_standalone(p);
  CHECK(r.s2_ok);
  CHECK(r.s3_ok);
  CHECK(r.p_star_alice == z + eps);
  CHECK(r.p_star_bob == 1 - z + eps);
  CHECK(!r.s1_ok);  // the glued pair cannot agree perfectly; that is the point
}

TEST_CASE("directly compatible mini resources couple without glue") {
  // Reduced one-wire resources: each side shows a coin and accepts one bit.
  Poset pa = Poset::chain({"tq0", "tq1", "ta"});
  CausalBox mini_b;
  mini_b.name = "mini_b";
  mini_b.poset = pa;
  mini_b.chi = strict_past_causality(pa);
  mini_b.wires = {{"sb_coin_a", WireDir::out, 2, false, {"ta"}},
                  {"mb_out", WireDir::out, 2, false, {"tq0"}},
                  {"mb_in", WireDir::in, 2, false, {"tq1"}}};
  {
    OutputRule show, coin;
    show.out = {"mb_out", "tq0"};
    show.rows[{}] = SymbolDist::bernoulli_zero(Rational(1, 2));
    coin.out = {"sb_coin_a", "ta"};
    coin.deps = {{"mb_in", "tq1"}};
    coin.rows[{0}] = SymbolDist::point(0);
    coin.rows[{1}] = SymbolDist::point(1);
    mini_b.kernel.rules = {show, coin};
    mini_b.validate();
  }
  Poset pb = Poset::build({"tq0", "tq1", "tb"}, {{"tq0", "tq1"}, {"tq1", "tb"}});
  CausalBox mini_a;
  mini_a.name = "mini_a";
  mini_a.poset = pb;
  mini_a.chi = strict_past_causality(pb);
  mini_a.wires = {{"sa_coin_b", WireDir::out, 2, false, {"tb"}},
                  {"ma_in", WireDir::in, 2, false, {"tq0"}},
                  {"ma_out", WireDir::out, 2, false, {"tq1"}}};
  {
    OutputRule reply, coin;
    reply.out = {"ma_out", "tq1"};
    reply.deps = {{"ma_in", "tq0"}};
    reply.rows[{0}] = SymbolDist::point(0);
    reply.rows[{1}] = SymbolDist::point(1);
    coin.out = {"sa_coin_b", "tb"};
    coin.deps = {{"ma_in", "tq0"}};
    coin.rows[{0}] = SymbolDist::point(0);
    coin.rows[{1}] = SymbolDist::point(1);
    mini_a.kernel.rules = {reply, coin};
    mini_a.validate();
  }
  WcfProtocol p = resource_to_protocol(mini_b, {}, mini_a, WcfParams(Rational(1, 2), Rational(0)),
                                       {{"mb_out", "ma_in"}, {"ma_out", "mb_in"}});
  Distribution d = honest_distribution(p);
  CHECK(d.probs.at({0, 0}) == Rational(1, 2));
  CHECK(d.probs.at({1, 1}) == Rational(1, 2));
}
