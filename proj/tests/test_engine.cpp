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

#include "coinbox/engine.hpp"
#include "coinbox/resources.hpp"
#include "coinbox/wcf.hpp"

using namespace coinbox;

namespace {

CausalBox coin_box(const std::string& name, const std::string& wire, const std::string& pos,
                   const Rational& p0) {
  Poset p = Poset::build({pos}, {});
  OutputRule r;
  r.out = {wire, pos};
  r.rows[{}] = SymbolDist::bernoulli_zero(p0);
  CausalBox b;
  b.name = name;
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{wire, WireDir::out, 2, false, {pos}}};
  b.kernel.rules = {std::move(r)};
  b.validate();
  return b;
}

CausalBox passthrough_box(const std::string& name, const std::string& in_wire,
                          const std::string& in_pos, const std::string& out_wire,
                          const std::string& out_pos) {
  Poset p = Poset::chain({in_pos, out_pos});
  OutputRule r;
  r.out = {out_wire, out_pos};
  r.deps = {{in_wire, in_pos}};
  r.rows[{0}] = SymbolDist::point(0);
  r.rows[{1}] = SymbolDist::point(1);
  CausalBox b;
  b.name = name;
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{in_wire, WireDir::in, 2, false, {in_pos}},
             {out_wire, WireDir::out, 2, false, {out_pos}}};
  b.kernel.rules = {std::move(r)};
  b.validate();
  return b;
}

}  // namespace

TEST_CASE("single biased coin reads back") {
  SystemGraph s{{coin_box("c", "w", "t0", Rational(1, 3))}, {}};
  Distribution d = run_exact(s);
  CHECK(d.pr({"w", "t0"}, 0) == Rational(1, 3));
  CHECK(d.pr({"w", "t0"}, 1) == Rational(2, 3));
  CHECK(d.total() == 1);
}

TEST_CASE("chain of passthroughs composes to the identity") {
  SystemGraph s{{coin_box("c", "w0", "t0", Rational(1, 4)),
                 passthrough_box("p1", "w0_in", "t0", "w1", "t1"),
                 passthrough_box("p2", "w1_in", "t1", "w2", "t2"),
                 passthrough_box("p3", "w2_in", "t2", "w3", "t3")},
                {}};
  s = connect(std::move(s), "w0", "w0_in");
  s = connect(std::move(s), "w1", "w1_in");
  s = connect(std::move(s), "w2", "w2_in");
  Distribution d = run_exact(s);
  CHECK(d.pr({"w3", "t3"}, 0) == Rational(1, 4));
}

TEST_CASE("parallel composition multiplies independent kernels") {
  CausalBox both = parallel(coin_box("c1", "w1", "t0", Rational(1, 2)),
                            coin_box("c2", "w2", "u0", Rational(1, 3)));
  Distribution d = run_exact({{both}, {}});
  CHECK(d.probs.at({0, 0}) == Rational(1, 6));
  CHECK(d.probs.at({1, 1}) == Rational(1, 3));
}

TEST_CASE("parallel with a wireless box changes nothing") {
  CausalBox c = coin_box("c", "w", "t0", Rational(1, 2));
  CausalBox idle = bridge_box("idle", Poset::build({"z9"}, {}));
  Distribution alone = run_exact({{c}, {}});
  Distribution with_idle = run_exact({{parallel(c, idle)}, {}});
  CHECK(alone.probs == with_idle.probs);
}

TEST_CASE("parallel is associative up to grouping") {
  CausalBox a = coin_box("a", "wa", "t0", Rational(1, 2));
  CausalBox b = coin_box("b", "wb", "u0", Rational(1, 3));
  CausalBox c = coin_box("c", "wc", "v0", Rational(1, 5));
  Distribution left = run_exact({{parallel(parallel(a, b), c)}, {}});
  Distribution right = run_exact({{parallel(a, parallel(b, c))}, {}});
  CHECK(left.probs == right.probs);
  CHECK(left.slots == right.slots);
}

TEST_CASE("parallel rejects clashing wire ids") {
  CHECK_THROWS(parallel(coin_box("a", "w", "t0", Rational(1, 2)),
                        coin_box("b", "w", "u0", Rational(1, 2))));
}

TEST_CASE("composed delays equal the composed delay function") {
  Poset p = Poset::chain({"t0", "t1", "t2"});
  CausalBox src = coin_box("c", "w", "t0", Rational(1, 3));
  {
    // direct: relabel source position via one delay t0 -> t2
    CausalBox d = delay_box("d", DelayFn(p, {{"t0", "t2"}}), 2, "d_in", "d_out");
    SystemGraph s{{src, d}, {}};
    s = connect(std::move(s), "w", "d_in");
    Distribution direct = run_exact(s);

    CausalBox d1 = delay_box("d1", DelayFn(p, {{"t0", "t1"}}), 2, "d1_in", "d1_out");
    CausalBox d2 = delay_box("d2", DelayFn(p, {{"t1", "t2"}}), 2, "d2_in", "d2_out");
    SystemGraph s2{{src, d1, d2}, {}};
    s2 = connect(std::move(s2), "w", "d1_in");
    s2 = connect(std::move(s2), "d1_out", "d2_in");
    Distribution chained = run_exact(s2);

    CHECK(direct.pr({"d_out", "t2"}, 0) == chained.pr({"d2_out", "t2"}, 0));
  }
}

TEST_CASE("connect validates dimensions and single use") {
  SystemGraph s{{coin_box("c", "w", "t0", Rational(1, 2)),
                 passthrough_box("p", "x", "t0", "y", "t1")},
                {}};
  CausalBox wide = coin_box("wide", "w4", "t0", Rational(1, 2));
  wide.wires[0].alphabet = 4;
  wide.kernel.rules[0].rows[{}] = SymbolDist::point(3);
  SystemGraph s4{{wide, passthrough_box("p", "x", "t0", "y", "t1")}, {}};
  CHECK_THROWS_AS(connect(std::move(s4), "w4", "x"), DimensionMismatchError);

  s = connect(std::move(s), "w", "x");
  CHECK_THROWS_AS(connect(std::move(s), "w", "x"), AlreadyLinkedError);
}

TEST_CASE("delay loops are caught") {
  // Each relay advances within its own order, but the two orders contradict
  // each other, so no schedule exists for the pair.
  Poset p1 = Poset::chain({"t0", "t1"});
  Poset p2 = Poset::chain({"t1", "t0"});  // reversed order on the same labels
  CausalBox d1 = delay_box("d1", DelayFn(p1, {{"t0", "t1"}}), 2, "d1_in", "d1_out");
  CausalBox d2 = delay_box("d2", DelayFn(p2, {{"t1", "t0"}}), 2, "d2_in", "d2_out");
  SystemGraph s{{d1, d2}, {}};
  CHECK_THROWS_AS(connect(std::move(s), "d1_out", "d2_in"), CausalLoopError);
}

TEST_CASE("same-position feedthrough is rejected at construction") {
  Poset p = Poset::build({"t0"}, {});
  CausalBox b;
  b.name = "echo";
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{"in", WireDir::in, 2, false, {"t0"}}, {"out", WireDir::out, 2, false, {"t0"}}};
  OutputRule r;
  r.out = {"out", "t0"};
  r.deps = {{"in", "t0"}};
  r.rows[{0}] = SymbolDist::point(0);
  r.rows[{1}] = SymbolDist::point(1);
  b.kernel.rules = {std::move(r)};
  CHECK_THROWS_AS(b.validate(), CausalLoopError);
}

TEST_CASE("branch cap raises an explosion error") {
  SystemGraph s{{coin_box("c1", "w1", "t0", Rational(1, 2)),
                 coin_box("c2", "w2", "u0", Rational(1, 2)),
                 coin_box("c3", "w3", "v0", Rational(1, 2))},
                {}};
  RunOptions opts;
  opts.branch_cap = 3;
  CHECK_THROWS_AS(run_exact(s, opts), ExplosionError);
}

TEST_CASE("total variation distance") {
  Distribution d1, d2;
  d1.slots = d2.slots = {{"w", "t"}};
  d1.probs[{0}] = Rational(1, 2);
  d1.probs[{1}] = Rational(1, 2);
  d2.probs = d1.probs;
  CHECK(tv_distance(d1, d2) == 0);

  Distribution mass0, mass1;
  mass0.slots = mass1.slots = {{"w", "t"}};
  mass0.probs[{0}] = 1;
  mass1.probs[{1}] = 1;
  CHECK(tv_distance(mass0, mass1) == 1);

  Distribution other;
  other.slots = {{"v", "t"}};
  other.probs[{0}] = 1;
  CHECK_THROWS_AS(tv_distance(d1, other), DomainMismatchError);
}

TEST_CASE("sampling is deterministic per seed") {
  WcfProtocol p = trivial_announce(Rational(1, 2));
  auto s1 = sample(p.system, 42);
  auto s2 = sample(p.system, 42);
  CHECK(s1 == s2);
}

TEST_CASE("deterministic kernel samples its unique support point") {
  SystemGraph s{{coin_box("c", "w", "t0", Rational(1))}, {}};
  auto drawn = sample(s, 7);
  CHECK(drawn.at("w@t0") == 0);
  Distribution d = run_exact(s);
  CHECK(d.probs.size() == 1);
}

TEST_CASE("sampled frequencies stay within five sigma of one half") {
  SystemGraph s{{coin_box("c", "w", "t0", Rational(1, 2))}, {}};
  const std::uint64_t n = 100000;
  auto counts = sample_many(s, 9, n);
  double zeros = double(counts[{0}]);
  double sigma = std::sqrt(double(n)) / 2;
  CHECK(std::abs(zeros - double(n) / 2) < 5 * sigma);
}

TEST_CASE("chi-square agreement between sampler and exact runs") {
  // 0.999 quantiles of chi-square by degrees of freedom.
  const double q999[] = {0, 10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.125};
  auto chi2_ok = [&](const SystemGraph& sys) {
    Distribution exact = run_exact(sys);
    const std::uint64_t n = 100000;
    auto counts = sample_many(sys, 31337, n);
    double stat = 0;
    for (const auto& [row, pr] : exact.probs) {
      double expect = to_double(pr) * double(n);
      auto it = counts.find(row);
      double got = it == counts.end() ? 0.0 : double(it->second);
      stat += (got - expect) * (got - expect) / expect;
    }
    std::size_t df = exact.probs.size() - 1;
    REQUIRE(df >= 1);
    REQUIRE(df < 9);
    return stat < q999[df];
  };
  CHECK(chi2_ok(trivial_announce(Rational(1, 3)).system));
  CHECK(chi2_ok(cheat_capped(Rational(1, 2), Rational(1, 10)).system));
}

TEST_CASE("distributions are schedule independent") {
  WcfProtocol p = cheat_capped(Rational(1, 3), Rational(1, 6));
  Distribution base = run_exact(p.system);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    RunOptions opts;
    opts.schedule_seed = seed;
    Distribution shuffled = run_exact(p.system, opts);
    CHECK(base.probs == shuffled.probs);
  }
}

TEST_CASE("causality audit accepts the resource boxes") {
  CHECK(causal_audit(wcf_resource_dishonest_alice(Rational(1, 3), Rational(1, 6))));
  CHECK(causal_audit(wcf_resource_dishonest_bob(Rational(1, 2), Rational(1, 10))));
  CHECK(causal_audit(wcf_resource_honest(Rational(1, 4))));
}

TEST_CASE("causality audit rejects a box that peeks ahead") {
  // Output at t0 claiming to depend on an input at t1 cannot be expressed
  // with a valid chi, and a doctored chi is caught by the audit.
  Poset p = Poset::chain({"t0", "t1"});
  CausalBox b;
  b.name = "peek";
  b.poset = p;
  b.chi = identity_causality(p);  // invalid as a causality function
  b.wires = {{"in", WireDir::in, 2, false, {"t1"}}, {"out", WireDir::out, 2, false, {"t0"}}};
  OutputRule r;
  r.out = {"out", "t0"};
  r.deps = {{"in", "t1"}};
  r.rows[{0}] = SymbolDist::point(0);
  r.rows[{1}] = SymbolDist::point(1);
  b.kernel.rules = {std::move(r)};
  CHECK(!causal_audit(b));
}

TEST_CASE("external inputs feed open in-wires") {
  CausalBox relay = passthrough_box("p", "x", "t0", "y", "t1");
  SystemGraph s{{relay}, {}};
  RunOptions opts;
  opts.external_inputs["x@t0"] = 1;
  Distribution d = run_exact(s, opts);
  CHECK(d.pr({"y", "t1"}, 1) == 1);

  RunOptions missing;
  CHECK_THROWS_AS(run_exact(s, missing), UnschedulableError);
}
