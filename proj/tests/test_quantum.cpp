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
#include "coinbox/quantum.hpp"
#include "coinbox/wcf.hpp"

using namespace coinbox;

TEST_CASE("field arithmetic in Q(sqrt 2)") {
  QReal r2(Rational(0), Rational(1));  // sqrt 2
  CHECK(r2 * r2 == QReal(Rational(2)));
  QReal half_r2 = QReal::sqrt2_over(2);
  CHECK(half_r2 * half_r2 == QReal(Rational(1, 2)));
  QReal x(Rational(3), Rational(-2));
  CHECK(x / x == QReal(Rational(1)));
  CHECK((QReal(Rational(1)) / r2) * r2 == QReal(Rational(1)));
}

TEST_CASE("standard gates are isometries") {
  CHECK(is_isometry(q_hadamard()));
  CHECK(is_isometry(q_pauli_x()));
  CHECK(is_isometry(q_pauli_z()));
  CHECK(is_isometry(q_cnot()));
  CHECK(is_isometry(q_bell_encoder()));
  QMatrix broken = q_hadamard();
  broken[0][0] = amp(1);
  CHECK(!is_isometry(broken));
}

TEST_CASE("hadamard twice is the identity, exactly") {
  QState s;
  int q = s.add_register(2);
  s.apply(q_hadamard(), {q});
  s.apply(q_hadamard(), {q});
  auto w = s.measure_weights(q);
  REQUIRE(w.size() == 1);
  CHECK(w[0].first == 0);
  CHECK(w[0].second == QReal(Rational(1)));
}

TEST_CASE("hadamard measurement is exactly fair") {
  QState s;
  int q = s.add_register(2);
  s.apply(q_hadamard(), {q});
  auto w = s.measure_weights(q);
  REQUIRE(w.size() == 2);
  CHECK(w[0].second == QReal(Rational(1, 2)));
  CHECK(w[1].second == QReal(Rational(1, 2)));
}

TEST_CASE("bell pair measurements agree") {
  QState s;
  int a = s.add_register(2);
  int b = s.add_register(2);
  s.apply(q_bell_encoder(), {a, b});
  auto w = s.measure_weights(a);
  REQUIRE(w.size() == 2);
  QState s0 = s;
  s0.project(a, 0);
  auto w0 = s0.measure_weights(b);
  REQUIRE(w0.size() == 1);
  CHECK(w0[0].first == 0);
}

TEST_CASE("entangled toy protocol is a fair agreeing coin") {
  WcfProtocol p = entangled_pair_protocol();
  Distribution d = honest_distribution(p);
  CHECK(d.probs.at({0, 0}) == Rational(1, 2));
  CHECK(d.probs.at({1, 1}) == Rational(1, 2));
  CHECK(d.probs.size() == 2);
}

TEST_CASE("quantum delay boxes relocate registers unchanged") {
  // A prepared |1> is delayed to a later position and then measured by a
  // second box; the outcome must be 1 with certainty.
  Poset p = Poset::chain({"t0", "t1", "t2"});

  CausalBox src;
  src.name = "src";
  src.poset = p;
  src.chi = strict_past_causality(p);
  src.wires = {{"q_out", WireDir::out, 2, true, {"t0"}}};
  {
    auto script = std::make_shared<QuantumScript>();
    script->steps = {QuantumScript::prepare({0}, {2}),
                     QuantumScript::apply("t0", q_pauli_x(), {0}),
                     QuantumScript::emit("q_out", "t0", 0)};
    src.script = script;
  }

  DelayFn f(p, {{"t0", "t1"}});
  CausalBox relay = delay_box("relay", f, 2, "relay_in", "relay_out", true);

  CausalBox sink;
  sink.name = "sink";
  sink.poset = p;
  sink.chi = strict_past_causality(p);
  sink.wires = {{"q_in", WireDir::in, 2, true, {"t1"}},
                {"m", WireDir::out, 2, false, {"t2"}}};
  {
    auto script = std::make_shared<QuantumScript>();
    script->steps = {QuantumScript::receive("q_in", "t1", 0),
                     QuantumScript::measure_emit("m", "t2", 0)};
    sink.script = script;
  }

  SystemGraph s{{src, relay, sink}, {}};
  s = connect(std::move(s), "q_out", "relay_in");
  s = connect(std::move(s), "relay_out", "q_in");
  Distribution d = run_exact(s);
  CHECK(d.pr({"m", "t2"}, 1) == 1);
}

TEST_CASE("irrational branch weights are refused, not rounded") {
  // Projecting a state with amplitude (1 + i)/2 and 1/sqrt2 mixes rational
  // and sqrt-2 parts in the norm, which has no exact rational value.
  Poset p = Poset::chain({"t0", "t1"});
  CausalBox b;
  b.name = "odd";
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{"m", WireDir::out, 2, false, {"t1"}}};
  auto script = std::make_shared<QuantumScript>();
  QMatrix skew = {{amp_sqrt2_over(2), {QReal(Rational(-1, 2)), QReal(Rational(1, 2))}},
                  {{QReal(Rational(1, 2)), QReal(Rational(1, 2))}, amp_sqrt2_over(2)}};
  REQUIRE(is_isometry(skew));
  script->steps = {QuantumScript::prepare({0}, {2}),
                   QuantumScript::apply("t0", skew, {0}),
                   QuantumScript::apply("t0", q_hadamard(), {0}),
                   QuantumScript::measure_emit("m", "t1", 0)};
  b.script = script;
  SystemGraph s{{b}, {}};
  CHECK_THROWS(run_exact(s));
}
