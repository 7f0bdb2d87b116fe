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

#include "coinbox/poset.hpp"
#include "property_suites.hpp"

using namespace coinbox;

TEST_CASE("single element is reflexive only") {
  Poset p = Poset::build({"t0"}, {});
  CHECK(p.leq("t0", "t0"));
  CHECK(p.size() == 1);
}

TEST_CASE("closure is transitive") {
  Poset p = Poset::chain({"t0", "t1", "t2"});
  CHECK(p.leq("t0", "t2"));
  CHECK(!p.leq("t2", "t0"));
}

TEST_CASE("cyclic edges are rejected") {
  CHECK_THROWS_AS(Poset::build({"a", "b"}, {{"a", "b"}, {"b", "a"}}), CycleError);
  CHECK_THROWS_AS(Poset::build({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}), CycleError);
}

TEST_CASE("edge labels must exist") {
  CHECK_THROWS_AS(Poset::build({"a"}, {{"a", "zz"}}), UnknownElementError);
}

TEST_CASE("cut characterization on a chain") {
  Poset p = Poset::chain({"t0", "t1", "t2"});
  CHECK(is_cut(p, {"t0", "t1"}));
  CHECK(!is_cut(p, {"t1"}));
  CHECK(is_cut(p, {}));
  CHECK_THROWS_AS(is_cut(p, {"nope"}), UnknownElementError);
}

TEST_CASE("bounded cuts need a dominating element") {
  // {a, b} is dominated by top even though top is outside the cut.
  Poset p = Poset::build({"a", "b", "top"}, {{"a", "top"}, {"b", "top"}});
  CHECK(p.is_bounded(p.down_mask(p.index_of("a")) | p.down_mask(p.index_of("b"))));
  // In a bare antichain the pair has no upper bound.
  Poset anti = Poset::build({"a", "b"}, {});
  CHECK(!anti.is_bounded(0b11));
  CHECK(anti.is_bounded(0b01));
}

TEST_CASE("union of chain pair with a join box") {
  // Two chains plus an order putting both maxima below one point.
  Poset chain1 = Poset::chain({"t0", "t1", "t2"});
  Poset chain2 = Poset::chain({"u0", "u1", "u2"});
  Poset eta = Poset::build({"t2", "u2", "tA"}, {{"t2", "tA"}, {"u2", "tA"}});
  Poset u = union_posets(union_posets(chain1, chain2), eta);
  CHECK(u.size() == 7);
  CHECK(u.leq("t0", "tA"));
  CHECK(u.leq("u0", "tA"));
  CHECK(!u.leq("t0", "u0"));
}

TEST_CASE("union of disjoint chains adds no relations") {
  Poset u = union_posets(Poset::chain({"a", "b"}), Poset::chain({"c", "d"}));
  CHECK(u.leq("a", "b"));
  CHECK(!u.leq("a", "c"));
  CHECK(!u.leq("c", "a"));
}

TEST_CASE("incompatible orders are rejected") {
  Poset p1 = Poset::build({"a", "b"}, {{"a", "b"}});
  Poset p2 = Poset::build({"a", "b"}, {{"b", "a"}});
  CHECK_THROWS_AS(union_posets(p1, p2), IncompatibleError);
}

TEST_CASE("cut restriction to a part") {
  Poset chain1 = Poset::chain({"t0", "t1", "t2"});
  Poset chain2 = Poset::chain({"u0", "u1", "u2"});
  Poset u = union_posets(chain1, chain2);

  Cut whole{u, u.full_mask()};
  CHECK(restrict_cut(u, whole, chain1).mask == chain1.full_mask());

  std::uint64_t m = 0;
  for (const char* l : {"t0", "t1", "u0"}) m |= std::uint64_t(1) << u.index_of(l);
  Cut mixed{u, m};
  Cut r2 = restrict_cut(u, mixed, chain2);
  CHECK(r2.member_labels() == std::vector<std::string>{"u0"});
  CHECK(is_cut_mask(chain2, r2.mask));

  Cut empty{u, 0};
  CHECK(restrict_cut(u, empty, chain1).mask == 0);
}

TEST_CASE("restriction rejects a non-subposet") {
  Poset u = union_posets(Poset::chain({"a", "b"}), Poset::chain({"c"}));
  Poset stranger = Poset::chain({"a", "zz"});
  CHECK_THROWS_AS(restrict_cut(u, Cut{u, 0}, stranger), NotASubposetError);
}

TEST_CASE("strict-past causality is valid on chains up to length 5") {
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("t" + std::to_string(i));
    Poset p = Poset::chain(labels);
    CHECK(validate_causality_fn(p, strict_past_causality(p)).ok);
  }
}

TEST_CASE("identity map fails strict decrease") {
  Poset p = Poset::chain({"t0", "t1"});
  auto report = validate_causality_fn(p, identity_causality(p));
  CHECK(!report.ok);
  bool found = false;
  for (const auto& v : report.violations)
    if (v.condition == "decreasing") found = true;
  CHECK(found);
}

TEST_CASE("empty-image map is valid") {
  Poset p = Poset::build({"a", "b", "c"}, {{"a", "c"}});
  CHECK(validate_causality_fn(p, empty_causality(p)).ok);
}

TEST_CASE("delay function must advance") {
  Poset p = Poset::chain({"t0", "t1"});
  CHECK_THROWS_AS(DelayFn(p, {{"t1", "t0"}}), NotAdvancingError);
  CHECK_THROWS_AS(DelayFn(p, {{"t0", "t0"}}), NotAdvancingError);
}

TEST_CASE("delay-induced causality on a two-chain") {
  Poset p = Poset::chain({"t0", "t1"});
  DelayFn f(p, {{"t0", "t1"}});
  CausalityFn chi = delay_to_causality(p, f);
  std::uint64_t full = p.full_mask();
  std::uint64_t t0 = std::uint64_t(1) << p.index_of("t0");
  CHECK(chi.image(full) == t0);
  CHECK(chi.image(t0) == 0);
  CHECK(validate_causality_fn(p, chi).ok);
}

TEST_CASE("empty-domain delay induces the empty map") {
  Poset p = Poset::chain({"t0", "t1"});
  DelayFn f(p, {});
  CausalityFn chi = delay_to_causality(p, f);
  CHECK(chi.image(p.full_mask()) == 0);
}

TEST_CASE("relay-pair delay brings the whole past along") {
  // Even positions of one chain delayed onto a second chain.
  Poset p = Poset::build({"t0", "t1", "t2", "u0", "u1", "u2"},
                         {{"t0", "t1"}, {"t1", "t2"}, {"u0", "u1"}, {"u1", "u2"},
                          {"t0", "u0"}, {"t2", "u2"}, {"u1", "t1"}});
  DelayFn f(p, {{"t0", "u0"}, {"t2", "u2"}});
  CausalityFn chi = delay_to_causality(p, f);
  std::uint64_t cut_u2 = p.down_mask(p.index_of("u2"));
  CHECK((chi.image(cut_u2) & p.down_mask(p.index_of("t2"))) == p.down_mask(p.index_of("t2")));
  CHECK(validate_causality_fn(p, chi).ok);
}

TEST_CASE("DOT export lists cover edges only") {
  std::string chain = hasse_dot(Poset::chain({"a", "b", "c"}));
  CHECK(chain.find("\"a\" -> \"b\"") != std::string::npos);
  CHECK(chain.find("\"b\" -> \"c\"") != std::string::npos);
  CHECK(chain.find("\"a\" -> \"c\"") == std::string::npos);  // transitive edge omitted

  std::string anti = hasse_dot(Poset::build({"a", "b", "c"}, {}));
  CHECK(anti.find("->") == std::string::npos);

  // Sequential blocks: chains linked end to end.
  Poset blocks = union_posets(union_posets(Poset::chain({"a1", "a2"}), Poset::chain({"b1", "b2"})),
                              Poset::build({"a2", "b1"}, {{"a2", "b1"}}));
  std::string dot = hasse_dot(blocks);
  CHECK(dot.find("\"a2\" -> \"b1\"") != std::string::npos);
}

TEST_CASE("lexicographic linear extension is deterministic") {
  Poset p = Poset::build({"b", "a", "c"}, {{"c", "a"}});
  auto ext = p.linear_extension();
  std::vector<std::string> order;
  for (int i : ext) order.push_back(p.label(i));
  CHECK(order == std::vector<std::string>{"b", "c", "a"});
}

TEST_CASE("randomized poset law suite") {
  auto fails = coinbox::testing::poset_law_suite(300, 20260809);
  CHECK(fails.total() == 0);
}
