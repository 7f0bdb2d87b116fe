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
#include "coinbox/resources.hpp"

namespace coinbox {

namespace {

void check_params(const Rational& z, const Rational& eps) {
  if (z < 0 || z > Rational(1, 2))
    throw ParamRangeError("resource: z = " + fraction_str(z) + " outside [0, 1/2]");
  if (eps < 0 || eps > z)
    throw ParamRangeError("resource: eps = " + fraction_str(eps) + " outside [0, z]");
}

/// flag=1 forces `forced`; otherwise the coin flips from the shown value to
/// the requested bit with probability `flip`.
OutputRule capped_coin_rule(const Slot& out, const Slot& shown, const Slot& bit, const Slot& flag,
                            int forced, const Rational& flip) {
  OutputRule r;
  r.out = out;
  r.deps = {shown, bit, flag};
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (int f = 0; f < 2; ++f) {
        SymbolDist d;
        if (f == 1) {
          d = SymbolDist::point(forced);
        } else if (b == c) {
          d = SymbolDist::point(c);
        } else {
          if (flip > 0) d.weights.push_back({b, flip});
          if (flip < 1) d.weights.push_back({c, 1 - flip});
        }
        r.rows[{c, b, f}] = d;
      }
  return r;
}

OutputRule coin_master_rule(const Slot& out, const Rational& z) {
  OutputRule r;
  r.out = out;
  r.rows[{}] = SymbolDist::bernoulli_zero(z);
  return r;
}

OutputRule echo_rule(const Slot& out, const Slot& dep) {
  OutputRule r;
  r.out = out;
  r.deps = {dep};
  r.rows[{0}] = SymbolDist::point(0);
  r.rows[{1}] = SymbolDist::point(1);
  return r;
}

}  // namespace

CausalBox wcf_resource_honest(const Rational& z) {
  check_params(z, Rational(0));
  Poset p = Poset::build({"ta", "tb"}, {});
  CausalBox b;
  b.name = "S";
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{"s_coin_a", WireDir::out, 2, false, {"ta"}},
             {"s_coin_b", WireDir::out, 2, false, {"tb"}}};
  b.kernel.rules = {coin_master_rule({"s_coin_a", "ta"}, z),
                    echo_rule({"s_coin_b", "tb"}, {"s_coin_a", "ta"})};
  b.validate();
  return b;
}

CausalBox wcf_resource_dishonest_alice_flip(const Rational& z, const Rational& flip) {
  Poset p = Poset::chain({"tp0", "tp1", "tb"});
  CausalBox b;
  b.name = "S_A";
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{"sa_show", WireDir::out, 2, false, {"tp0"}},
             {"sa_bit", WireDir::in, 2, false, {"tp1"}},
             {"sa_flag", WireDir::in, 2, false, {"tp1"}},
             {"sa_coin_b", WireDir::out, 2, false, {"tb"}}};
  b.kernel.rules = {coin_master_rule({"sa_show", "tp0"}, z),
                    capped_coin_rule({"sa_coin_b", "tb"}, {"sa_show", "tp0"}, {"sa_bit", "tp1"},
                                     {"sa_flag", "tp1"}, /*forced=*/1, flip)};
  b.validate();
  return b;
}

CausalBox wcf_resource_dishonest_alice(const Rational& z, const Rational& eps) {
  check_params(z, eps);
  return wcf_resource_dishonest_alice_flip(z, eps / (1 - z));
}

CausalBox wcf_resource_dishonest_bob(const Rational& z, const Rational& eps) {
  check_params(z, eps);
  const Rational flip = eps == 0 ? Rational(0) : eps / z;
  Poset p = Poset::chain({"tq0", "tq1", "ta"});
  CausalBox b;
  b.name = "S_B";
  b.poset = p;
  b.chi = strict_past_causality(p);
  b.wires = {{"sb_show", WireDir::out, 2, false, {"tq0"}},
             {"sb_bit", WireDir::in, 2, false, {"tq1"}},
             {"sb_flag", WireDir::in, 2, false, {"tq1"}},
             {"sb_coin_a", WireDir::out, 2, false, {"ta"}}};
  b.kernel.rules = {coin_master_rule({"sb_show", "tq0"}, z),
                    capped_coin_rule({"sb_coin_a", "ta"}, {"sb_show", "tq0"}, {"sb_bit", "tq1"},
                                     {"sb_flag", "tq1"}, /*forced=*/0, flip)};
  b.validate();
  return b;
}

namespace {

/// Honest client echoing the shown coin back with a lowered flag; removing it
/// exposes the resource's adversary-side interface to the enumerator.
CausalBox resource_client(const Poset& p, const std::string& show_pos,
                          const std::string& reply_pos) {
  CausalBox c;
  c.name = "client";
  c.poset = p;
  c.chi = strict_past_causality(p);
  c.wires = {{"cl_show", WireDir::in, 2, false, {show_pos}},
             {"cl_bit", WireDir::out, 2, false, {reply_pos}},
             {"cl_flag", WireDir::out, 2, false, {reply_pos}}};
  OutputRule flag;
  flag.out = {"cl_flag", reply_pos};
  flag.rows[{}] = SymbolDist::point(0);
  c.kernel.rules = {echo_rule({"cl_bit", reply_pos}, {"cl_show", show_pos}), flag};
  c.validate();
  return c;
}

}  // namespace

FullyExpressingReport fully_expressing_audit(const CausalBox& honest,
                                             const CausalBox& dishonest_alice,
                                             const CausalBox& dishonest_bob,
                                             const WcfParams& params) {
  FullyExpressingReport report;

  {
    SystemGraph s{{honest}, {}};
    Distribution d = run_exact(s);
    std::map<std::vector<int>, Rational> expected;
    if (params.z > 0) expected[{0, 0}] = params.z;
    if (params.z < 1) expected[{1, 1}] = 1 - params.z;
    report.honest_ok = d.probs == expected;
  }

  auto max_cheat = [](const SystemGraph& sys, std::size_t client_idx, const Slot& target,
                      int want) {
    CheatSetup setup = cheat_setup(sys, {client_idx});
    AdversaryEnumerator en(setup.iface);
    Rational best(-1);
    for (std::uint64_t i = 0; i < en.count(); ++i) {
      Rational v = run_exact(attach_adversary(setup, en.at(i))).pr(target, want);
      if (v > best) best = v;
    }
    return best;
  };

  {
    SystemGraph s{{dishonest_alice, resource_client(dishonest_alice.poset, "tp0", "tp1")},
                  {{"sa_show", "cl_show"}, {"cl_bit", "sa_bit"}, {"cl_flag", "sa_flag"}}};
    report.max_alice_cheat = max_cheat(s, 1, {"sa_coin_b", "tb"}, 0);
    report.alice_capped = report.max_alice_cheat <= params.z + params.eps;
  }
  {
    SystemGraph s{{dishonest_bob, resource_client(dishonest_bob.poset, "tq0", "tq1")},
                  {{"sb_show", "cl_show"}, {"cl_bit", "sb_bit"}, {"cl_flag", "sb_flag"}}};
    report.max_bob_cheat = max_cheat(s, 1, {"sb_coin_a", "ta"}, 1);
    report.bob_capped = report.max_bob_cheat <= 1 - params.z + params.eps;
  }
  return report;
}

CausalBox passthrough_glue(const Rational& z, const Rational& eps) {
  check_params(z, eps);
  Poset p = Poset::build({"tp0", "tp1", "tq0", "tq1"},
                         {{"tq0", "tp1"}, {"tp0", "tp1"}, {"tq0", "tq1"}, {"tp0", "tq1"}});
  CausalBox g;
  g.name = "glue";
  g.poset = p;
  g.chi = strict_past_causality(p);
  g.wires = {{"g_show_b", WireDir::in, 2, false, {"tq0"}},
             {"g_bit_b", WireDir::out, 2, false, {"tq1"}},
             {"g_flag_b", WireDir::out, 2, false, {"tq1"}},
             {"g_show_a", WireDir::in, 2, false, {"tp0"}},
             {"g_bit_a", WireDir::out, 2, false, {"tp1"}},
             {"g_flag_a", WireDir::out, 2, false, {"tp1"}}};
  OutputRule flag_a, flag_b;
  flag_a.out = {"g_flag_a", "tp1"};
  flag_a.rows[{}] = SymbolDist::point(0);
  flag_b.out = {"g_flag_b", "tq1"};
  flag_b.rows[{}] = SymbolDist::point(0);
  // Each side's request bit forwards the coin shown on the other side.
  g.kernel.rules = {echo_rule({"g_bit_a", "tp1"}, {"g_show_b", "tq0"}), flag_a,
                    echo_rule({"g_bit_b", "tq1"}, {"g_show_a", "tp0"}), flag_b};
  g.validate();
  return g;
}

WcfProtocol resource_to_protocol(const CausalBox& dishonest_bob,
                                 const std::vector<CausalBox>& glue,
                                 const CausalBox& dishonest_alice, const WcfParams& params,
                                 const std::vector<Link>& links) {
  SystemGraph sys;
  sys.boxes.push_back(dishonest_bob);
  std::vector<std::size_t> bob_boxes;
  for (const auto& g : glue) {
    bob_boxes.push_back(sys.boxes.size());
    sys.boxes.push_back(g);
  }
  bob_boxes.push_back(sys.boxes.size());
  sys.boxes.push_back(dishonest_alice);
  for (const auto& l : links) sys = connect(std::move(sys), l.out_wire, l.in_wire);

  Slot coin_a{"sb_coin_a", "ta"}, coin_b{"sa_coin_b", "tb"};
  return WcfProtocol{std::move(sys), {0}, std::move(bob_boxes), {}, coin_a, coin_b, params};
}

}  // namespace coinbox
