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
#include "coinbox/wcf.hpp"

#include <algorithm>
#include <set>

#include "coinbox/parallel.hpp"
#include "coinbox/quantum.hpp"

namespace coinbox {

WcfParams::WcfParams(Rational z_, Rational eps_) : z(std::move(z_)), eps(std::move(eps_)) {
  if (z < 0 || z > Rational(1, 2))
    throw ParamRangeError("wcf params: z = " + fraction_str(z) + " outside [0, 1/2]");
  if (eps < 0 || eps > z)
    throw ParamRangeError("wcf params: eps = " + fraction_str(eps) + " outside [0, z]");
}

// ---------------------------------------------------------------------------
// Cheating interfaces
// ---------------------------------------------------------------------------

CheatSetup cheat_setup(const SystemGraph& system, const std::vector<std::size_t>& remove_boxes) {
  CheatSetup setup;
  setup.merged = merged_poset(system);

  std::set<std::size_t> removed(remove_boxes.begin(), remove_boxes.end());
  std::set<std::string> removed_wires;
  for (auto bi : removed)
    for (const auto& w : system.boxes.at(bi).wires) removed_wires.insert(w.id);

  for (std::size_t bi = 0; bi < system.boxes.size(); ++bi)
    if (!removed.count(bi)) setup.remnant.boxes.push_back(system.boxes[bi]);

  // A link with exactly one removed endpoint becomes part of the adversary
  // interface; with both endpoints removed it disappears.
  std::vector<AdversarySlot> slots;
  auto wire_of = [&](const std::string& id) { return system.box_of_wire(id)->find_wire(id); };
  for (const auto& l : system.links) {
    bool out_removed = removed_wires.count(l.out_wire) > 0;
    bool in_removed = removed_wires.count(l.in_wire) > 0;
    if (out_removed && in_removed) continue;
    setup.remnant.links.push_back(l);
    if (!out_removed && !in_removed) continue;
    const Wire* w = wire_of(out_removed ? l.out_wire : l.in_wire);
    for (const auto& p : w->positions) {
      AdversarySlot s;
      s.slot = {w->id, p};
      s.sends = out_removed;  // the adversary must feed the remnant's input
      s.alphabet = w->alphabet;
      s.quantum = w->quantum;
      slots.push_back(std::move(s));
    }
  }

  // Schedule order: merged linear extension rank, then wire id.
  std::vector<int> rank(setup.merged.size());
  {
    auto ext = setup.merged.linear_extension();
    for (std::size_t i = 0; i < ext.size(); ++i) rank[std::size_t(ext[i])] = int(i);
  }
  std::sort(slots.begin(), slots.end(), [&](const AdversarySlot& a, const AdversarySlot& b) {
    auto ka = std::pair(rank[std::size_t(setup.merged.index_of(a.slot.pos))], a.slot.wire);
    auto kb = std::pair(rank[std::size_t(setup.merged.index_of(b.slot.pos))], b.slot.wire);
    return ka < kb;
  });

  // A decision sees exactly the observations strictly below it in the order.
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].sends) continue;
    int pi = setup.merged.index_of(slots[i].slot.pos);
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (slots[j].sends) continue;
      int pj = setup.merged.index_of(slots[j].slot.pos);
      if (setup.merged.less(pj, pi)) slots[i].visible.push_back(j);
    }
  }
  setup.iface = std::move(slots);
  return setup;
}

CheatSetup cheat_setup(const WcfProtocol& p, Party party) {
  return cheat_setup(p.system, party == Party::alice ? p.alice_boxes : p.bob_boxes);
}

AdversaryEnumerator::AdversaryEnumerator(std::vector<AdversarySlot> iface, std::uint64_t cap)
    : iface_(std::move(iface)) {
  for (std::size_t i = 0; i < iface_.size(); ++i) {
    if (!iface_[i].sends) continue;
    if (iface_[i].quantum)
      throw Error("adversary enumeration: quantum interface wires have no classical strategy class");
    decisions_.push_back(i);
    std::uint64_t entries = 1;
    for (auto j : iface_[i].visible) {
      entries *= std::uint64_t(iface_[j].alphabet);
      if (entries > cap) throw ExplosionError("adversary enumeration: observation space too large");
    }
    table_sizes_.push_back(entries);
    for (std::uint64_t e = 0; e < entries; ++e) {
      count_ *= std::uint64_t(iface_[i].alphabet);
      if (count_ > cap)
        throw ExplosionError("adversary enumeration: more than " + std::to_string(cap) +
                             " strategies");
    }
  }
}

AdversaryStrategy AdversaryEnumerator::at(std::uint64_t index) const {
  if (index >= count_) throw Error("adversary enumeration: index out of range");
  AdversaryStrategy s;
  s.index = index;
  std::uint64_t rest = index;
  for (std::size_t k = 0; k < decisions_.size(); ++k) {
    const int alpha = iface_[decisions_[k]].alphabet;
    std::vector<int> table(table_sizes_[k]);
    for (auto& cell : table) {
      cell = int(rest % std::uint64_t(alpha));
      rest /= std::uint64_t(alpha);
    }
    s.tables.push_back(std::move(table));
  }
  return s;
}

SystemGraph attach_adversary(const CheatSetup& setup, const AdversaryStrategy& strategy) {
  CausalBox adv;
  adv.name = "adversary";
  adv.poset = setup.merged;
  adv.chi = strict_past_causality(adv.poset);

  // One wire per distinct id over the interface slots.
  std::map<std::string, Wire> wires;
  for (const auto& s : setup.iface) {
    Wire& w = wires[s.slot.wire];
    if (w.id.empty()) {
      w.id = s.slot.wire;
      w.dir = s.sends ? WireDir::out : WireDir::in;
      w.alphabet = s.alphabet;
      w.quantum = s.quantum;
    }
    w.positions.push_back(s.slot.pos);
  }
  for (auto& [id, w] : wires) adv.wires.push_back(w);

  std::size_t k = 0;
  for (const auto& s : setup.iface) {
    if (!s.sends) continue;
    const auto& table = strategy.tables.at(k);
    OutputRule rule;
    rule.out = s.slot;
    std::vector<int> alphas;
    for (auto j : s.visible) {
      rule.deps.push_back(setup.iface[j].slot);
      alphas.push_back(setup.iface[j].alphabet);
    }
    // Row per observation assignment; code = prefix-major mixed radix.
    std::vector<int> key(alphas.size(), 0);
    for (std::uint64_t code = 0; code < table.size(); ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        key[i] = int(c % std::uint64_t(alphas[i]));
        c /= std::uint64_t(alphas[i]);
      }
      rule.rows[key] = SymbolDist::point(table[code]);
    }
    adv.kernel.rules.push_back(std::move(rule));
    ++k;
  }
  adv.validate();

  SystemGraph out = setup.remnant;
  out.boxes.push_back(std::move(adv));
  return out;
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

Distribution honest_distribution(const WcfProtocol& p) {
  return run_exact(p.system).marginal({std::min(p.coin_a, p.coin_b), std::max(p.coin_a, p.coin_b)});
}

namespace {

CheatResult best_cheat(const WcfProtocol& p, Party party) {
  const CheatSetup setup = cheat_setup(p, party);
  const AdversaryEnumerator en(setup.iface);
  const Slot target = party == Party::alice ? p.coin_b : p.coin_a;
  const int want = party == Party::alice ? 0 : 1;

  struct Best {
    Rational value{-1};
    std::uint64_t index = 0;
  };
  auto eval_range = [&](std::uint64_t lo, std::uint64_t hi) {
    Best best;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SystemGraph attacked = attach_adversary(setup, en.at(i));
      Rational v = run_exact(attacked).pr(target, want);
      if (v > best.value) best = {v, i};
    }
    return best;
  };
  Best best = parallel_chunks<Best>(
      en.count(), thread_count(), Best{},
      [&](std::uint64_t lo, std::uint64_t hi) { return eval_range(lo, hi); },
      [](Best acc, Best b) {
        if (b.value > acc.value || (b.value == acc.value && acc.value >= 0 && b.index < acc.index))
          return b;
        return acc;
      });

  CheatResult r;
  r.value = best.value;
  r.witness = en.at(best.index);
  r.strategies_scanned = en.count();
  return r;
}

}  // namespace

CheatResult best_cheat_alice(const WcfProtocol& p) { return best_cheat(p, Party::alice); }
CheatResult best_cheat_bob(const WcfProtocol& p) { return best_cheat(p, Party::bob); }

SecurityReport verify_standalone(const WcfProtocol& p) {
  SecurityReport report;
  report.honest = honest_distribution(p);

  // S1: the joint must put mass z on (0,0) and 1-z on (1,1), exactly.
  // Agreement makes the coin column order immaterial.
  std::map<std::vector<int>, Rational> expected;
  if (p.params.z > 0) expected[{0, 0}] = p.params.z;
  if (p.params.z < 1) expected[{1, 1}] = 1 - p.params.z;
  report.s1_ok = report.honest.probs == expected;

  auto a = best_cheat_alice(p);
  auto b = best_cheat_bob(p);
  report.p_star_alice = a.value;
  report.p_star_bob = b.value;
  report.witness_alice = a.witness;
  report.witness_bob = b.witness;
  report.s2_ok = a.value <= p.params.z + p.params.eps;
  report.s3_ok = b.value <= 1 - p.params.z + p.params.eps;
  try {
    report.rounds = interaction_rounds(p);
  } catch (const NotCombModelError&) {
    report.rounds = 0;
  }
  report.classical_bound_only = p.system.is_quantum();
  return report;
}

int interaction_rounds(const WcfProtocol& p, Party party) {
  const CheatSetup setup = cheat_setup(p, party);
  int rounds = 0;
  std::string current_pos;
  bool current_sends = false;
  for (const auto& s : setup.iface) {
    if (s.slot.pos == current_pos) {
      if (s.sends != current_sends)
        throw NotCombModelError("interaction rounds: position " + s.slot.pos +
                                " mixes directions");
      continue;
    }
    if (rounds > 0 && s.sends == current_sends)
      throw NotCombModelError("interaction rounds: consecutive rounds in the same direction");
    current_pos = s.slot.pos;
    current_sends = s.sends;
    ++rounds;
  }
  return rounds;
}

int interaction_rounds(const WcfProtocol& p) { return interaction_rounds(p, Party::alice); }

// ---------------------------------------------------------------------------
// Toy protocols
// ---------------------------------------------------------------------------

namespace {

OutputRule identity_rule(const Slot& out, const Slot& dep, int alphabet = 2) {
  OutputRule r;
  r.out = out;
  r.deps = {dep};
  for (int v = 0; v < alphabet; ++v) r.rows[{v}] = SymbolDist::point(v);
  return r;
}

OutputRule const_rule(const Slot& out, const SymbolDist& dist) {
  OutputRule r;
  r.out = out;
  r.rows[{}] = dist;
  return r;
}

}  // namespace

WcfProtocol trivial_announce(const Rational& z) {
  Poset p = Poset::build({"t0", "ta", "tb"}, {{"t0", "ta"}, {"t0", "tb"}});

  CausalBox alice;
  alice.name = "alice";
  alice.poset = p;
  alice.chi = strict_past_causality(p);
  alice.wires = {{"msg", WireDir::out, 2, false, {"t0"}},
                 {"coin_a", WireDir::out, 2, false, {"ta"}}};
  alice.kernel.rules = {const_rule({"msg", "t0"}, SymbolDist::bernoulli_zero(z)),
                        identity_rule({"coin_a", "ta"}, {"msg", "t0"})};
  alice.validate();

  CausalBox bob;
  bob.name = "bob";
  bob.poset = p;
  bob.chi = strict_past_causality(p);
  bob.wires = {{"msg_in", WireDir::in, 2, false, {"t0"}},
               {"coin_b", WireDir::out, 2, false, {"tb"}}};
  bob.kernel.rules = {identity_rule({"coin_b", "tb"}, {"msg_in", "t0"})};
  bob.validate();

  WcfProtocol proto{{{alice, bob}, {{"msg", "msg_in"}}}, {0}, {1}, {},
                    {"coin_a", "ta"}, {"coin_b", "tb"}, WcfParams(z, Rational(0))};
  return proto;
}

WcfProtocol bob_announce(const Rational& z) {
  Poset p = Poset::build({"t0", "ta", "tb"}, {{"t0", "ta"}, {"t0", "tb"}});

  CausalBox alice;
  alice.name = "alice";
  alice.poset = p;
  alice.chi = strict_past_causality(p);
  alice.wires = {{"msg_in", WireDir::in, 2, false, {"t0"}},
                 {"coin_a", WireDir::out, 2, false, {"ta"}}};
  alice.kernel.rules = {identity_rule({"coin_a", "ta"}, {"msg_in", "t0"})};
  alice.validate();

  CausalBox bob;
  bob.name = "bob";
  bob.poset = p;
  bob.chi = strict_past_causality(p);
  bob.wires = {{"msg", WireDir::out, 2, false, {"t0"}},
               {"coin_b", WireDir::out, 2, false, {"tb"}}};
  bob.kernel.rules = {const_rule({"msg", "t0"}, SymbolDist::bernoulli_zero(z)),
                      identity_rule({"coin_b", "tb"}, {"msg", "t0"})};
  bob.validate();

  WcfProtocol proto{{{alice, bob}, {{"msg", "msg_in"}}}, {0}, {1}, {},
                    {"coin_a", "ta"}, {"coin_b", "tb"}, WcfParams(z, Rational(0))};
  return proto;
}

WcfProtocol cheat_capped(const Rational& z, const Rational& eps) {
  return cheat_capped(z, eps, eps);
}

WcfProtocol cheat_capped(const Rational& z, const Rational& eps_a, const Rational& eps_b) {
  WcfParams params(z, std::max(eps_a, eps_b));
  Poset p = Poset::build({"s0a", "s0b", "s1a", "s1b", "ta", "tb"},
                         {{"s0a", "s1a"}, {"s0b", "s1b"}, {"s1a", "tb"}, {"s1b", "ta"},
                          {"s0a", "ta"}, {"s0b", "tb"}});

  const Rational flip_b = z == 0 ? Rational(0) : eps_b / z;        // toward Bob's request
  const Rational flip_a = eps_a / (1 - z);                         // toward Alice's request

  CausalBox res;
  res.name = "wres";
  res.poset = p;
  res.chi = strict_past_causality(p);
  res.wires = {{"show_a", WireDir::out, 2, false, {"s0a"}},
               {"show_b", WireDir::out, 2, false, {"s0b"}},
               {"req_a_bit", WireDir::in, 2, false, {"s1a"}},
               {"req_a_flag", WireDir::in, 2, false, {"s1a"}},
               {"req_b_bit", WireDir::in, 2, false, {"s1b"}},
               {"req_b_flag", WireDir::in, 2, false, {"s1b"}},
               {"coin_a", WireDir::out, 2, false, {"ta"}},
               {"coin_b", WireDir::out, 2, false, {"tb"}}};

  res.kernel.rules.push_back(const_rule({"show_a", "s0a"}, SymbolDist::bernoulli_zero(z)));
  res.kernel.rules.push_back(identity_rule({"show_b", "s0b"}, {"show_a", "s0a"}));

  auto capped_coin = [&](const Slot& out, const Slot& bit, const Slot& flag, int forced,
                         const Rational& flip) {
    OutputRule r;
    r.out = out;
    r.deps = {{"show_a", "s0a"}, bit, flag};
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
  };
  // A granted Alice flag forces Bob's coin to 1 (she forfeits); Bob's to 0.
  res.kernel.rules.push_back(
      capped_coin({"coin_b", "tb"}, {"req_a_bit", "s1a"}, {"req_a_flag", "s1a"}, 1, flip_a));
  res.kernel.rules.push_back(
      capped_coin({"coin_a", "ta"}, {"req_b_bit", "s1b"}, {"req_b_flag", "s1b"}, 0, flip_b));
  res.validate();

  auto client = [&](const std::string& name, const std::string& show, const std::string& bit,
                    const std::string& flag, const std::string& s0, const std::string& s1) {
    CausalBox c;
    c.name = name;
    c.poset = p;
    c.chi = strict_past_causality(p);
    c.wires = {{show, WireDir::in, 2, false, {s0}},
               {bit, WireDir::out, 2, false, {s1}},
               {flag, WireDir::out, 2, false, {s1}}};
    c.kernel.rules = {identity_rule({bit, s1}, {show, s0}),
                      const_rule({flag, s1}, SymbolDist::point(0))};
    c.validate();
    return c;
  };
  CausalBox alice = client("alice", "a_show", "a_bit", "a_flag", "s0a", "s1a");
  CausalBox bob = client("bob", "b_show", "b_bit", "b_flag", "s0b", "s1b");

  SystemGraph sys{{res, alice, bob},
                  {{"show_a", "a_show"},
                   {"a_bit", "req_a_bit"},
                   {"a_flag", "req_a_flag"},
                   {"show_b", "b_show"},
                   {"b_bit", "req_b_bit"},
                   {"b_flag", "req_b_flag"}}};
  return WcfProtocol{std::move(sys), {1}, {2}, {0},
                     {"coin_a", "ta"}, {"coin_b", "tb"}, params};
}

WcfProtocol xor_echo_protocol() {
  return xor_echo_protocol(SymbolDist::bernoulli_zero(Rational(1, 2)),
                           SymbolDist::bernoulli_zero(Rational(1, 2)));
}

WcfProtocol xor_echo_protocol(const SymbolDist& dist_a, const SymbolDist& dist_b) {
  Poset p = Poset::build({"t0", "t1", "t2", "ta", "tb"},
                         {{"t0", "t1"}, {"t1", "t2"}, {"t2", "ta"}, {"t2", "tb"}});

  CausalBox p1;
  p1.name = "p1";
  p1.poset = p;
  p1.chi = strict_past_causality(p);
  p1.wires = {{"ax", WireDir::out, 2, false, {"t0", "t2"}},
              {"ay", WireDir::in, 2, false, {"t1"}},
              {"coin_a", WireDir::out, 2, false, {"ta"}}};
  {
    OutputRule xor_out;
    xor_out.out = {"coin_a", "ta"};
    xor_out.deps = {{"ax", "t0"}, {"ay", "t1"}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) xor_out.rows[{a, b}] = SymbolDist::point(a ^ b);
    p1.kernel.rules = {const_rule({"ax", "t0"}, dist_a),
                       identity_rule({"ax", "t2"}, {"ax", "t0"}), std::move(xor_out)};
  }
  p1.validate();

  CausalBox p2;
  p2.name = "p2";
  p2.poset = p;
  p2.chi = strict_past_causality(p);
  p2.wires = {{"bx", WireDir::in, 2, false, {"t0", "t2"}},
              {"by", WireDir::out, 2, false, {"t1"}},
              {"coin_b", WireDir::out, 2, false, {"tb"}}};
  {
    OutputRule xor_out;
    xor_out.out = {"coin_b", "tb"};
    xor_out.deps = {{"bx", "t2"}, {"by", "t1"}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) xor_out.rows[{a, b}] = SymbolDist::point(a ^ b);
    p2.kernel.rules = {const_rule({"by", "t1"}, dist_b), std::move(xor_out)};
  }
  p2.validate();

  // Honest coin value: a XOR b with a ~ dist_a, b ~ dist_b.
  Rational z(0);
  for (const auto& [a, pa] : dist_a.weights)
    for (const auto& [b, pb] : dist_b.weights)
      if ((a ^ b) == 0) z += pa * pb;
  if (z > Rational(1, 2)) z = Rational(1, 2);  // metadata clamp for skewed toys

  SystemGraph sys{{p1, p2}, {{"ax", "bx"}, {"by", "ay"}}};
  return WcfProtocol{std::move(sys), {0}, {1}, {},
                     {"coin_a", "ta"}, {"coin_b", "tb"}, WcfParams(z, Rational(0))};
}

WcfProtocol entangled_pair_protocol() {
  Poset p = Poset::build({"t0", "t1", "t2", "ta", "tb"},
                         {{"t0", "t1"}, {"t1", "t2"}, {"t2", "ta"}, {"t2", "tb"}});

  CausalBox q1;
  q1.name = "p1";
  q1.poset = p;
  q1.chi = strict_past_causality(p);
  q1.wires = {{"ax", WireDir::out, 2, true, {"t0", "t2"}},
              {"ay", WireDir::in, 2, true, {"t1"}},
              {"coin_a", WireDir::out, 2, false, {"ta"}}};
  {
    auto script = std::make_shared<QuantumScript>();
    script->steps = {QuantumScript::prepare({0, 1}, {2, 2}),
                     QuantumScript::apply("t0", q_bell_encoder(), {0, 1}),
                     QuantumScript::emit("ax", "t0", 1),
                     QuantumScript::receive("ay", "t1", 2),
                     QuantumScript::prepare({3}, {2}),
                     QuantumScript::emit("ax", "t2", 3),
                     QuantumScript::measure_emit("coin_a", "ta", 0)};
    q1.script = script;
  }
  q1.validate();

  CausalBox q2;
  q2.name = "p2";
  q2.poset = p;
  q2.chi = strict_past_causality(p);
  q2.wires = {{"bx", WireDir::in, 2, true, {"t0", "t2"}},
              {"by", WireDir::out, 2, true, {"t1"}},
              {"coin_b", WireDir::out, 2, false, {"tb"}}};
  {
    auto script = std::make_shared<QuantumScript>();
    script->steps = {QuantumScript::receive("bx", "t0", 0),
                     QuantumScript::prepare({1}, {2}),
                     QuantumScript::emit("by", "t1", 1),
                     QuantumScript::receive("bx", "t2", 2),
                     QuantumScript::measure_emit("coin_b", "tb", 0)};
    q2.script = script;
  }
  q2.validate();

  SystemGraph sys{{q1, q2}, {{"ax", "bx"}, {"by", "ay"}}};
  return WcfProtocol{std::move(sys), {0}, {1}, {},
                     {"coin_a", "ta"}, {"coin_b", "tb"},
                     WcfParams(Rational(1, 2), Rational(1, 2))};
}

// ---------------------------------------------------------------------------
// Relabeling
// ---------------------------------------------------------------------------

namespace {

CausalBox relabel_box(const CausalBox& box, const std::string& prefix) {
  auto rp = [&](const std::string& pos) { return prefix + pos; };
  auto rw = [&](const std::string& id) { return prefix + id; };

  CausalBox out;
  out.name = prefix + box.name;
  std::map<std::string, std::string> pos_map;
  for (const auto& l : box.poset.labels()) pos_map[l] = rp(l);
  out.poset = box.poset.relabeled(pos_map);

  // Principal images translate index-by-index through the label maps.
  std::vector<std::uint64_t> img(out.poset.size(), 0);
  for (std::size_t t = 0; t < box.poset.size(); ++t) {
    std::uint64_t m = box.chi.principal_image(int(t));
    std::uint64_t nm = 0;
    for (std::size_t s = 0; s < box.poset.size(); ++s)
      if (m >> s & 1) nm |= std::uint64_t(1) << out.poset.index_of(rp(box.poset.label(int(s))));
    img[std::size_t(out.poset.index_of(rp(box.poset.label(int(t)))))] = nm;
  }
  out.chi = CausalityFn(out.poset, std::move(img));

  for (Wire w : box.wires) {
    w.id = rw(w.id);
    for (auto& pos : w.positions) pos = rp(pos);
    out.wires.push_back(std::move(w));
  }
  for (OutputRule r : box.kernel.rules) {
    r.out = {rw(r.out.wire), rp(r.out.pos)};
    for (auto& d : r.deps) d = {rw(d.wire), rp(d.pos)};
    out.kernel.rules.push_back(std::move(r));
  }
  if (box.script) {
    auto script = std::make_shared<QuantumScript>(*box.script);
    for (auto& st : script->steps) {
      if (!st.wire.empty()) st.wire = rw(st.wire);
      if (!st.pos.empty()) st.pos = rp(st.pos);
    }
    out.script = script;
  }
  out.validate();
  return out;
}

}  // namespace

WcfProtocol relabel_protocol(const WcfProtocol& p, const std::string& prefix) {
  WcfProtocol out = p;
  out.system.boxes.clear();
  for (const auto& b : p.system.boxes) out.system.boxes.push_back(relabel_box(b, prefix));
  out.system.links.clear();
  for (const auto& l : p.system.links)
    out.system.links.push_back({prefix + l.out_wire, prefix + l.in_wire});
  out.coin_a = {prefix + p.coin_a.wire, prefix + p.coin_a.pos};
  out.coin_b = {prefix + p.coin_b.wire, prefix + p.coin_b.pos};
  return out;
}

CausalBox bridge_box(const std::string& name, const Poset& order) {
  CausalBox b;
  b.name = name;
  b.poset = order;
  b.chi = strict_past_causality(order);
  b.validate();
  return b;
}

}  // namespace coinbox
