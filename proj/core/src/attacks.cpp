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
#include "coinbox/attacks.hpp"

#include <algorithm>
#include <set>

#include "coinbox/parallel.hpp"

namespace coinbox {

CausalBox simulator_from_table(const SimTable& table) {
  Poset p = Poset::build({"tp0", "tp1", "tq0", "tq1"},
                         {{"tq0", "tp1"}, {"tp0", "tp1"}, {"tq0", "tq1"}, {"tp0", "tq1"}});
  CausalBox sim;
  sim.name = "sim";
  sim.poset = p;
  sim.chi = strict_past_causality(p);
  sim.wires = {{"sg_show_a", WireDir::in, 2, false, {"tp0"}},
               {"sg_bit_a", WireDir::out, 2, false, {"tp1"}},
               {"sg_flag_a", WireDir::out, 2, false, {"tp1"}},
               {"sg_show_b", WireDir::in, 2, false, {"tq0"}},
               {"sg_bit_b", WireDir::out, 2, false, {"tq1"}},
               {"sg_flag_b", WireDir::out, 2, false, {"tq1"}}};

  const Slot show_a{"sg_show_a", "tp0"}, show_b{"sg_show_b", "tq0"};
  struct Out {
    Slot slot;
    int field;
  };
  const std::vector<Out> outs = {{{"sg_bit_a", "tp1"}, 0},
                                 {{"sg_flag_a", "tp1"}, 1},
                                 {{"sg_bit_b", "tq1"}, 2},
                                 {{"sg_flag_b", "tq1"}, 3}};
  for (const auto& o : outs) {
    OutputRule r;
    r.out = o.slot;
    r.deps = {show_a, show_b};
    for (int cp = 0; cp < 2; ++cp)
      for (int cq = 0; cq < 2; ++cq)
        r.rows[{cp, cq}] = SymbolDist::point(table[std::size_t(cp)][std::size_t(cq)][std::size_t(o.field)]);
    sim.kernel.rules.push_back(std::move(r));
  }
  sim.validate();
  return sim;
}

SimTable coupling_sim_table() {
  SimTable t{};
  // [shown_alice cp][shown_bob cq] -> {bit_a, flag_a, bit_b, flag_b}
  t[0][0] = {0, 0, 0, 0};  // agree: pass through
  t[1][1] = {1, 0, 1, 0};
  t[0][1] = {0, 1, 1, 0};  // forfeit alice side, agree on 1
  t[1][0] = {0, 0, 0, 0};  // request 0 on both sides
  return t;
}

CausalBox coupling_simulator() { return simulator_from_table(coupling_sim_table()); }

SystemGraph glued_resources(const Rational& z, const Rational& eps, const CausalBox& simulator) {
  SystemGraph sys{{wcf_resource_dishonest_bob(z, eps), simulator,
                   wcf_resource_dishonest_alice(z, eps)},
                  {}};
  for (auto [o, i] : std::initializer_list<std::pair<const char*, const char*>>{
           {"sb_show", "sg_show_b"},
           {"sg_bit_b", "sb_bit"},
           {"sg_flag_b", "sb_flag"},
           {"sa_show", "sg_show_a"},
           {"sg_bit_a", "sa_bit"},
           {"sg_flag_a", "sa_flag"}})
    sys = connect(std::move(sys), o, i);
  return sys;
}

namespace {

struct Masses {
  Rational m00, m11, discordant;
};

Masses masses_of(const Distribution& joint) {
  Masses m{Rational(0), Rational(0), Rational(0)};
  for (const auto& [row, p] : joint.probs) {
    if (row[0] == 0 && row[1] == 0)
      m.m00 += p;
    else if (row[0] == 1 && row[1] == 1)
      m.m11 += p;
    else
      m.discordant += p;
  }
  return m;
}

Distribution honest_pair_on(const std::vector<Slot>& slots, const Rational& z) {
  Distribution d;
  d.slots = slots;
  if (z > 0) d.probs[{0, 0}] = z;
  if (z < 1) d.probs[{1, 1}] = 1 - z;
  return d;
}

}  // namespace

AdvantageReport resource_gluing_report(const Rational& z, const Rational& eps) {
  SystemGraph sys = glued_resources(z, eps, coupling_simulator());
  AdvantageReport r;
  r.joint = run_exact(sys);
  Masses m = masses_of(r.joint);
  r.mass00 = m.m00;
  r.mass11 = m.m11;
  r.discordant = m.discordant;
  r.agreement_gap = m.discordant;
  r.d_lower = tv_distance(r.joint, honest_pair_on(r.joint.slots, z));
  r.delta_lower = r.d_lower / 3;

  const Rational want00 = z * (z + eps);
  const Rational want11 = 1 - z;
  const Rational want_disc = z * (1 - z - eps);
  if (r.mass00 != want00 || r.mass11 != want11 || r.discordant != want_disc)
    throw ClaimError("gluing attack: joint masses " + fraction_str(r.mass00) + ", " +
                     fraction_str(r.mass11) + ", " + fraction_str(r.discordant) +
                     " differ from " + fraction_str(want00) + ", " + fraction_str(want11) +
                     ", " + fraction_str(want_disc));
  return r;
}

SimulatorSearch best_simulator_agreement(const Rational& z, const Rational& eps) {
  // Alice-side reply tables: one of 4 (bit, flag) pairs per shown pair.
  auto table_at = [](std::uint64_t idx) {
    SimTable t{};
    for (int cp = 0; cp < 2; ++cp)
      for (int cq = 0; cq < 2; ++cq) {
        int choice = int(idx % 4);
        idx /= 4;
        t[std::size_t(cp)][std::size_t(cq)] = {choice & 1, choice >> 1, cq, 0};
      }
    return t;
  };

  struct Best {
    Rational value{-1};
    std::uint64_t index = 0;
  };
  auto eval = [&](std::uint64_t lo, std::uint64_t hi) {
    Best best;
    for (std::uint64_t i = lo; i < hi; ++i) {
      Distribution joint = run_exact(glued_resources(z, eps, simulator_from_table(table_at(i))));
      Masses m = masses_of(joint);
      Rational agree = m.m00 + m.m11;
      if (agree > best.value) best = {agree, i};
    }
    return best;
  };
  Best best = parallel_chunks<Best>(
      256, thread_count(), Best{}, eval,
      [](Best acc, Best b) {
        if (b.value > acc.value || (b.value == acc.value && acc.value >= 0 && b.index < acc.index))
          return b;
        return acc;
      });

  SimulatorSearch out;
  out.best_agreement = best.value;
  out.witness = table_at(best.index);
  out.tables_scanned = 256;

  const Rational want = 1 - z * (1 - z - eps);
  if (out.best_agreement != want)
    throw ClaimError("simulator search: best agreement " + fraction_str(out.best_agreement) +
                     " differs from " + fraction_str(want));
  Masses explicit_m = masses_of(run_exact(glued_resources(z, eps, coupling_simulator())));
  if (explicit_m.m00 + explicit_m.m11 != want)
    throw ClaimError("simulator search: the coupling simulator does not attain the maximum");
  return out;
}

// ---------------------------------------------------------------------------
// Parallel composition and the delay attack
// ---------------------------------------------------------------------------

namespace {

/// The single linked wire of `box` in the given direction.
std::string linked_wire(const SystemGraph& sys, const CausalBox& box, WireDir dir) {
  std::set<std::string> linked;
  for (const auto& l : sys.links) {
    linked.insert(l.out_wire);
    linked.insert(l.in_wire);
  }
  std::vector<std::string> hits;
  for (const auto& w : box.wires)
    if (w.dir == dir && linked.count(w.id)) hits.push_back(w.id);
  if (hits.size() != 1)
    throw NotCombModelError("mu construction: box " + box.name + " must have exactly one linked " +
                            (dir == WireDir::out ? "output" : "input") + " wire");
  return hits[0];
}

CausalBox and_converter(const std::string& name, const Slot& in1, const Slot& in2,
                        const Slot& out) {
  Poset p = Poset::build({in1.pos, in2.pos, out.pos}, {{in1.pos, out.pos}, {in2.pos, out.pos}});
  CausalBox eta;
  eta.name = name;
  eta.poset = p;
  eta.chi = strict_past_causality(p);
  eta.wires = {{in1.wire, WireDir::in, 2, false, {in1.pos}},
               {in2.wire, WireDir::in, 2, false, {in2.pos}},
               {out.wire, WireDir::out, 2, false, {out.pos}}};
  OutputRule r;
  r.out = out;
  r.deps = {in1, in2};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) r.rows[{a, b}] = SymbolDist::point(a & b);
  eta.kernel.rules = {std::move(r)};
  eta.validate();
  return eta;
}

}  // namespace

MuProtocol build_mu(const WcfProtocol& instance) {
  if (instance.alice_boxes.size() != 1 || instance.bob_boxes.size() != 1 ||
      !instance.middle_boxes.empty())
    throw NotCombModelError("mu construction: instance must be a two-box channel protocol");
  interaction_rounds(instance);  // throws NotCombModelError unless rounds alternate

  MuProtocol mu;
  mu.instance = instance;
  mu.prefix1 = "i1_";
  mu.prefix2 = "i2_";
  const CausalBox& ab = instance.system.boxes[instance.alice_boxes[0]];
  const CausalBox& bb = instance.system.boxes[instance.bob_boxes[0]];
  mu.alice_msg_out = linked_wire(instance.system, ab, WireDir::out);
  mu.alice_msg_in = linked_wire(instance.system, ab, WireDir::in);
  mu.bob_msg_out = linked_wire(instance.system, bb, WireDir::out);
  mu.bob_msg_in = linked_wire(instance.system, bb, WireDir::in);

  WcfProtocol one = relabel_protocol(instance, mu.prefix1);
  WcfProtocol two = relabel_protocol(instance, mu.prefix2);

  mu.system.boxes = one.system.boxes;
  mu.system.boxes.insert(mu.system.boxes.end(), two.system.boxes.begin(), two.system.boxes.end());
  mu.system.links = one.system.links;
  mu.system.links.insert(mu.system.links.end(), two.system.links.begin(),
                         two.system.links.end());
  const std::size_t off = one.system.boxes.size();

  mu.coin1_alice = one.coin_a;
  mu.coin2_alice = two.coin_b;  // Alice runs role 2 in the second instance
  mu.coin_a = {"mu_coin_a", "zz_ta"};
  mu.coin_b = {"mu_coin_b", "zz_tb"};

  CausalBox eta_a = and_converter("eta_a", {"eta_a_in1", one.coin_a.pos},
                                  {"eta_a_in2", two.coin_b.pos}, mu.coin_a);
  CausalBox eta_b = and_converter("eta_b", {"eta_b_in1", one.coin_b.pos},
                                  {"eta_b_in2", two.coin_a.pos}, mu.coin_b);
  const std::size_t eta_a_idx = mu.system.boxes.size();
  mu.system.boxes.push_back(eta_a);
  const std::size_t eta_b_idx = mu.system.boxes.size();
  mu.system.boxes.push_back(eta_b);

  mu.system.links.push_back({one.coin_a.wire, "eta_a_in1"});
  mu.system.links.push_back({two.coin_b.wire, "eta_a_in2"});
  mu.system.links.push_back({one.coin_b.wire, "eta_b_in1"});
  mu.system.links.push_back({two.coin_a.wire, "eta_b_in2"});

  mu.alice_boxes = {instance.alice_boxes[0], off + instance.bob_boxes[0], eta_a_idx};
  mu.bob_boxes = {instance.bob_boxes[0], off + instance.alice_boxes[0], eta_b_idx};

  const Rational z = instance.params.z;
  mu.honest_win = 1 - (1 - z) * (1 - z);
  run_exact(mu.system);  // sanity: the composition is schedulable
  return mu;
}

MitmResult mitm_attack(const MuProtocol& m) {
  const WcfProtocol& inst = m.instance;
  const CausalBox& ab = inst.system.boxes[inst.alice_boxes[0]];
  const CausalBox& bb = inst.system.boxes[inst.bob_boxes[0]];
  const Wire* a_out = ab.find_wire(m.alice_msg_out);
  const Wire* b_out = bb.find_wire(m.bob_msg_out);

  // Delay functions over the pair posets: even-round messages move from the
  // first instance to the second, odd-round replies come back.
  auto pair_delay = [&](const std::string& name, const Wire& w, const std::string& from,
                        const std::string& to) {
    std::vector<std::string> elems;
    std::vector<std::pair<std::string, std::string>> edges;
    std::map<std::string, std::string> mapping;
    for (const auto& pos : w.positions) {
      elems.push_back(from + pos);
      elems.push_back(to + pos);
      edges.push_back({from + pos, to + pos});
      mapping[from + pos] = to + pos;
    }
    DelayFn f(Poset::build(elems, edges), mapping);
    return delay_box(name, f, w.alphabet, name + "_in", name + "_out", w.quantum);
  };
  CausalBox theta1 = pair_delay("theta1", *a_out, m.prefix1, m.prefix2);
  CausalBox theta2 = pair_delay("theta2", *b_out, m.prefix2, m.prefix1);

  // Alice keeps her two boxes and the AND converter; Bob's side is replaced
  // by the delay pair.
  std::set<std::size_t> keep(m.alice_boxes.begin(), m.alice_boxes.end());
  MitmResult out;
  std::set<std::string> kept_wires;
  for (auto bi : keep) {
    out.attacked.boxes.push_back(m.system.boxes[bi]);
    for (const auto& w : m.system.boxes[bi].wires) kept_wires.insert(w.id);
  }
  out.attacked.boxes.push_back(theta1);
  out.attacked.boxes.push_back(theta2);
  for (const auto& l : m.system.links)
    if (kept_wires.count(l.out_wire) && kept_wires.count(l.in_wire))
      out.attacked.links.push_back(l);

  out.attacked.links.push_back({m.prefix1 + m.alice_msg_out, "theta1_in"});
  out.attacked.links.push_back({"theta1_out", m.prefix2 + m.bob_msg_in});
  out.attacked.links.push_back({m.prefix2 + m.bob_msg_out, "theta2_in"});
  out.attacked.links.push_back({"theta2_out", m.prefix1 + m.alice_msg_in});

  out.attacked_coin = run_exact(out.attacked).marginal({m.coin_a});
  out.honest_instance_coin = run_exact(inst.system).marginal({inst.coin_a});
  out.attacked_pr1 = out.attacked_coin.pr(m.coin_a, 1);
  out.honest_mu_pr1 = run_exact(m.system).pr(m.coin_a, 1);

  // Value-level equality of the two single-coin distributions.
  out.equal = true;
  for (int v = 0; v < 2; ++v)
    if (out.attacked_coin.pr(m.coin_a, v) != out.honest_instance_coin.pr(inst.coin_a, v))
      out.equal = false;
  return out;
}

std::optional<Rational> conditional_bias(const SystemGraph& system, const Slot& first,
                                         const Slot& second) {
  RunOptions opts;
  opts.taps = {first, second};
  Distribution joint = run_exact(system, opts).marginal({std::min(first, second),
                                                         std::max(first, second)});
  std::optional<Rational> best;
  for (int x = 0; x < 2; ++x) {
    auto cond = joint.conditional(first, x);
    if (!cond) continue;
    Rational v = cond->pr(second, 1);
    if (!best || v > *best) best = v;
  }
  return best;
}

}  // namespace coinbox
