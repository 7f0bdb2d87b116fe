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
#include "coinbox/global_security.hpp"

#include <algorithm>

namespace coinbox {

bool partition_check(const Poset& p, const Partition& part, std::uint64_t pi_positions,
                     std::uint64_t eta_positions) {
  const std::uint64_t full = p.full_mask();
  if ((part.t1 & part.t2) || (part.t1 & part.t3) || (part.t2 & part.t3) ||
      (part.t1 | part.t2 | part.t3) != full)
    throw NotAPartitionError("partition: blocks must be disjoint and cover the poset");

  auto all_less = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::size_t x = 0; x < p.size(); ++x)
      if (lo >> x & 1)
        for (std::size_t y = 0; y < p.size(); ++y)
          if (hi >> y & 1)
            if (!p.less(int(x), int(y))) return false;
    return true;
  };
  if (!all_less(part.t1, part.t2) || !all_less(part.t2, part.t3) ||
      !all_less(part.t1, part.t3))
    return false;
  if (pi_positions & ~part.t2) return false;
  if (eta_positions & ~(part.t1 | part.t3)) return false;
  return true;
}

std::optional<Partition> find_sequential_partition(const Poset& p, std::uint64_t pi_positions,
                                                   std::uint64_t eta_positions) {
  const std::uint64_t full = p.full_mask();
  auto cuts = p.all_cuts();
  for (std::uint64_t c1 : cuts) {
    for (std::uint64_t c2 : cuts) {
      if ((c1 & ~c2) != 0) continue;  // need c1 subset of c2
      Partition part{c1, c2 & ~c1, full & ~c2};
      if (partition_check(p, part, pi_positions, eta_positions)) return part;
    }
  }
  return std::nullopt;
}

namespace {

struct ScenarioResult {
  Rational max_conditional{-1};
  std::uint64_t strategies = 0;
  std::uint64_t skipped = 0;
};

/// Max over strategies and k-values of Pr[coin == want | K = k].
ScenarioResult scenario_max(const SystemGraph& system, const std::vector<std::size_t>& remove,
                            const Slot& coin, int want, const std::vector<Slot>& k_slots) {
  ScenarioResult res;
  CheatSetup setup = cheat_setup(system, remove);
  AdversaryEnumerator en(setup.iface);
  res.strategies = en.count();

  std::vector<Slot> taps = k_slots;
  taps.push_back(coin);
  for (std::uint64_t i = 0; i < en.count(); ++i) {
    RunOptions opts;
    opts.taps = taps;
    SystemGraph attacked = attach_adversary(setup, en.at(i));
    Distribution full = run_exact(attacked, opts);

    std::vector<Slot> keep = k_slots;
    keep.push_back(coin);
    std::sort(keep.begin(), keep.end());
    Distribution joint = full.marginal(keep);

    // Group rows by the K-part and take the conditional of the coin.
    std::size_t coin_idx =
        std::size_t(std::find(joint.slots.begin(), joint.slots.end(), coin) - joint.slots.begin());
    std::map<std::vector<int>, std::pair<Rational, Rational>> by_k;  // k -> (mass, mass with coin=want)
    for (const auto& [row, pr] : joint.probs) {
      std::vector<int> k;
      for (std::size_t j = 0; j < row.size(); ++j)
        if (j != coin_idx) k.push_back(row[j]);
      auto& cell = by_k[k];
      cell.first += pr;
      if (row[coin_idx] == want) cell.second += pr;
    }
    // Count unreachable K assignments once, for the record.
    if (i == 0 && !k_slots.empty()) {
      std::uint64_t k_space = 1;
      for (const auto& s : k_slots) {
        const CausalBox* b = system.box_of_wire(s.wire);
        k_space *= std::uint64_t(b ? b->find_wire(s.wire)->alphabet : 2);
      }
      res.skipped += k_space - by_k.size();
    }
    for (const auto& [k, cell] : by_k) {
      if (cell.first == 0) continue;
      Rational v = cell.second / cell.first;
      if (v > res.max_conditional) res.max_conditional = v;
    }
  }
  return res;
}

}  // namespace

ConditionalAuditReport conditional_cheat_audit(const ComposedSystem& xi, const WcfParams& params) {
  ConditionalAuditReport report;

  ScenarioResult bob = scenario_max(xi.system, xi.bob_boxes, xi.coin_a, 1, xi.k_alice);
  report.max_given_k_alice = bob.max_conditional;
  report.strategies_bob = bob.strategies;

  ScenarioResult alice = scenario_max(xi.system, xi.alice_boxes, xi.coin_b, 0, xi.k_bob);
  report.max_given_k_bob = alice.max_conditional;
  report.strategies_alice = alice.strategies;

  report.skipped_zero_mass = bob.skipped + alice.skipped;
  report.pass_standalone_roles = report.max_given_k_alice <= 1 - params.z + params.eps &&
                                 report.max_given_k_bob <= params.z + params.eps;
  report.pass_swapped_roles = report.max_given_k_alice <= params.z + params.eps &&
                              report.max_given_k_bob <= 1 - params.z + params.eps;
  return report;
}

ComposedSystem sequential_pair(const WcfProtocol& p) {
  WcfProtocol first = relabel_protocol(p, "e1_");
  WcfProtocol second = relabel_protocol(p, "p2_");

  ComposedSystem xi;
  xi.system.boxes = first.system.boxes;
  const std::size_t off = xi.system.boxes.size();
  xi.system.boxes.insert(xi.system.boxes.end(), second.system.boxes.begin(),
                         second.system.boxes.end());
  xi.system.links = first.system.links;
  xi.system.links.insert(xi.system.links.end(), second.system.links.begin(),
                         second.system.links.end());

  // A wireless box whose order places every first-instance position strictly
  // below every second-instance position.
  {
    Poset m1 = merged_poset(first.system);
    Poset m2 = merged_poset(second.system);
    std::vector<std::string> elems;
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& l : m1.labels()) elems.push_back(l);
    for (const auto& l : m2.labels()) elems.push_back(l);
    for (const auto& a : m1.labels())
      for (const auto& b : m2.labels()) edges.push_back({a, b});
    xi.system.boxes.push_back(bridge_box("sequencer", Poset::build(elems, edges)));
  }

  for (auto i : first.alice_boxes) xi.alice_boxes.push_back(i);
  for (auto i : second.alice_boxes) xi.alice_boxes.push_back(off + i);
  for (auto i : first.bob_boxes) xi.bob_boxes.push_back(i);
  for (auto i : second.bob_boxes) xi.bob_boxes.push_back(off + i);

  xi.coin_a = second.coin_a;
  xi.coin_b = second.coin_b;
  xi.k_alice = {first.coin_a};
  xi.k_bob = {first.coin_b};
  return xi;
}

CompositionDemoReport composition_demo(const WcfProtocol& p, CompositionMode mode) {
  CompositionDemoReport report;
  report.mode = mode;

  if (mode == CompositionMode::sequential) {
    ComposedSystem xi = sequential_pair(p);
    Poset merged = merged_poset(xi.system);
    std::uint64_t pi_pos = 0, eta_pos = 0;
    for (const auto& l : merged.labels()) {
      std::uint64_t bit = std::uint64_t(1) << merged.index_of(l);
      if (l.rfind("p2_", 0) == 0) pi_pos |= bit;
      if (l.rfind("e1_", 0) == 0) eta_pos |= bit;
    }
    report.partition = find_sequential_partition(merged, pi_pos, eta_pos);
    report.partition_found = report.partition.has_value();
    report.audit = conditional_cheat_audit(xi, p.params);
    report.globally_secure = report.audit->pass_standalone_roles;
    return report;
  }

  MuProtocol mu = build_mu(p);
  MitmResult attack = mitm_attack(mu);
  report.attack_conditional = conditional_bias(attack.attacked, mu.coin1_alice, mu.coin2_alice);

  Poset merged = merged_poset(attack.attacked);
  std::uint64_t pi_pos = 0, eta_pos = 0;
  for (const auto& l : merged.labels()) {
    std::uint64_t bit = std::uint64_t(1) << merged.index_of(l);
    if (l.rfind(mu.prefix1, 0) == 0) pi_pos |= bit;
    if (l.rfind(mu.prefix2, 0) == 0) eta_pos |= bit;
  }
  report.partition = find_sequential_partition(merged, pi_pos, eta_pos);
  report.partition_found = report.partition.has_value();
  report.globally_secure =
      report.attack_conditional && *report.attack_conditional <= Rational(1, 2) + p.params.eps;
  return report;
}

}  // namespace coinbox
