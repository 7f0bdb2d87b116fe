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
#include "coinbox/engine.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include "coinbox/quantum.hpp"

namespace coinbox {

const CausalBox* SystemGraph::box_of_wire(const std::string& wire_id) const {
  for (const auto& b : boxes)
    if (b.find_wire(wire_id)) return &b;
  return nullptr;
}

namespace {

std::map<std::string, std::string> link_map(const SystemGraph& s) {
  std::map<std::string, std::string> in_to_out;
  for (const auto& l : s.links) in_to_out[l.in_wire] = l.out_wire;
  return in_to_out;
}

std::set<std::string> linked_out_wires(const SystemGraph& s) {
  std::set<std::string> out;
  for (const auto& l : s.links) out.insert(l.out_wire);
  return out;
}

}  // namespace

std::vector<Slot> SystemGraph::external_out_slots() const {
  auto linked = linked_out_wires(*this);
  std::vector<Slot> out;
  for (const auto& b : boxes)
    for (const auto& w : b.wires)
      if (w.dir == WireDir::out && !linked.count(w.id))
        for (const auto& p : w.positions) out.push_back({w.id, p});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Slot> SystemGraph::external_in_slots() const {
  auto l = link_map(*this);
  std::vector<Slot> out;
  for (const auto& b : boxes)
    for (const auto& w : b.wires)
      if (w.dir == WireDir::in && !l.count(w.id))
        for (const auto& p : w.positions) out.push_back({w.id, p});
  std::sort(out.begin(), out.end());
  return out;
}

bool SystemGraph::is_quantum() const {
  for (const auto& b : boxes)
    if (b.script) return true;
  return false;
}

Poset merged_poset(const SystemGraph& s) {
  Poset acc;
  for (const auto& b : s.boxes) acc = union_posets(acc, b.poset);
  return acc;
}

// ---------------------------------------------------------------------------
// Execution plan
// ---------------------------------------------------------------------------

namespace {

struct Node {
  std::size_t box = 0;
  bool script = false;
  const OutputRule* rule = nullptr;             // classical nodes
  std::size_t step_begin = 0, step_end = 0;     // script nodes: [begin, end] in script order
  std::string pos;                              // production position
  std::vector<Slot> produces;                   // out slots (producer keys)
  std::vector<std::size_t> dep_nodes;           // scheduling edges
  // classical: per rule-dep, the key to read a value from (producer out-slot
  // key or external in-slot key)
  std::vector<std::string> dep_keys;
};

struct Plan {
  std::vector<Node> nodes;          // unordered; `order` gives the schedule
  std::vector<std::size_t> order;
  std::vector<Slot> transcript_slots;
  std::vector<std::string> transcript_keys;  // resolved producer/external keys
  std::map<std::string, std::string> in_to_out;
  Poset merged;
};

struct BoxRuntimeInfo {
  // in-slot -> source key ("wire@pos" of producer out slot, or external key)
  std::map<Slot, std::string> source;
  bool external_source(const Slot& s) const { return external.count(s) > 0; }
  std::set<Slot> external;
};

Plan build_plan(const SystemGraph& s, const std::vector<Slot>& taps,
                std::uint64_t schedule_seed = 0) {
  Plan plan;
  try {
    plan.merged = merged_poset(s);
  } catch (const IncompatibleError& e) {
    throw CausalLoopError(std::string("system: box posets incompatible: ") + e.what());
  }
  plan.in_to_out = link_map(s);

  // Wire ids must be system-unique.
  {
    std::set<std::string> ids;
    for (const auto& b : s.boxes)
      for (const auto& w : b.wires)
        if (!ids.insert(w.id).second)
          throw Error("system: wire id '" + w.id + "' used by more than one box");
  }

  // Where each in-slot takes its value from.
  std::vector<BoxRuntimeInfo> info(s.boxes.size());
  for (std::size_t bi = 0; bi < s.boxes.size(); ++bi) {
    for (const auto& slot : s.boxes[bi].in_slots()) {
      auto it = plan.in_to_out.find(slot.wire);
      if (it == plan.in_to_out.end()) {
        info[bi].external.insert(slot);
        info[bi].source[slot] = slot.str();
      } else {
        info[bi].source[slot] = Slot{it->second, slot.pos}.str();
      }
    }
  }

  // Producer nodes.
  std::map<std::string, std::size_t> producer;  // out-slot key -> node
  for (std::size_t bi = 0; bi < s.boxes.size(); ++bi) {
    const CausalBox& b = s.boxes[bi];
    if (!b.script) {
      for (const auto& rule : b.kernel.rules) {
        Node n;
        n.box = bi;
        n.rule = &rule;
        n.pos = rule.out.pos;
        n.produces = {rule.out};
        producer[rule.out.str()] = plan.nodes.size();
        plan.nodes.push_back(std::move(n));
      }
    } else {
      const auto& steps = b.script->steps;
      std::size_t begin = 0;
      std::size_t prev_node = std::size_t(-1);
      for (std::size_t si = 0; si < steps.size(); ++si) {
        using K = QuantumScript::Step::Kind;
        K k = steps[si].kind;
        if (k != K::emit && k != K::measure_emit && k != K::classical_emit) continue;
        Node n;
        n.box = bi;
        n.script = true;
        n.step_begin = begin;
        n.step_end = si;
        n.pos = steps[si].pos;
        n.produces = {{steps[si].wire, steps[si].pos}};
        if (prev_node != std::size_t(-1)) n.dep_nodes.push_back(prev_node);
        producer[n.produces[0].str()] = plan.nodes.size();
        prev_node = plan.nodes.size();
        plan.nodes.push_back(std::move(n));
        begin = si + 1;
      }
    }
  }

  // Dependency edges.
  for (auto& n : plan.nodes) {
    const CausalBox& b = s.boxes[n.box];
    if (!n.script) {
      auto outs = b.out_slots();
      for (const auto& dep : n.rule->deps) {
        bool own_output = std::find(outs.begin(), outs.end(), dep) != outs.end();
        std::string key = own_output ? dep.str() : info[n.box].source.at(dep);
        n.dep_keys.push_back(key);
        auto it = producer.find(key);
        if (it != producer.end()) {
          n.dep_nodes.push_back(it->second);
        } else if (own_output || !info[n.box].external_source(dep)) {
          throw UnschedulableError("system: no producer for " + key);
        }
      }
    } else {
      const auto& steps = b.script->steps;
      for (std::size_t si = 0; si <= n.step_end; ++si) {
        if (steps[si].kind != QuantumScript::Step::Kind::receive) continue;
        Slot in_slot{steps[si].wire, steps[si].pos};
        std::string key = info[n.box].source.at(in_slot);
        auto it = producer.find(key);
        if (it != producer.end()) {
          // Depending on all earlier receives is safe and keeps windows ordered.
          n.dep_nodes.push_back(it->second);
        } else if (!info[n.box].external_source(in_slot)) {
          throw UnschedulableError("system: no producer for " + key);
        }
        // An unlinked quantum input only fails at run time, when (and if) the
        // register is actually needed; connect() probes half-wired systems.
      }
    }
  }

  // Schedule: Kahn's algorithm; ties broken by the merged linear extension,
  // then the produced wire id. The distribution is schedule-independent; the
  // order only pins byte-identical output.
  std::vector<int> pos_rank(plan.merged.size(), 0);
  {
    auto ext = plan.merged.linear_extension();
    for (std::size_t i = 0; i < ext.size(); ++i) pos_rank[std::size_t(ext[i])] = int(i);
  }
  auto rank_of = [&](const Node& n) {
    return n.pos.empty() ? -1 : pos_rank[std::size_t(plan.merged.index_of(n.pos))];
  };

  std::vector<std::size_t> indeg(plan.nodes.size(), 0);
  std::vector<std::vector<std::size_t>> rdep(plan.nodes.size());
  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    std::set<std::size_t> uniq(plan.nodes[i].dep_nodes.begin(), plan.nodes[i].dep_nodes.end());
    plan.nodes[i].dep_nodes.assign(uniq.begin(), uniq.end());
    indeg[i] = uniq.size();
    for (auto d : uniq) rdep[d].push_back(i);
  }
  std::mt19937_64 shuffle_rng(schedule_seed);
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < plan.nodes.size(); ++i)
    if (indeg[i] == 0) ready.insert(i);
  while (!ready.empty()) {
    std::size_t best;
    if (schedule_seed != 0) {
      // Any topological order of the dependency graph is a valid schedule;
      // a seeded pick lets tests confirm schedule independence.
      auto it = ready.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(shuffle_rng));
      best = *it;
    } else {
      best = *ready.begin();
      for (auto i : ready) {
        auto key_i = std::tuple(rank_of(plan.nodes[i]), plan.nodes[i].produces[0].wire, i);
        auto key_b = std::tuple(rank_of(plan.nodes[best]), plan.nodes[best].produces[0].wire, best);
        if (key_i < key_b) best = i;
      }
    }
    ready.erase(best);
    plan.order.push_back(best);
    for (auto j : rdep[best])
      if (--indeg[j] == 0) ready.insert(j);
  }
  if (plan.order.size() != plan.nodes.size())
    throw CausalLoopError("system: message dependencies contain a cycle");

  // Transcript: external classical out slots plus taps.
  auto linked = linked_out_wires(s);
  for (const auto& b : s.boxes)
    for (const auto& w : b.wires)
      if (w.dir == WireDir::out && !w.quantum && !linked.count(w.id))
        for (const auto& p : w.positions) plan.transcript_slots.push_back({w.id, p});
  for (const auto& t : taps) plan.transcript_slots.push_back(t);
  std::sort(plan.transcript_slots.begin(), plan.transcript_slots.end());
  plan.transcript_slots.erase(
      std::unique(plan.transcript_slots.begin(), plan.transcript_slots.end()),
      plan.transcript_slots.end());
  for (const auto& t : plan.transcript_slots) {
    // A tap may name an in-wire; follow the link to the producer.
    std::string key = t.str();
    const CausalBox* owner = s.box_of_wire(t.wire);
    if (!owner) throw Error("system: transcript slot on unknown wire '" + t.wire + "'");
    const Wire* w = owner->find_wire(t.wire);
    if (w->quantum) throw Error("system: transcript slot " + t.str() + " is quantum");
    if (w->dir == WireDir::in && plan.in_to_out.count(t.wire))
      key = Slot{plan.in_to_out.at(t.wire), t.pos}.str();
    plan.transcript_keys.push_back(key);
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Branch execution
// ---------------------------------------------------------------------------

struct Branch {
  Rational prob{1};
  std::map<std::string, int> vals;                  // classical values by key
  std::map<std::string, int> qmsg;                  // quantum register by key
  QState q;
  std::map<std::pair<std::size_t, int>, int> lreg;  // (box, local id) -> register
};

class Executor {
 public:
  Executor(const SystemGraph& s, const Plan& plan) : s_(s), plan_(plan) {}

  // Expands one node on one branch into 1..k successor branches.
  // `choose` != nullptr switches to sampling: exactly one successor survives.
  template <typename Emit>
  void run_node(const Node& n, Branch& br, Emit&& emit, std::mt19937_64* choose) {
    if (!n.script)
      run_classical(n, br, emit, choose);
    else
      run_script(n, br, emit, choose);
  }

 private:
  template <typename Emit>
  void run_classical(const Node& n, Branch& br, Emit&& emit, std::mt19937_64* choose) {
    std::vector<int> key;
    key.reserve(n.dep_keys.size());
    for (const auto& k : n.dep_keys) {
      auto it = br.vals.find(k);
      if (it == br.vals.end())
        throw UnschedulableError("engine: value for " + k +
                                 " unavailable (missing external input?)");
      key.push_back(it->second);
    }
    const SymbolDist& dist = n.rule->row(key);
    const std::string out_key = n.produces[0].str();
    if (choose) {
      int v = pick(dist.weights, *choose);
      br.vals[out_key] = v;
      emit(std::move(br));
      return;
    }
    for (std::size_t i = 0; i < dist.weights.size(); ++i) {
      Branch nb = i + 1 == dist.weights.size() ? std::move(br) : br;
      nb.vals[out_key] = dist.weights[i].first;
      nb.prob *= dist.weights[i].second;
      emit(std::move(nb));
    }
  }

  template <typename Emit>
  void run_script(const Node& n, Branch& br, Emit&& emit, std::mt19937_64* choose) {
    const CausalBox& box = s_.boxes[n.box];
    const auto& steps = box.script->steps;
    using K = QuantumScript::Step::Kind;

    for (std::size_t si = n.step_begin; si < n.step_end; ++si)
      run_prelude(steps[si], n.box, br);

    const auto& prod = steps[n.step_end];
    const std::string out_key = Slot{prod.wire, prod.pos}.str();
    switch (prod.kind) {
      case K::emit: {
        br.qmsg[out_key] = global_reg(br, n.box, prod.regs[0]);
        emit(std::move(br));
        return;
      }
      case K::classical_emit: {
        std::map<std::string, int> received;
        for (const auto& slot : box.in_slots()) {
          auto it = br.vals.find(source_key(slot));
          if (it != br.vals.end()) received[slot.str()] = it->second;
        }
        br.vals[out_key] = prod.fn(received);
        emit(std::move(br));
        return;
      }
      case K::measure_emit: {
        int reg = global_reg(br, n.box, prod.regs[0]);
        auto weights = br.q.measure_weights(reg);
        QReal total = br.q.norm2();
        if (choose) {
          std::vector<std::pair<int, Rational>> ws;
          for (auto& [v, w] : weights) ws.push_back({v, as_rational(w / total)});
          int v = pick(ws, *choose);
          br.q.project(reg, v);
          br.vals[out_key] = v;
          emit(std::move(br));
          return;
        }
        for (std::size_t i = 0; i < weights.size(); ++i) {
          Branch nb = i + 1 == weights.size() ? std::move(br) : br;
          nb.prob *= as_rational(weights[i].second / total);
          nb.q.project(reg, weights[i].first);
          nb.vals[out_key] = weights[i].first;
          emit(std::move(nb));
        }
        return;
      }
      default:
        throw Error("engine: malformed script node");
    }
  }

  void run_prelude(const QuantumScript::Step& st, std::size_t box_idx, Branch& br) {
    using K = QuantumScript::Step::Kind;
    switch (st.kind) {
      case K::prepare:
        for (std::size_t i = 0; i < st.regs.size(); ++i)
          br.lreg[{box_idx, st.regs[i]}] = br.q.add_register(st.dims[i]);
        return;
      case K::receive: {
        const std::string key = source_key({st.wire, st.pos});
        auto it = br.qmsg.find(key);
        if (it == br.qmsg.end())
          throw UnschedulableError("engine: quantum message " + key + " unavailable");
        br.lreg[{box_idx, st.regs[0]}] = it->second;
        return;
      }
      case K::apply: {
        std::vector<int> regs;
        for (int r : st.regs) regs.push_back(global_reg(br, box_idx, r));
        br.q.apply(st.matrix, regs);
        return;
      }
      default:
        throw Error("engine: production step inside prelude");
    }
  }

  std::string source_key(const Slot& in_slot) const {
    auto it = plan_.in_to_out.find(in_slot.wire);
    if (it == plan_.in_to_out.end()) return in_slot.str();
    return Slot{it->second, in_slot.pos}.str();
  }

  static int global_reg(const Branch& br, std::size_t box_idx, int local) {
    auto it = br.lreg.find({box_idx, local});
    if (it == br.lreg.end()) throw Error("engine: unbound script register");
    return it->second;
  }

  static Rational as_rational(const QReal& q) {
    if (!q.is_rational())
      throw Error("engine: irrational branch probability (outside Q(sqrt2) rationals)");
    return q.a;
  }

  static int pick(const std::vector<std::pair<int, Rational>>& weights, std::mt19937_64& rng) {
    // Draws by exact cumulative comparison against a 64-bit uniform integer.
    const std::uint64_t draw = rng();
    Rational u(draw, std::numeric_limits<std::uint64_t>::max());
    Rational cum(0);
    for (const auto& [v, w] : weights) {
      cum += w;
      if (u < cum) return v;
    }
    return weights.back().first;
  }

  const SystemGraph& s_;
  const Plan& plan_;
};

void seed_external_inputs(const RunOptions& opts, Branch& br) {
  for (const auto& [key, value] : opts.external_inputs) br.vals[key] = value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

SystemGraph connect(SystemGraph s, const std::string& out_wire, const std::string& in_wire) {
  const CausalBox* ob = s.box_of_wire(out_wire);
  const CausalBox* ib = s.box_of_wire(in_wire);
  if (!ob || !ib) throw Error("connect: unknown wire");
  const Wire* ow = ob->find_wire(out_wire);
  const Wire* iw = ib->find_wire(in_wire);
  if (ow->dir != WireDir::out || iw->dir != WireDir::in)
    throw Error("connect: links go from an output wire to an input wire");
  if (ow->alphabet != iw->alphabet || ow->quantum != iw->quantum)
    throw DimensionMismatchError("connect: '" + out_wire + "' and '" + in_wire +
                                 "' have different dimension");
  for (const auto& l : s.links) {
    if (l.in_wire == in_wire) throw AlreadyLinkedError("connect: '" + in_wire + "' already linked");
    if (l.out_wire == out_wire)
      throw AlreadyLinkedError("connect: '" + out_wire + "' already linked");
  }
  std::set<std::string> in_pos(iw->positions.begin(), iw->positions.end());
  for (const auto& p : ow->positions)
    if (!in_pos.count(p))
      throw DimensionMismatchError("connect: '" + in_wire + "' does not accept position " + p);

  s.links.push_back({out_wire, in_wire});
  build_plan(s, {});  // throws CausalLoopError/UnschedulableError when invalid
  return s;
}

Rational Distribution::total() const {
  Rational t(0);
  for (const auto& [row, p] : probs) t += p;
  return t;
}

Distribution Distribution::marginal(const std::vector<Slot>& keep) const {
  std::vector<std::size_t> idx;
  for (const auto& k : keep) {
    auto it = std::find(slots.begin(), slots.end(), k);
    if (it == slots.end()) throw DomainMismatchError("marginal: slot " + k.str() + " absent");
    idx.push_back(std::size_t(it - slots.begin()));
  }
  Distribution out;
  out.slots = keep;
  // keep slots sorted for canonical form
  std::vector<std::size_t> order(idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.slots[a] < out.slots[b]; });
  std::sort(out.slots.begin(), out.slots.end());
  for (const auto& [row, p] : probs) {
    std::vector<int> kept(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) kept[i] = row[idx[order[i]]];
    out.probs[kept] += p;
  }
  return out;
}

Rational Distribution::pr(const Slot& slot, int value) const {
  auto it = std::find(slots.begin(), slots.end(), slot);
  if (it == slots.end()) throw DomainMismatchError("pr: slot " + slot.str() + " absent");
  std::size_t i = std::size_t(it - slots.begin());
  Rational t(0);
  for (const auto& [row, p] : probs)
    if (row[i] == value) t += p;
  return t;
}

std::optional<Distribution> Distribution::conditional(const Slot& slot, int value) const {
  auto it = std::find(slots.begin(), slots.end(), slot);
  if (it == slots.end()) throw DomainMismatchError("conditional: slot " + slot.str() + " absent");
  std::size_t i = std::size_t(it - slots.begin());
  Rational mass(0);
  for (const auto& [row, p] : probs)
    if (row[i] == value) mass += p;
  if (mass == 0) return std::nullopt;
  Distribution out;
  out.slots = slots;
  for (const auto& [row, p] : probs)
    if (row[i] == value) out.probs[row] = p / mass;
  return out;
}

std::string Distribution::row_str(const std::vector<int>& values) const {
  std::string s;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) s += " ";
    s += slots[i].str() + "=" + std::to_string(values[i]);
  }
  return s;
}

Rational tv_distance(const Distribution& d1, const Distribution& d2) {
  if (d1.slots != d2.slots) throw DomainMismatchError("tv_distance: transcript domains differ");
  Rational acc(0);
  auto it1 = d1.probs.begin();
  auto it2 = d2.probs.begin();
  while (it1 != d1.probs.end() || it2 != d2.probs.end()) {
    if (it2 == d2.probs.end() || (it1 != d1.probs.end() && it1->first < it2->first)) {
      acc += it1->second;
      ++it1;
    } else if (it1 == d1.probs.end() || it2->first < it1->first) {
      acc += it2->second;
      ++it2;
    } else {
      acc += abs(it1->second - it2->second);
      ++it1;
      ++it2;
    }
  }
  return acc / 2;
}

Distribution run_exact(const SystemGraph& s, const RunOptions& opts) {
  for (const auto& b : s.boxes) b.validate();
  Plan plan = build_plan(s, opts.taps, opts.schedule_seed);
  Executor ex(s, plan);

  std::vector<Branch> branches(1);
  seed_external_inputs(opts, branches[0]);
  std::uint64_t created = 1;

  for (std::size_t oi = 0; oi < plan.order.size(); ++oi) {
    const Node& n = plan.nodes[plan.order[oi]];
    std::vector<Branch> next;
    next.reserve(branches.size());
    for (auto& br : branches) {
      ex.run_node(n, br, [&](Branch&& nb) {
        if (++created > opts.branch_cap)
          throw ExplosionError("run_exact: branch cap " + std::to_string(opts.branch_cap) +
                               " exceeded");
        if (nb.prob != 0) next.push_back(std::move(nb));
      }, nullptr);
    }
    branches = std::move(next);
  }

  Distribution dist;
  dist.slots = plan.transcript_slots;
  for (const auto& br : branches) {
    std::vector<int> row;
    row.reserve(plan.transcript_keys.size());
    for (const auto& key : plan.transcript_keys) {
      auto it = br.vals.find(key);
      if (it == br.vals.end())
        throw Error("run_exact: transcript value " + key + " was never produced");
      row.push_back(it->second);
    }
    dist.probs[row] += br.prob;
  }
  if (dist.total() != 1)
    throw Error("run_exact: probabilities sum to " + fraction_str(dist.total()) + ", not 1");
  return dist;
}

std::map<std::string, int> sample(const SystemGraph& s, std::uint64_t seed,
                                  const RunOptions& opts) {
  for (const auto& b : s.boxes) b.validate();
  Plan plan = build_plan(s, opts.taps, opts.schedule_seed);
  Executor ex(s, plan);
  std::mt19937_64 rng(seed);

  Branch br;
  seed_external_inputs(opts, br);
  for (std::size_t oi = 0; oi < plan.order.size(); ++oi) {
    const Node& n = plan.nodes[plan.order[oi]];
    Branch current = std::move(br);
    bool emitted = false;
    ex.run_node(n, current, [&](Branch&& nb) {
      br = std::move(nb);
      emitted = true;
    }, &rng);
    if (!emitted) throw Error("sample: node produced no outcome");
  }

  std::map<std::string, int> out;
  for (std::size_t i = 0; i < plan.transcript_slots.size(); ++i)
    out[plan.transcript_slots[i].str()] = br.vals.at(plan.transcript_keys[i]);
  return out;
}

std::map<std::vector<int>, std::uint64_t> sample_many(const SystemGraph& s, std::uint64_t seed,
                                                      std::uint64_t n, const RunOptions& opts) {
  for (const auto& b : s.boxes) b.validate();
  Plan plan = build_plan(s, opts.taps, opts.schedule_seed);
  Executor ex(s, plan);
  std::mt19937_64 rng(seed);

  std::map<std::vector<int>, std::uint64_t> counts;
  for (std::uint64_t k = 0; k < n; ++k) {
    Branch br;
    seed_external_inputs(opts, br);
    for (std::size_t oi = 0; oi < plan.order.size(); ++oi) {
      Branch current = std::move(br);
      ex.run_node(plan.nodes[plan.order[oi]], current, [&](Branch&& nb) { br = std::move(nb); },
                  &rng);
    }
    std::vector<int> row;
    row.reserve(plan.transcript_keys.size());
    for (const auto& key : plan.transcript_keys) row.push_back(br.vals.at(key));
    ++counts[row];
  }
  return counts;
}

}  // namespace coinbox
