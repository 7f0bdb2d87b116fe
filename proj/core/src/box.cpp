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
#include "coinbox/box.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "coinbox/quantum.hpp"

namespace coinbox {

Rational SymbolDist::total() const {
  Rational t(0);
  for (const auto& [v, p] : weights) t += p;
  return t;
}

const SymbolDist& OutputRule::row(const std::vector<int>& key) const {
  auto it = rows.find(key);
  if (it == rows.end())
    throw Error("kernel: missing row for output " + out.str());
  return it->second;
}

const Wire* CausalBox::find_wire(const std::string& id) const {
  for (const auto& w : wires)
    if (w.id == id) return &w;
  return nullptr;
}

namespace {
std::vector<Slot> slots_of(const CausalBox& b, WireDir dir) {
  std::vector<Slot> out;
  for (const auto& w : b.wires)
    if (w.dir == dir)
      for (const auto& p : w.positions) out.push_back({w.id, p});
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

std::vector<Slot> CausalBox::in_slots() const { return slots_of(*this, WireDir::in); }
std::vector<Slot> CausalBox::out_slots() const { return slots_of(*this, WireDir::out); }

void CausalBox::validate() const {
  std::set<std::string> seen_wires;
  for (const auto& w : wires) {
    if (!seen_wires.insert(w.id).second)
      throw Error("box " + name + ": duplicate wire id '" + w.id + "'");
    if (w.alphabet < 1) throw Error("box " + name + ": wire '" + w.id + "' alphabet < 1");
    if (w.positions.empty()) throw Error("box " + name + ": wire '" + w.id + "' has no positions");
    std::set<std::string> seen_pos;
    for (const auto& p : w.positions) {
      poset.index_of(p);  // throws UnknownElementError
      if (!seen_pos.insert(p).second)
        throw Error("box " + name + ": wire '" + w.id + "' repeats position " + p);
    }
  }

  if (script) return;  // script boxes carry their own structure

  auto outs = out_slots();
  auto ins = in_slots();
  std::set<Slot> out_set(outs.begin(), outs.end());
  std::set<Slot> in_set(ins.begin(), ins.end());

  std::set<Slot> ruled;
  for (const auto& rule : kernel.rules) {
    if (!out_set.count(rule.out))
      throw Error("box " + name + ": rule for unknown output slot " + rule.out.str());
    if (!ruled.insert(rule.out).second)
      throw Error("box " + name + ": duplicate rule for " + rule.out.str());

    const int out_pos = poset.index_of(rule.out.pos);
    const std::uint64_t visible = chi.image(poset.down_mask(out_pos));
    std::vector<int> dep_alpha;
    for (const auto& dep : rule.deps) {
      const Wire* w = find_wire(dep.wire);
      if (!w) throw Error("box " + name + ": rule dep on unknown wire '" + dep.wire + "'");
      dep_alpha.push_back(w->alphabet);
      if (in_set.count(dep)) {
        const int q = poset.index_of(dep.pos);
        if (!(visible >> q & 1))
          throw CausalLoopError("box " + name + ": output " + rule.out.str() +
                                " reads input " + dep.str() + " outside chi of its past");
      } else if (!out_set.count(dep)) {
        throw Error("box " + name + ": rule dep " + dep.str() + " is no slot of this box");
      }
    }

    // Rows must cover the full dep assignment space and each sum to 1.
    std::size_t expect = 1;
    for (int a : dep_alpha) expect *= std::size_t(a);
    if (rule.rows.size() != expect)
      throw Error("box " + name + ": rule " + rule.out.str() + " has " +
                  std::to_string(rule.rows.size()) + " rows, expected " + std::to_string(expect));
    for (const auto& [key, dist] : rule.rows) {
      if (key.size() != rule.deps.size())
        throw Error("box " + name + ": row key arity mismatch at " + rule.out.str());
      if (dist.total() != 1)
        throw Error("box " + name + ": row at " + rule.out.str() + " does not sum to 1");
      const Wire* ow = find_wire(rule.out.wire);
      for (const auto& [v, p] : dist.weights) {
        if (v < 0 || v >= ow->alphabet)
          throw Error("box " + name + ": symbol out of alphabet at " + rule.out.str());
        if (p < 0) throw Error("box " + name + ": negative probability at " + rule.out.str());
      }
    }
  }
  for (const auto& s : outs)
    if (!ruled.count(s)) throw Error("box " + name + ": no rule for output slot " + s.str());

  // Own-output dependencies must be acyclic.
  std::map<Slot, std::vector<Slot>> own_deps;
  for (const auto& rule : kernel.rules)
    for (const auto& dep : rule.deps)
      if (out_set.count(dep)) own_deps[rule.out].push_back(dep);
  std::map<Slot, int> state;  // 0 new, 1 visiting, 2 done
  std::function<void(const Slot&)> visit = [&](const Slot& s) {
    int& st = state[s];
    if (st == 1) throw CausalLoopError("box " + name + ": cyclic rule dependencies");
    if (st == 2) return;
    st = 1;
    for (const auto& d : own_deps[s]) visit(d);
    st = 2;
  };
  for (const auto& s : outs) visit(s);
}

CausalBox make_box(std::string name, Poset poset, std::vector<Wire> wires, Kernel kernel) {
  CausalBox b;
  b.name = std::move(name);
  b.chi = strict_past_causality(poset);
  b.poset = std::move(poset);
  b.wires = std::move(wires);
  b.kernel = std::move(kernel);
  b.validate();
  return b;
}

CausalBox parallel(const CausalBox& a, const CausalBox& b) {
  for (const auto& wa : a.wires)
    if (b.find_wire(wa.id))
      throw Error("parallel: wire id '" + wa.id + "' appears in both boxes");

  CausalBox out;
  out.name = a.name + "||" + b.name;
  out.poset = union_posets(a.poset, b.poset);
  out.wires = a.wires;
  out.wires.insert(out.wires.end(), b.wires.begin(), b.wires.end());

  // chi(C) = chi_a(C ^ T_a) u chi_b(C ^ T_b), lifted to the union.
  std::vector<std::uint64_t> img(out.poset.size(), 0);
  auto lift = [&](const CausalBox& part) {
    for (std::size_t t = 0; t < part.poset.size(); ++t) {
      const int ut = out.poset.index_of(part.poset.label(int(t)));
      std::uint64_t pimg = part.chi.principal_image(int(t));
      for (std::size_t s = 0; s < part.poset.size(); ++s)
        if (pimg >> s & 1)
          img[std::size_t(ut)] |= std::uint64_t(1) << out.poset.index_of(part.poset.label(int(s)));
    }
  };
  lift(a);
  lift(b);
  out.chi = CausalityFn(out.poset, std::move(img));

  if (a.script || b.script)
    throw Error("parallel: script boxes compose at the system level, not by kernel product");
  out.kernel.rules = a.kernel.rules;
  out.kernel.rules.insert(out.kernel.rules.end(), b.kernel.rules.begin(), b.kernel.rules.end());
  out.validate();
  return out;
}

CausalBox delay_box(const std::string& name, const DelayFn& f, int alphabet,
                    const std::string& in_wire, const std::string& out_wire, bool quantum) {
  const Poset& p = f.poset();
  Wire win{in_wire, WireDir::in, alphabet, quantum, {}};
  Wire wout{out_wire, WireDir::out, alphabet, quantum, {}};
  for (const auto& [t, ft] : f.mapping()) {
    win.positions.push_back(p.label(t));
    wout.positions.push_back(p.label(ft));
  }
  if (win.positions.empty())
    throw Error("delay box '" + name + "': empty-domain delay carries no positions");

  CausalBox b;
  b.name = name;
  b.poset = p;
  b.wires = {win, wout};
  b.chi = delay_to_causality(p, f);

  if (quantum) {
    auto script = std::make_shared<QuantumScript>();
    int reg = 0;
    for (const auto& [t, ft] : f.mapping()) {
      script->steps.push_back(QuantumScript::receive(in_wire, p.label(t), reg));
      script->steps.push_back(QuantumScript::emit(out_wire, p.label(ft), reg));
      ++reg;
    }
    b.script = script;
  } else {
    for (const auto& [t, ft] : f.mapping()) {
      OutputRule rule;
      rule.out = {out_wire, p.label(ft)};
      rule.deps = {{in_wire, p.label(t)}};
      for (int v = 0; v < alphabet; ++v) rule.rows[{v}] = SymbolDist::point(v);
      b.kernel.rules.push_back(std::move(rule));
    }
  }
  b.validate();
  return b;
}

bool causal_audit(const CausalBox& box, std::size_t branch_cap) {
  if (box.script) throw Error("causal_audit: classical kernels only");
  auto ins = box.in_slots();
  auto outs = box.out_slots();

  std::vector<int> in_alpha;
  std::size_t in_space = 1;
  for (const auto& s : ins) {
    in_alpha.push_back(box.find_wire(s.wire)->alphabet);
    in_space *= std::size_t(in_alpha.back());
    if (in_space > branch_cap) throw ExplosionError("causal_audit: input space too large");
  }

  // Joint over outputs for one full input assignment, by rule product in an
  // order that respects own-output dependencies.
  std::vector<const OutputRule*> order;
  {
    std::set<Slot> done;
    while (order.size() < box.kernel.rules.size()) {
      bool progressed = false;
      for (const auto& r : box.kernel.rules) {
        if (done.count(r.out)) continue;
        bool ready = true;
        for (const auto& d : r.deps)
          if (std::find(outs.begin(), outs.end(), d) != outs.end() && !done.count(d)) ready = false;
        if (ready) {
          order.push_back(&r);
          done.insert(r.out);
          progressed = true;
        }
      }
      if (!progressed) throw CausalLoopError("causal_audit: cyclic rules");
    }
  }

  auto joint_for = [&](const std::map<Slot, int>& in_vals) {
    std::map<std::vector<int>, Rational> joint;  // values aligned with `outs`
    struct Frame {
      std::map<Slot, int> vals;
      Rational p;
    };
    std::vector<Frame> frames{{{}, Rational(1)}};
    for (const auto* rule : order) {
      std::vector<Frame> next;
      for (auto& fr : frames) {
        std::vector<int> key;
        for (const auto& d : rule->deps) {
          auto it = fr.vals.find(d);
          key.push_back(it != fr.vals.end() ? it->second : in_vals.at(d));
        }
        for (const auto& [v, pw] : rule->row(key).weights) {
          Frame nf = fr;
          nf.vals[rule->out] = v;
          nf.p *= pw;
          next.push_back(std::move(nf));
        }
        if (next.size() > branch_cap) throw ExplosionError("causal_audit: branch cap");
      }
      frames = std::move(next);
    }
    for (const auto& fr : frames) {
      std::vector<int> row;
      for (const auto& s : outs) row.push_back(fr.vals.at(s));
      joint[row] += fr.p;
    }
    return joint;
  };

  auto marginal_on = [&](const std::map<std::vector<int>, Rational>& joint, std::uint64_t cut) {
    std::map<std::vector<int>, Rational> m;
    for (const auto& [row, p] : joint) {
      std::vector<int> kept;
      for (std::size_t i = 0; i < outs.size(); ++i)
        if (cut >> box.poset.index_of(outs[i].pos) & 1) kept.push_back(row[i]);
      m[kept] += p;
    }
    return m;
  };

  std::vector<std::map<Slot, int>> in_assignments;
  for (std::size_t code = 0; code < in_space; ++code) {
    std::map<Slot, int> vals;
    std::size_t c = code;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      vals[ins[i]] = int(c % std::size_t(in_alpha[i]));
      c /= std::size_t(in_alpha[i]);
    }
    in_assignments.push_back(std::move(vals));
  }
  std::vector<std::map<std::vector<int>, Rational>> joints;
  joints.reserve(in_assignments.size());
  for (const auto& iv : in_assignments) joints.push_back(joint_for(iv));

  for (std::uint64_t cut : box.poset.all_cuts()) {
    const std::uint64_t visible = box.chi.image(cut);
    for (std::size_t i = 0; i < in_assignments.size(); ++i)
      for (std::size_t j = i + 1; j < in_assignments.size(); ++j) {
        bool agree = true;
        for (const auto& s : ins) {
          if (visible >> box.poset.index_of(s.pos) & 1)
            if (in_assignments[i].at(s) != in_assignments[j].at(s)) agree = false;
        }
        if (!agree) continue;
        if (marginal_on(joints[i], cut) != marginal_on(joints[j], cut)) return false;
      }
  }
  return true;
}

}  // namespace coinbox
