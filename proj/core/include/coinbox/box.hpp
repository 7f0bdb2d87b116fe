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
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coinbox/poset.hpp"
#include "coinbox/rational.hpp"

namespace coinbox {

struct QuantumScript;  // quantum.hpp

enum class WireDir { in, out };

/** A named channel carrying at most one message per declared position.
    `alphabet` is the classical symbol count, or the Hilbert dimension when
    `quantum` is set. */
struct Wire {
  std::string id;
  WireDir dir = WireDir::in;
  int alphabet = 2;
  bool quantum = false;
  std::vector<std::string> positions;
};

/// A (wire, position) pair; the unit a message occupies.
struct Slot {
  std::string wire;
  std::string pos;

  auto operator<=>(const Slot&) const = default;
  std::string str() const { return wire + "@" + pos; }
};

/// Sparse distribution over symbol values; weights must sum to exactly 1.
struct SymbolDist {
  std::vector<std::pair<int, Rational>> weights;

  static SymbolDist point(int v) { return {{{v, Rational(1)}}}; }
  static SymbolDist bernoulli_zero(const Rational& p0) {
    // Pr[0] = p0, Pr[1] = 1 - p0; degenerate masses dropped.
    SymbolDist d;
    if (p0 > 0) d.weights.push_back({0, p0});
    if (p0 < 1) d.weights.push_back({1, Rational(1) - p0});
    return d;
  }
  Rational total() const;
};

/** One conditional table: the symbol emitted at `out`, given values at `deps`.
    Deps may be the box's own input slots (at chi-visible positions only) or
    its own earlier output slots (internal-memory correlation). */
struct OutputRule {
  Slot out;
  std::vector<Slot> deps;
  std::map<std::vector<int>, SymbolDist> rows;

  const SymbolDist& row(const std::vector<int>& key) const;
};

/// The box behavior at its maximal cut; smaller cuts arise by marginalization.
struct Kernel {
  std::vector<OutputRule> rules;
};

/** A message-processing system on wires with positions drawn from a poset.
    Classical boxes carry a Kernel; quantum ones a step script. */
struct CausalBox {
  std::string name;
  Poset poset;
  std::vector<Wire> wires;
  CausalityFn chi;
  Kernel kernel;
  std::shared_ptr<const QuantumScript> script;

  const Wire* find_wire(const std::string& id) const;
  std::vector<Slot> in_slots() const;
  std::vector<Slot> out_slots() const;
  bool is_quantum() const { return script != nullptr; }

  /// Structural checks: positions exist, one rule per output slot, rows
  /// complete and summing to 1, input deps chi-visible. Throws on failure
  /// (CausalLoopError when a rule reads an input that is not causally prior).
  void validate() const;
};

/// Box builder with strict-past causality, the default for protocol boxes.
CausalBox make_box(std::string name, Poset poset, std::vector<Wire> wires, Kernel kernel);

/** Parallel composition on the union poset; each kernel reads only its own
    part. Wire ids must not clash. Throws IncompatibleError when the poset
    union fails. */
CausalBox parallel(const CausalBox& a, const CausalBox& b);

/** Relay moving each message at t to f(t), value unchanged. Works for
    classical and quantum wires alike (a quantum message is relocated, not
    touched). */
CausalBox delay_box(const std::string& name, const DelayFn& f, int alphabet,
                    const std::string& in_wire, const std::string& out_wire,
                    bool quantum = false);

/** Exhaustive causality audit: for every cut C of the box poset and every
    pair of input assignments agreeing on chi(C), the output marginal on C
    must be identical. Intended for boxes with few positions. */
bool causal_audit(const CausalBox& box, std::size_t branch_cap = 1u << 20);

}  // namespace coinbox
