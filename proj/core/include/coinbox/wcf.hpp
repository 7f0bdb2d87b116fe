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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinbox/engine.hpp"
#include "coinbox/rational.hpp"

namespace coinbox {

struct WcfParams {
  Rational z{0}, eps{0};

  WcfParams() = default;
  /// Throws ParamRangeError unless 0 <= eps <= z <= 1/2.
  WcfParams(Rational z_, Rational eps_);
};

/** A weak coin-flipping protocol: Alice's and Bob's converter boxes wired
    through their inner interfaces, with two outer coin wires. Resource-backed
    protocols additionally route through middle boxes that no party controls
    (and that a cheating party therefore cannot replace). */
struct WcfProtocol {
  SystemGraph system;  // the honest execution graph
  std::vector<std::size_t> alice_boxes, bob_boxes, middle_boxes;
  Slot coin_a, coin_b;
  WcfParams params;
};

enum class Party { alice, bob };

/// One step of an adversary-side interface in schedule order. `sends` marks a
/// decision point; otherwise the adversary merely observes the value.
struct AdversarySlot {
  Slot slot;
  bool sends = false;
  int alphabet = 2;
  bool quantum = false;
  std::vector<std::size_t> visible;  // indices of observation slots strictly before this one
};

/** A deterministic decision tree over an adversary interface: for every
    decision point, a total table from the observations causally before it to
    the symbol sent. */
struct AdversaryStrategy {
  std::vector<std::vector<int>> tables;  // tables[k][obs_code] = symbol
  std::uint64_t index = 0;               // position in enumeration order
};

/** Exhaustive, duplicate-free enumeration of deterministic strategies in a
    fixed order (mixed-radix counting over all table entries). */
class AdversaryEnumerator {
 public:
  AdversaryEnumerator(std::vector<AdversarySlot> iface, std::uint64_t cap = 1u << 22);

  const std::vector<AdversarySlot>& interface_slots() const { return iface_; }
  std::uint64_t count() const { return count_; }
  AdversaryStrategy at(std::uint64_t index) const;

 private:
  std::vector<AdversarySlot> iface_;
  std::vector<std::size_t> decisions_;      // indices into iface_
  std::vector<std::uint64_t> table_sizes_;  // observation-space size per decision
  std::uint64_t count_ = 1;
};

/** The protocol with one party's boxes removed: what a cheating converter
    faces. `iface` lists the dangling interface in schedule order. */
struct CheatSetup {
  SystemGraph remnant;
  Poset merged;  // of the original honest system
  std::vector<AdversarySlot> iface;
};

CheatSetup cheat_setup(const SystemGraph& system, const std::vector<std::size_t>& remove_boxes);
CheatSetup cheat_setup(const WcfProtocol& p, Party party);

/// Builds the deterministic converter box realizing a strategy and returns
/// the composed (attacked) system.
SystemGraph attach_adversary(const CheatSetup& setup, const AdversaryStrategy& strategy);

/// Exact joint distribution of (c_A, c_B) under the honest composition.
Distribution honest_distribution(const WcfProtocol& p);

struct CheatResult {
  Rational value;
  AdversaryStrategy witness;
  std::uint64_t strategies_scanned = 0;
};

/// Maximum over all deterministic converters of Pr[c_B = 0] when Alice
/// cheats; ties broken by enumeration order. Deterministic strategies attain
/// the supremum over mixtures (the objective is linear in the mixture).
CheatResult best_cheat_alice(const WcfProtocol& p);
/// Mirror: maximum of Pr[c_A = 1] when Bob cheats.
CheatResult best_cheat_bob(const WcfProtocol& p);

struct SecurityReport {
  Distribution honest;
  Rational p_star_alice, p_star_bob;
  AdversaryStrategy witness_alice, witness_bob;
  bool s1_ok = false, s2_ok = false, s3_ok = false;
  int rounds = 0;
  /// Set for quantum-kernel protocols: the classical strategy class is
  /// exhaustive only for classical boxes, so cheat values are lower bounds.
  bool classical_bound_only = false;

  bool all_ok() const { return s1_ok && s2_ok && s3_ok; }
};

/// Full stand-alone audit: honest distribution exactly (z, 1-z) on agreeing
/// coins, and both cheat maxima within z+eps / 1-z+eps.
SecurityReport verify_standalone(const WcfProtocol& p);

/// Alternating message rounds on the adversary-side inner interface (Alice's
/// side). Throws NotCombModelError when a position mixes directions or the
/// directions fail to alternate.
int interaction_rounds(const WcfProtocol& p);
int interaction_rounds(const WcfProtocol& p, Party party);

// --- toy protocol family ----------------------------------------------------

/// Alice samples the coin with Pr[0] = z and announces it; maximally insecure
/// against Alice, intcom 1.
WcfProtocol trivial_announce(const Rational& z);

/// Mirror image: Bob samples and announces; Alice has no moves.
WcfProtocol bob_announce(const Rational& z);

/** Resource-backed protocol with exact cheat caps: a middle box samples the
    master coin, shows it to each party, and grants each side's flip request
    with exactly the probability that makes the caps z+eps_a and 1-z+eps_b
    tight. The honest path never engages the caps. */
WcfProtocol cheat_capped(const Rational& z, const Rational& eps);
WcfProtocol cheat_capped(const Rational& z, const Rational& eps_a, const Rational& eps_b);

/** Channel-based comb protocol with three alternating message rounds:
    Alice sends a, Bob replies b, Alice echoes a again; both coins are a XOR b
    (balanced when either bit is uniform). `dist_a`/`dist_b` override the
    honest samplers, point masses giving a deterministic instance. */
WcfProtocol xor_echo_protocol();
WcfProtocol xor_echo_protocol(const SymbolDist& dist_a, const SymbolDist& dist_b);

/// Quantum twin of xor_echo_protocol: Alice shares one half of an entangled
/// pair in round 1; rounds 2 and 3 carry fresh dummy qubits; both coins are
/// computational-basis measurements of the pair (perfectly correlated, fair).
WcfProtocol entangled_pair_protocol();

/// Deep-copies a protocol with every position label and wire id renamed by
/// prefix; used to lay independent instances side by side.
WcfProtocol relabel_protocol(const WcfProtocol& p, const std::string& prefix);

/// Box with no wires whose poset orders existing positions; composing it into
/// a system adds scheduling constraints without touching behavior.
CausalBox bridge_box(const std::string& name, const Poset& order);

}  // namespace coinbox
