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

#include <optional>

#include "coinbox/attacks.hpp"
#include "coinbox/wcf.hpp"

namespace coinbox {

/// Three-block split of a poset: everything in t1 strictly precedes
/// everything in t2, which strictly precedes everything in t3.
struct Partition {
  std::uint64_t t1 = 0, t2 = 0, t3 = 0;
};

/// True iff the blocks are disjoint, cover the poset, are totally ordered
/// block against block, the protocol touches only t2 and the bystander only
/// t1 and t3. Throws NotAPartitionError when the blocks are no partition.
bool partition_check(const Poset& p, const Partition& part, std::uint64_t pi_positions,
                     std::uint64_t eta_positions);

/// Exhaustive search for a partition passing partition_check (t1 and t1|t2
/// range over cuts); nullopt when none exists.
std::optional<Partition> find_sequential_partition(const Poset& p, std::uint64_t pi_positions,
                                                   std::uint64_t eta_positions);

/** A WCF protocol composed with a bystander protocol eta whose outer outputs
    K are classical. The audit conditions the protocol coins on every K value
    under every deterministic adversary on the composed inner interface. */
struct ComposedSystem {
  SystemGraph system;
  std::vector<std::size_t> alice_boxes, bob_boxes;  // across pi and eta
  Slot coin_a, coin_b;                              // the audited protocol's coins
  std::vector<Slot> k_alice, k_bob;                 // eta's side outputs per party
};

struct ConditionalAuditReport {
  // Cheating Bob: max over strategies and k of Pr[c_A = 1 | K_A = k].
  Rational max_given_k_alice{-1};
  // Cheating Alice: max over strategies and k of Pr[c_B = 0 | K_B = k].
  Rational max_given_k_bob{-1};
  std::uint64_t strategies_alice = 0, strategies_bob = 0;
  std::uint64_t skipped_zero_mass = 0;  // conditioning events of probability 0
  // Verdicts under both readings of the caps; the first follows the
  // stand-alone roles (Pr[c_A=1|..] <= 1-z+eps, Pr[c_B=0|..] <= z+eps).
  bool pass_standalone_roles = false;
  bool pass_swapped_roles = false;
};

ConditionalAuditReport conditional_cheat_audit(const ComposedSystem& xi, const WcfParams& params);

/// Two instances of a protocol laid strictly one after the other: the first
/// instance is the bystander, its coins the side outputs K.
ComposedSystem sequential_pair(const WcfProtocol& p);

enum class CompositionMode { sequential, interleaved };

struct CompositionDemoReport {
  CompositionMode mode;
  bool partition_found = false;
  std::optional<Partition> partition;
  // sequential mode: the audit result; interleaved mode: the delayed-relay
  // attack's conditional bias instead (no strategy search needed).
  std::optional<ConditionalAuditReport> audit;
  std::optional<Rational> attack_conditional;
  bool globally_secure = false;
};

/** Sequential mode lays two instances end to end and shows the conditional
    audit passes with a valid partition; interleaved mode builds the delayed
    relay counterexample, where the conditional bias reaches 1 and no valid
    partition exists. */
CompositionDemoReport composition_demo(const WcfProtocol& p, CompositionMode mode);

}  // namespace coinbox
