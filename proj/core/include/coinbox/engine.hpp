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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coinbox/box.hpp"
#include "coinbox/poset.hpp"
#include "coinbox/rational.hpp"

namespace coinbox {

/// Directed link from an output wire to an input wire of equal alphabet.
struct Link {
  std::string out_wire;
  std::string in_wire;
};

/** Boxes plus links; unlinked wires face the environment. */
struct SystemGraph {
  std::vector<CausalBox> boxes;
  std::vector<Link> links;

  const CausalBox* box_of_wire(const std::string& wire_id) const;
  std::vector<Slot> external_out_slots() const;  // sorted
  std::vector<Slot> external_in_slots() const;   // sorted
  bool is_quantum() const;
};

/// Adds a link after validating direction, alphabet, single use per wire and
/// schedulability of the result. Throws DimensionMismatchError,
/// AlreadyLinkedError or CausalLoopError.
SystemGraph connect(SystemGraph s, const std::string& out_wire, const std::string& in_wire);

/// Union of all box posets. Throws CausalLoopError when incompatible.
Poset merged_poset(const SystemGraph& s);

/** Exact probability distribution over transcripts: assignments of symbol
    values to a fixed, sorted slot list. Probabilities are rationals summing
    to exactly 1. */
struct Distribution {
  std::vector<Slot> slots;
  std::map<std::vector<int>, Rational> probs;

  Rational total() const;
  /// Marginal onto a slot subset (which must exist), slots kept sorted.
  Distribution marginal(const std::vector<Slot>& keep) const;
  /// Probability of slot == value.
  Rational pr(const Slot& slot, int value) const;
  /// Conditional given slot == value; nullopt when the event has mass 0.
  std::optional<Distribution> conditional(const Slot& slot, int value) const;
  /// Renders "wire@pos=v ..." for a transcript row.
  std::string row_str(const std::vector<int>& values) const;
};

/// (1/2) sum |p - q| over a common transcript domain.
/// Throws DomainMismatchError when the slot lists differ.
Rational tv_distance(const Distribution& d1, const Distribution& d2);

struct RunOptions {
  std::map<std::string, int> external_inputs;  // "wire@pos" -> value
  std::vector<Slot> taps;                      // internal slots to expose
  std::uint64_t branch_cap = 10'000'000;       // ExplosionError beyond this
  std::uint64_t schedule_seed = 0;             // 0 = lexicographic schedule
};

/** Runs the system by exact enumeration of every internal message value in
    schedule order; no sampling error. The result is independent of the
    schedule (any topological order yields the same joint). */
Distribution run_exact(const SystemGraph& s, const RunOptions& opts = {});

/// One transcript drawn with a deterministic seeded generator.
std::map<std::string, int> sample(const SystemGraph& s, std::uint64_t seed,
                                  const RunOptions& opts = {});

/// `n` seeded draws at once; keys align with run_exact's transcript rows.
std::map<std::vector<int>, std::uint64_t> sample_many(const SystemGraph& s, std::uint64_t seed,
                                                      std::uint64_t n,
                                                      const RunOptions& opts = {});

}  // namespace coinbox
