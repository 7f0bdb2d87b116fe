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
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coinbox/errors.hpp"

namespace coinbox {

/** Finite partial order over opaque string labels.

    Value-semantic handle to immutable data; copies are cheap. Elements are
    kept sorted lexicographically so every derived artifact (cuts, DOT text,
    linear extensions) is deterministic. At most 64 elements, so subsets are
    uint64_t masks. */
class Poset {
 public:
  Poset();

  /// Builds from labels and cover/order edges. Throws CycleError on a cycle,
  /// UnknownElementError on an edge label outside `elements`.
  static Poset build(const std::vector<std::string>& elements,
                     const std::vector<std::pair<std::string, std::string>>& edges);

  /// Chain a0 < a1 < ... in the given label order.
  static Poset chain(const std::vector<std::string>& elements);

  std::size_t size() const;
  const std::vector<std::string>& labels() const;
  bool contains(const std::string& label) const;
  /// Index of a label; throws UnknownElementError.
  int index_of(const std::string& label) const;
  const std::string& label(int i) const;

  bool leq(int a, int b) const;
  bool less(int a, int b) const;
  bool leq(const std::string& a, const std::string& b) const;

  /// T^{<= t} as a mask.
  std::uint64_t down_mask(int t) const;
  /// Strict past T^{< t}.
  std::uint64_t strict_down_mask(int t) const;
  std::uint64_t full_mask() const;

  bool is_downset(std::uint64_t mask) const;
  /// True iff some element dominates every member of the mask.
  bool is_bounded(std::uint64_t mask) const;

  /// All cuts (downward-closed subsets), ascending as integers.
  std::vector<std::uint64_t> all_cuts() const;

  /// Cover relation (transitive reduction), index pairs sorted.
  std::vector<std::pair<int, int>> cover_pairs() const;

  /// Lexicographically smallest linear extension (indices).
  std::vector<int> linear_extension() const;

  /// Equality as labeled relations.
  bool operator==(const Poset& other) const;
  bool operator!=(const Poset& other) const;

  /// New poset with every label run through `rename`; order unchanged.
  Poset relabeled(const std::map<std::string, std::string>& rename) const;

 private:
  struct Data;
  explicit Poset(std::shared_ptr<const Data> d);
  std::shared_ptr<const Data> d_;
};

/** Downward-closed subset of a poset. */
struct Cut {
  Poset poset;
  std::uint64_t mask = 0;

  bool empty() const { return mask == 0; }
  bool bounded() const { return poset.is_bounded(mask); }
  std::vector<std::string> member_labels() const;
};

/// Downward-closure test used everywhere; throws UnknownElementError.
bool is_cut(const Poset& p, const std::vector<std::string>& subset);
bool is_cut_mask(const Poset& p, std::uint64_t mask);

/// Union of partial orders: transitive closure of the merged relations on the
/// label union. Throws IncompatibleError when the closure has a cycle.
Poset union_posets(const Poset& p1, const Poset& p2);

/// Restriction of a cut of a union to one part (guaranteed a cut of the part).
/// Throws NotASubposetError when `part` is not an induced subposet of `whole`.
Cut restrict_cut(const Poset& whole, const Cut& c, const Poset& part);

/** Cut-lattice map stored by its images on principal cuts and extended by
    union, which makes chi(C u D) = chi(C) u chi(D) hold by construction. */
class CausalityFn {
 public:
  CausalityFn() = default;
  CausalityFn(Poset p, std::vector<std::uint64_t> principal_images);

  const Poset& poset() const { return poset_; }
  std::uint64_t image(std::uint64_t cut_mask) const;
  std::uint64_t principal_image(int t) const { return principal_[std::size_t(t)]; }

 private:
  Poset poset_;
  std::vector<std::uint64_t> principal_;
};

/// chi mapping each principal cut to its strict past: chi(C) = C minus its
/// maximal elements. The default for protocol boxes.
CausalityFn strict_past_causality(const Poset& p);

/// Identity map on cuts; not a valid causality function (fails strict decrease).
CausalityFn identity_causality(const Poset& p);

/// chi(C) = empty for all C.
CausalityFn empty_causality(const Poset& p);

struct CausalityViolation {
  std::string condition;  // "homomorphism" | "monotone" | "decreasing" | "escape"
  std::vector<std::string> witness_cut;
};

struct CausalityReport {
  bool ok = true;
  std::vector<CausalityViolation> violations;
};

/// Exhaustively checks the four causality-function conditions over all cuts.
CausalityReport validate_causality_fn(const Poset& p, const CausalityFn& chi);

/** Partial self-map with t strictly below f(t) everywhere on its domain. */
class DelayFn {
 public:
  DelayFn() = default;
  /// Throws NotAdvancingError unless t < f(t) for every pair.
  DelayFn(Poset p, const std::map<std::string, std::string>& mapping);

  const Poset& poset() const { return poset_; }
  const std::map<int, int>& mapping() const { return map_; }
  std::optional<int> apply(int t) const;

 private:
  Poset poset_;
  std::map<int, int> map_;
};

/// chi_f(C) = union over {t : f(t) in C} of T^{<= t}.
CausalityFn delay_to_causality(const Poset& p, const DelayFn& f);

/// Hasse diagram as DOT text: cover edges only, deterministic ordering.
std::string hasse_dot(const Poset& p, const std::string& graph_name = "hasse");

}  // namespace coinbox
