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
#include <string>
#include <vector>

#include "coinbox/rational.hpp"

namespace coinbox {

/** A dyadic probability z = 0.b1 b2 ... bn in binary, the target of the
    unbalanced cascade. Canonical form only: bn = 1 (a trailing zero would
    change the selection program's output distribution), value in (0, 1/2]. */
class DyadicProb {
 public:
  /// Parses a bit string like "011". Throws ParamRangeError on an empty
  /// string, a non-bit character, a trailing zero or a value above 1/2.
  explicit DyadicProb(const std::string& bits);

  const std::vector<int>& bits() const { return bits_; }
  int n() const { return int(bits_.size()); }
  Rational value() const;                       // sum b_i 2^-i
  std::vector<int> ones_positions() const;      // 1-based indices with b_i = 1
  std::vector<int> zeros_positions() const;
  std::string str() const;

 private:
  std::vector<int> bits_;
};

/// The cascade selection program: scan outcomes while they match the bits,
/// stop at the first deviation or the last round; the coin is the outcome at
/// the stopping index. Throws LengthMismatchError. The raw form runs the
/// program on any bit pattern; the cascade itself only consumes canonical
/// dyadics.
int cascade_select(const std::vector<int>& bits, const std::vector<int>& outcomes);
int cascade_select(const DyadicProb& z, const std::vector<int>& outcomes);

/// Distribution of the selected coin over all 2^n fair outcome sequences,
/// by explicit enumeration; checks Pr[coin = 0] == z exactly (ClaimError).
std::map<int, Rational> honest_cascade_distribution(const DyadicProb& z);

/// Closed form for a cheating Alice: sum over ones positions a_i of
/// (1/2+eps)^(a_i-i+1) (1/2-eps)^(i-1).
Rational alice_bound_formula(const DyadicProb& z, const Rational& eps);

/// Mirror for Bob over the zeros positions, plus the all-match term
/// (1/2+eps)^|I| (1/2-eps)^|I'| for the run that never deviates (the last
/// round's outcome 1 also makes Bob win, since bn = 1).
Rational bob_bound_formula(const DyadicProb& z, const Rational& eps);

enum class CascadeParty { alice, bob };

/** Optimal cheat value within the per-round conditional cap: dynamic program
    over outcome prefixes where each conditional Pr[C_i = 0 | prefix] ranges
    over [1/2-eps, 1/2+eps]. */
Rational best_cascade_cheat(const DyadicProb& z, const Rational& eps, CascadeParty party);

/** Fully general oracle for small n: exhaustive search over strategy trees
    that pick an arbitrary capped conditional at every reachable prefix
    (endpoints suffice by linearity, both endpoints tried at every node). */
Rational best_cascade_cheat_tree(const DyadicProb& z, const Rational& eps, CascadeParty party);

struct CascadeBiasReport {
  Rational alice_win_max, bob_win_max;
  Rational formula_alice, formula_bob;
  Rational eps_prime_alice, eps_prime_bob, eps_prime;
  Rational margin;        // 2 eps + 10 eps^2
  bool within_margin = false;
  Rational ratio_num() const { return eps_prime; }  // eps'/eps printed by callers
};

/// DP cheat values, closed forms, and the excess bias eps' = max side excess;
/// checks DP == closed form exactly and eps' <= 2 eps + 10 eps^2 (ClaimError).
CascadeBiasReport cascade_bias_report(const DyadicProb& z, const Rational& eps);

/// All canonical dyadic bit strings with n <= max_n, lexicographic per length.
std::vector<DyadicProb> all_dyadics_up_to(int max_n);

}  // namespace coinbox
