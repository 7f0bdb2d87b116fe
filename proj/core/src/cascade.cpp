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
#include "coinbox/cascade.hpp"

#include <functional>

#include "coinbox/errors.hpp"

namespace coinbox {

DyadicProb::DyadicProb(const std::string& bits) {
  if (bits.empty()) throw ParamRangeError("dyadic: empty bit string");
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParamRangeError("dyadic: invalid character in '" + bits + "'");
    bits_.push_back(c - '0');
  }
  if (bits_.back() != 1)
    throw ParamRangeError("dyadic: '" + bits + "' has a trailing zero; use the canonical form");
  if (value() > Rational(1, 2))
    throw ParamRangeError("dyadic: value " + fraction_str(value()) + " above 1/2");
}

Rational DyadicProb::value() const {
  Rational v(0);
  Rational w(1, 2);
  for (int b : bits_) {
    if (b) v += w;
    w /= 2;
  }
  return v;
}

std::vector<int> DyadicProb::ones_positions() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (bits_[std::size_t(i)] == 1) out.push_back(i + 1);
  return out;
}

std::vector<int> DyadicProb::zeros_positions() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (bits_[std::size_t(i)] == 0) out.push_back(i + 1);
  return out;
}

std::string DyadicProb::str() const {
  std::string s;
  for (int b : bits_) s += char('0' + b);
  return s;
}

int cascade_select(const std::vector<int>& bits, const std::vector<int>& outcomes) {
  if (outcomes.size() != bits.size())
    throw LengthMismatchError("cascade: " + std::to_string(outcomes.size()) + " outcomes for " +
                              std::to_string(bits.size()) + " rounds");
  std::size_t i = 0;
  while (i + 1 < bits.size()) {
    if (outcomes[i] != bits[i]) break;
    ++i;
  }
  return outcomes[i];
}

int cascade_select(const DyadicProb& z, const std::vector<int>& outcomes) {
  return cascade_select(z.bits(), outcomes);
}

std::map<int, Rational> honest_cascade_distribution(const DyadicProb& z) {
  std::map<int, Rational> dist{{0, Rational(0)}, {1, Rational(0)}};
  const int n = z.n();
  const Rational w(1, std::int64_t(1) << n);
  for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
    std::vector<int> outcomes(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) outcomes[std::size_t(i)] = int(code >> i & 1);
    dist[cascade_select(z, outcomes)] += w;
  }
  if (dist[0] != z.value())
    throw ClaimError("cascade: honest Pr[0] = " + fraction_str(dist[0]) + ", expected " +
                     fraction_str(z.value()));
  return dist;
}

Rational alice_bound_formula(const DyadicProb& z, const Rational& eps) {
  const Rational hi = Rational(1, 2) + eps, lo = Rational(1, 2) - eps;
  Rational sum(0);
  int i = 1;
  for (int a : z.ones_positions()) {
    Rational term(1);
    for (int k = 0; k < a - i + 1; ++k) term *= hi;
    for (int k = 0; k < i - 1; ++k) term *= lo;
    sum += term;
    ++i;
  }
  return sum;
}

Rational bob_bound_formula(const DyadicProb& z, const Rational& eps) {
  const Rational hi = Rational(1, 2) + eps, lo = Rational(1, 2) - eps;
  Rational sum(0);
  int i = 1;
  for (int a : z.zeros_positions()) {
    Rational term(1);
    for (int k = 0; k < a - i + 1; ++k) term *= hi;
    for (int k = 0; k < i - 1; ++k) term *= lo;
    sum += term;
    ++i;
  }
  // The never-deviating run: all ones positions matched at probability hi,
  // all zeros at lo, and the final outcome equals b_n = 1, a Bob win.
  Rational tail(1);
  for (std::size_t k = 0; k < z.ones_positions().size(); ++k) tail *= hi;
  for (std::size_t k = 0; k < z.zeros_positions().size(); ++k) tail *= lo;
  return sum + tail;
}

Rational best_cascade_cheat(const DyadicProb& z, const Rational& eps, CascadeParty party) {
  const int want = party == CascadeParty::alice ? 0 : 1;
  const Rational hi = Rational(1, 2) + eps, lo = Rational(1, 2) - eps;
  // Once the outcomes deviate from the bit string the coin is fixed, so only
  // the matching prefix carries a decision: V(i) = value after matching b_1..b_i.
  std::function<Rational(int)> value = [&](int i) -> Rational {
    if (i == z.n() - 1) return hi;  // last round: push the final outcome to the cap
    const int b = z.bits()[std::size_t(i)];
    const Rational v_match = value(i + 1);
    const Rational v_dev = (1 - b) == want ? Rational(1) : Rational(0);
    // The conditional is linear in Pr[C=0], so an endpoint is optimal; both
    // endpoints put Pr[match] in {lo, hi} whatever b is.
    const Rational cand1 = hi * v_match + (1 - hi) * v_dev;
    const Rational cand2 = lo * v_match + (1 - lo) * v_dev;
    return cand1 > cand2 ? cand1 : cand2;
  };
  return value(0);
}

Rational best_cascade_cheat_tree(const DyadicProb& z, const Rational& eps, CascadeParty party) {
  const int want = party == CascadeParty::alice ? 0 : 1;
  const Rational hi = Rational(1, 2) + eps, lo = Rational(1, 2) - eps;
  // Full prefix tree; every reachable prefix gets its own capped conditional.
  std::function<Rational(std::vector<int>&)> value = [&](std::vector<int>& prefix) -> Rational {
    const int i = int(prefix.size());
    // A deviation before the last round fixes the coin.
    for (int j = 0; j + 1 < z.n() && j < i; ++j)
      if (prefix[std::size_t(j)] != z.bits()[std::size_t(j)])
        return prefix[std::size_t(j)] == want ? Rational(1) : Rational(0);
    if (i == z.n()) return cascade_select(z, prefix) == want ? Rational(1) : Rational(0);
    prefix.push_back(0);
    Rational v0 = value(prefix);
    prefix.back() = 1;
    Rational v1 = value(prefix);
    prefix.pop_back();
    Rational best(-1);
    for (const Rational& p0 : {lo, hi}) {
      Rational v = p0 * v0 + (1 - p0) * v1;
      if (v > best) best = v;
    }
    return best;
  };
  std::vector<int> prefix;
  return value(prefix);
}

CascadeBiasReport cascade_bias_report(const DyadicProb& z, const Rational& eps) {
  if (eps < 0 || eps > Rational(1, 2)) throw ParamRangeError("cascade: eps outside [0, 1/2]");
  CascadeBiasReport r;
  r.alice_win_max = best_cascade_cheat(z, eps, CascadeParty::alice);
  r.bob_win_max = best_cascade_cheat(z, eps, CascadeParty::bob);
  r.formula_alice = alice_bound_formula(z, eps);
  r.formula_bob = bob_bound_formula(z, eps);
  if (r.alice_win_max != r.formula_alice)
    throw ClaimError("cascade: Alice DP " + fraction_str(r.alice_win_max) +
                     " differs from the closed form " + fraction_str(r.formula_alice));
  if (r.bob_win_max != r.formula_bob)
    throw ClaimError("cascade: Bob DP " + fraction_str(r.bob_win_max) +
                     " differs from the closed form " + fraction_str(r.formula_bob));
  r.eps_prime_alice = r.alice_win_max - z.value();
  r.eps_prime_bob = r.bob_win_max - (1 - z.value());
  r.eps_prime = std::max(r.eps_prime_alice, r.eps_prime_bob);
  r.margin = 2 * eps + 10 * eps * eps;
  r.within_margin = r.eps_prime <= r.margin;
  if (!r.within_margin)
    throw ClaimError("cascade: excess bias " + fraction_str(r.eps_prime) + " above the margin " +
                     fraction_str(r.margin));
  return r;
}

std::vector<DyadicProb> all_dyadics_up_to(int max_n) {
  std::vector<DyadicProb> out;
  for (int n = 1; n <= max_n; ++n) {
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
      std::string bits;
      for (int i = n - 1; i >= 0; --i) bits += char('0' + (code >> i & 1));
      if (bits.back() != '1') continue;
      Rational v(0), w(1, 2);
      for (char c : bits) {
        if (c == '1') v += w;
        w /= 2;
      }
      if (v > Rational(1, 2)) continue;
      out.emplace_back(bits);
    }
  }
  return out;
}

}  // namespace coinbox
