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

#include "coinbox/engine.hpp"
#include "coinbox/wcf.hpp"

namespace coinbox {

/** The three behaviors of the unbalanced WCF resource: honest (one shared
    coin), dishonest-Alice (she sees the coin early and gets a bounded flip),
    and dishonest-Bob (mirror). Wire names follow the roles:

    honest    : coin_a @ t_a (left), coin_b @ t_b (right)
    alice side: show   @ tp0 (left out), reply_bit/reply_flag @ tp1 (left in),
                coin_b @ t_b (right out)
    bob side  : show   @ tq0 (right out), reply_bit/reply_flag @ tq1 (right in),
                coin_a @ t_a (left out)

    A raised flag forfeits (coin forced against the cheater); otherwise the
    coin flips to the requested bit with probability eps/(1-z) on Alice's side
    and eps/z on Bob's (0 when eps = 0). */
CausalBox wcf_resource_honest(const Rational& z);
CausalBox wcf_resource_dishonest_alice(const Rational& z, const Rational& eps);
CausalBox wcf_resource_dishonest_bob(const Rational& z, const Rational& eps);

/// Test hook: dishonest-Alice resource with an arbitrary flip probability in
/// place of eps/(1-z); used to exhibit audit failures.
CausalBox wcf_resource_dishonest_alice_flip(const Rational& z, const Rational& flip);

struct FullyExpressingReport {
  bool honest_ok = false;       // condition 1: exact (z, 1-z) on agreeing coins
  Rational max_alice_cheat;     // condition 2 maximum of Pr[c_B = 0]
  Rational max_bob_cheat;       // condition 3 maximum of Pr[c_A = 1]
  bool alice_capped = false;    // max <= z + eps
  bool bob_capped = false;      // max <= 1 - z + eps
  bool ok() const { return honest_ok && alice_capped && bob_capped; }
};

/// Audits a resource triple against the honest distribution and both cheat
/// caps by exhaustive adversary enumeration.
FullyExpressingReport fully_expressing_audit(const CausalBox& honest,
                                             const CausalBox& dishonest_alice,
                                             const CausalBox& dishonest_bob,
                                             const WcfParams& params);

/** Turns a resource pair into a protocol: Alice's box is the dishonest-Bob
    resource, Bob's box is the glue chain attached to the dishonest-Alice
    resource. The glue boxes bridge the two adversary-side interfaces; wiring
    is positional (first glue talks to Alice's box, last to the resource). */
WcfProtocol resource_to_protocol(const CausalBox& dishonest_bob,
                                 const std::vector<CausalBox>& glue,
                                 const CausalBox& dishonest_alice, const WcfParams& params,
                                 const std::vector<Link>& links);

/// The canonical glue: echoes each resource's shown coin straight back with a
/// lowered flag, making both resources behave honestly.
CausalBox passthrough_glue(const Rational& z, const Rational& eps);

}  // namespace coinbox
