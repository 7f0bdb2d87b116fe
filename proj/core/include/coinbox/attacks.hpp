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

#include <array>
#include <optional>

#include "coinbox/resources.hpp"
#include "coinbox/wcf.hpp"

namespace coinbox {

/// Reply of a simulator sitting between the two dishonest-side resources:
/// {bit_a, flag_a, bit_b, flag_b} — the *_a pair answers the alice-side
/// resource, the *_b pair the bob-side one.
using SimReply = std::array<int, 4>;
/// Indexed [shown_alice_side][shown_bob_side].
using SimTable = std::array<std::array<SimReply, 2>, 2>;

/// Simulator box from an explicit reply table. Both replies may depend on
/// both shown coins (the replies sit above both show positions).
CausalBox simulator_from_table(const SimTable& table);

/** The coupling simulator: pass both coins through when they agree; when the
    alice-side coin is 0 and the bob-side coin is 1, forfeit on the alice side
    to force agreement on 1; in the opposite case request 0 on both sides,
    which succeeds with the alice-side flip probability. */
SimTable coupling_sim_table();
CausalBox coupling_simulator();

/// The gluing of dishonest-bob resource, simulator and dishonest-alice
/// resource: the composed system whose outer outputs are (c_A, c_B).
SystemGraph glued_resources(const Rational& z, const Rational& eps, const CausalBox& simulator);

struct AdvantageReport {
  Distribution joint;      // over the two outer coins
  Rational mass00, mass11, discordant;
  Rational agreement_gap;  // Pr[c_A != c_B] == discordant
  Rational d_lower;        // total variation against the honest resource
  Rational delta_lower;    // d_lower / 3
};

/** Runs the coupling simulator between the two resources and checks the
    closed-form masses z(z+eps), 1-z and z(1-z-eps) exactly; throws ClaimError
    on any mismatch. */
AdvantageReport resource_gluing_report(const Rational& z, const Rational& eps);

struct SimulatorSearch {
  Rational best_agreement;
  SimTable witness;
  std::uint64_t tables_scanned = 0;
};

/** Exhaustive maximum of Pr[c_A = c_B] over all 256 deterministic alice-side
    reply tables (bob side answered honestly, the class containing the
    coupling simulator); checks the exact value 1 - z(1-z-eps) and that the
    coupling simulator attains it. */
SimulatorSearch best_simulator_agreement(const Rational& z, const Rational& eps);

/** Two independent instances of a channel protocol glued by AND converters:
    Alice runs role 1 of instance 1 and role 2 of instance 2, and her outer
    coin is the AND of the two instance coins (mirror for Bob). */
struct MuProtocol {
  SystemGraph system;
  std::vector<std::size_t> alice_boxes, bob_boxes;
  Slot coin_a, coin_b;       // the AND outputs
  Rational honest_win;       // honest Pr[coin_a = 0] = 1 - (1-z)^2
  WcfProtocol instance;      // pristine single instance
  std::string prefix1, prefix2;
  std::string alice_msg_out, alice_msg_in;  // instance wire ids (unprefixed)
  std::string bob_msg_out, bob_msg_in;
  Slot coin1_alice, coin2_alice;  // the two alice-side instance coins, mu labels
};

/// Throws NotCombModelError unless the instance is a two-box channel protocol
/// with alternating rounds and exactly one linked wire per direction per box.
MuProtocol build_mu(const WcfProtocol& instance);

struct MitmResult {
  SystemGraph attacked;
  Distribution attacked_coin;          // marginal of the AND output
  Distribution honest_instance_coin;   // single-instance c_A marginal
  Rational attacked_pr1, honest_mu_pr1;
  bool equal;  // attacked AND output == honest single-instance coin, exactly
};

/** Bob replaces his converters by a pair of delay relays, wiring Alice's
    instance-1 box to her own instance-2 box: messages at even rounds are
    delayed into the second instance, odd-round replies back into the first.
    The AND output then reproduces a single honest execution's coin. */
MitmResult mitm_attack(const MuProtocol& m);

/// max over x with Pr[first = x] > 0 of Pr[second = 1 | first = x];
/// nullopt when every conditioning event has probability zero.
std::optional<Rational> conditional_bias(const SystemGraph& system, const Slot& first,
                                         const Slot& second);

}  // namespace coinbox
