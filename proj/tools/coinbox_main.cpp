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
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coinbox/attacks.hpp"
#include "coinbox/cascade.hpp"
#include "coinbox/global_security.hpp"
#include "coinbox/json_io.hpp"
#include "coinbox/resources.hpp"
#include "coinbox/wcf.hpp"

using namespace coinbox;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimMismatch = 1;  // a checked closed-form value failed
constexpr int kExitUsage = 2;

std::uint64_t seed_from_env(std::uint64_t flag_seed, bool flag_set) {
  if (flag_set) return flag_seed;
  if (const char* env = std::getenv("SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_atomic(path, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// "z", "z/4" and plain fractions; relative tokens scale the given z.
Rational parse_eps_token(const std::string& token, const Rational& z) {
  if (token == "z") return z;
  if (token.rfind("z/", 0) == 0) return z / parse_fraction(token.substr(2));
  return parse_fraction(token);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }
};

std::string dec(const Rational& r) {
  std::ostringstream os;
  os.precision(12);
  os << to_double(r);
  return os.str();
}

WcfProtocol builtin_protocol(const std::string& name, const Rational& z, const Rational& eps) {
  if (name == "trivial_announce") return trivial_announce(z);
  if (name == "bob_announce") return bob_announce(z);
  if (name == "cheat_capped") return cheat_capped(z, eps);
  if (name == "xor_echo") return xor_echo_protocol();
  if (name == "entangled_pair") return entangled_pair_protocol();
  throw FormatError("unknown builtin protocol '" + name + "'");
}

WcfProtocol load_protocol(const std::string& spec, const Rational& z, const Rational& eps) {
  if (spec.rfind("builtin:", 0) == 0) return builtin_protocol(spec.substr(8), z, eps);
  return protocol_from_json(Json::parse(read_text(spec)));
}

Json report_json(const SecurityReport& r) {
  Json j;
  j["honest"] = distribution_to_json(r.honest);
  j["p_star_alice"] = rational_to_json(r.p_star_alice);
  j["p_star_bob"] = rational_to_json(r.p_star_bob);
  j["s1_ok"] = r.s1_ok;
  j["s2_ok"] = r.s2_ok;
  j["s3_ok"] = r.s3_ok;
  j["rounds"] = r.rounds;
  j["classical_bound_only"] = r.classical_bound_only;
  return j;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"exact simulator and security analyzer for two-party coin flipping "
               "over causal boxes"};
  app.require_subcommand(1);
  app.fallthrough();  // --output/--csv/--seed may follow the subcommand

  std::string out_path, csv_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--output", out_path, "output file ('-' for stdout)")->capture_default_str();
  app.add_option("--csv", csv_path, "CSV output file");
  auto* seed_opt = app.add_option("--seed", seed, "sampling seed (or env SEED)");

  // ---- poset ---------------------------------------------------------------
  auto* poset_cmd = app.add_subcommand("poset", "inspect a poset descriptor, export DOT");
  std::string poset_input, poset_dot;
  bool poset_cuts = false;
  poset_cmd->add_option("--input", poset_input, "poset descriptor JSON")->required();
  poset_cmd->add_option("--dot", poset_dot, "write the Hasse diagram in DOT format");
  poset_cmd->add_flag("--cuts", poset_cuts, "list all cuts");

  // ---- engine --------------------------------------------------------------
  auto* engine_cmd = app.add_subcommand("engine", "run a system graph exactly (or sample it)");
  std::string engine_system;
  std::uint64_t engine_samples = 0;
  engine_cmd->add_option("--system", engine_system, "system graph JSON")->required();
  engine_cmd->add_option("--sample", engine_samples, "draw N seeded samples instead");

  // ---- standalone ----------------------------------------------------------
  auto* sa_cmd = app.add_subcommand("standalone", "stand-alone security audit of a protocol");
  std::string sa_protocol = "builtin:cheat_capped";
  std::string sa_z = "1/2", sa_eps = "0", sa_emit;
  sa_cmd->add_option("--protocol", sa_protocol, "builtin:<name> or protocol JSON path");
  sa_cmd->add_option("--z", sa_z, "target z as p/q");
  sa_cmd->add_option("--eps", sa_eps, "bias cap as p/q");
  sa_cmd->add_option("--emit", sa_emit, "also write the protocol itself as JSON");

  // ---- resource ------------------------------------------------------------
  auto* res_cmd = app.add_subcommand("resource", "ideal resource triple");
  res_cmd->require_subcommand(1);
  auto* res_make = res_cmd->add_subcommand("make", "emit the triple as a system graph JSON");
  auto* res_audit = res_cmd->add_subcommand("audit", "check the fully-expressing conditions");
  std::string res_z = "1/2", res_eps = "0";
  for (auto* c : {res_make, res_audit}) {
    c->add_option("--z", res_z, "z as p/q");
    c->add_option("--eps", res_eps, "eps as p/q");
  }

  // ---- attack --------------------------------------------------------------
  auto* attack_cmd = app.add_subcommand("attack", "composition attacks");
  attack_cmd->require_subcommand(1);
  auto* thm1_cmd = attack_cmd->add_subcommand(
      "thm1", "glue the dishonest-side resources and measure the distinguishing gap");
  std::string atk_z = "1/2", atk_eps = "0";
  bool atk_brute = false;
  thm1_cmd->add_option("--z", atk_z, "z as p/q");
  thm1_cmd->add_option("--eps", atk_eps, "eps as p/q");
  thm1_cmd->add_flag("--brute", atk_brute, "also search all 256 simulator reply tables");
  auto* mitm_cmd = attack_cmd->add_subcommand(
      "mitm", "delayed-relay attack on the parallel composition");
  std::string mitm_instance = "builtin:xor_echo";
  mitm_cmd->add_option("--instance", mitm_instance, "builtin:<name> or protocol JSON path");

  // ---- unbalanced ----------------------------------------------------------
  auto* unb_cmd = app.add_subcommand("unbalanced", "cascade bias analysis for dyadic z");
  std::string unb_bits = "1", unb_eps = "0", unb_mode = "both";
  unb_cmd->add_option("--z-bits", unb_bits, "binary expansion of z, e.g. 011")->required();
  unb_cmd->add_option("--eps", unb_eps, "per-instance bias as p/q");
  unb_cmd->add_option("--mode", unb_mode, "formula | dp | both")->check(
      CLI::IsMember({"formula", "dp", "both"}));

  // ---- global-check --------------------------------------------------------
  auto* glob_cmd = app.add_subcommand("global-check", "partition and conditional-bias analysis");
  std::string glob_system, glob_pi, glob_eta, glob_partition, glob_demo;
  std::string glob_z = "1/2", glob_eps = "0";
  glob_cmd->add_option("--system", glob_system, "system graph JSON (partition analysis)");
  glob_cmd->add_option("--pi-wires", glob_pi, "comma list of protocol wires");
  glob_cmd->add_option("--eta-wires", glob_eta, "comma list of bystander wires");
  glob_cmd->add_option("--partition", glob_partition,
                       "semicolon-separated blocks of comma-separated positions");
  glob_cmd->add_option("--demo", glob_demo, "sequential | interleaved (built-in audit demo)")
      ->check(CLI::IsMember({"sequential", "interleaved"}));
  glob_cmd->add_option("--z", glob_z, "z as p/q (demo)");
  glob_cmd->add_option("--eps", glob_eps, "eps as p/q (demo)");

  // ---- sweep ---------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "grid runs with one CSV row per cell");
  sweep_cmd->require_subcommand(1);
  auto* sweep_thm1 = sweep_cmd->add_subcommand("thm1", "gluing attack over a (z, eps) grid");
  std::string sw_z_list = "1/4,1/3,1/2", sw_eps_list = "0,z/2";
  sweep_thm1->add_option("--z-list", sw_z_list, "comma list of z fractions");
  sweep_thm1->add_option("--eps-list", sw_eps_list,
                         "comma list of eps values; 'z' and 'z/K' scale with z");
  auto* sweep_unb = sweep_cmd->add_subcommand("unbalanced", "cascade sweep over dyadic bits");
  int sw_n_max = 4;
  std::string sw_unb_eps_list = "0,1/100,1/20,1/10";
  sweep_unb->add_option("--n-max", sw_n_max, "maximum bit-string length");
  sweep_unb->add_option("--eps-list", sw_unb_eps_list, "comma list of eps fractions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  seed_set = seed_opt->count() > 0;
  const std::uint64_t sampling_seed = seed_from_env(seed, seed_set);

  if (*poset_cmd) {
    Poset p = poset_from_json(Json::parse(read_text(poset_input)));
    Json j;
    j["poset"] = poset_to_json(p);
    if (poset_cuts) {
      Json cuts = Json::array();
      for (std::uint64_t m : p.all_cuts()) cuts.push_back(Cut{p, m}.member_labels());
      j["cuts"] = std::move(cuts);
    }
    if (!poset_dot.empty()) emit(poset_dot, hasse_dot(p));
    emit(out_path, dump(j));
    return kExitOk;
  }

  if (*engine_cmd) {
    Json parsed = Json::parse(read_text(engine_system));
    // Accepts either a bare system graph or a protocol file with roles.
    SystemGraph s = parsed.contains("system") ? protocol_from_json(parsed).system
                                              : system_from_json(parsed);
    Json j;
    if (engine_samples > 0) {
      auto counts = sample_many(s, sampling_seed, engine_samples);
      Distribution exact = run_exact(s);
      Json rows = Json::object();
      for (const auto& [row, count] : counts) rows[exact.row_str(row)] = count;
      j["samples"] = rows;
      j["seed"] = sampling_seed;
      j["n"] = engine_samples;
    } else {
      j["distribution"] = distribution_to_json(run_exact(s));
    }
    emit(out_path, dump(j));
    return kExitOk;
  }

  if (*sa_cmd) {
    WcfProtocol p = load_protocol(sa_protocol, parse_fraction(sa_z), parse_fraction(sa_eps));
    if (!sa_emit.empty()) emit(sa_emit, dump(protocol_to_json(p)));
    SecurityReport r = verify_standalone(p);
    emit(out_path, dump(report_json(r)));
    if (!csv_path.empty()) {
      CsvTable t;
      t.header = {"protocol", "z", "eps", "p_star_alice", "p_star_bob",
                  "s1_ok", "s2_ok", "s3_ok", "rounds"};
      t.rows.push_back({sa_protocol, fraction_str(p.params.z), fraction_str(p.params.eps),
                        fraction_str(r.p_star_alice), fraction_str(r.p_star_bob),
                        r.s1_ok ? "1" : "0", r.s2_ok ? "1" : "0", r.s3_ok ? "1" : "0",
                        std::to_string(r.rounds)});
      emit(csv_path, t.str());
    }
    return kExitOk;
  }

  if (*res_cmd) {
    const Rational z = parse_fraction(res_z), eps = parse_fraction(res_eps);
    WcfParams params(z, eps);
    if (*res_make) {
      SystemGraph s{{wcf_resource_honest(z), wcf_resource_dishonest_alice(z, eps),
                     wcf_resource_dishonest_bob(z, eps)},
                    {}};
      emit(out_path, dump(system_to_json(s)));
      return kExitOk;
    }
    FullyExpressingReport r =
        fully_expressing_audit(wcf_resource_honest(z), wcf_resource_dishonest_alice(z, eps),
                               wcf_resource_dishonest_bob(z, eps), params);
    Json j;
    j["honest_ok"] = r.honest_ok;
    j["max_alice_cheat"] = rational_to_json(r.max_alice_cheat);
    j["max_bob_cheat"] = rational_to_json(r.max_bob_cheat);
    j["alice_capped"] = r.alice_capped;
    j["bob_capped"] = r.bob_capped;
    j["fully_expressing"] = r.ok();
    emit(out_path, dump(j));
    return kExitOk;
  }

  if (*attack_cmd) {
    if (*thm1_cmd) {
      const Rational z = parse_fraction(atk_z), eps = parse_fraction(atk_eps);
      WcfParams params(z, eps);  // rejects z > 1/2 with a usage error
      AdvantageReport r = resource_gluing_report(z, eps);
      Json j;
      j["z"] = fraction_str(z);
      j["eps"] = fraction_str(eps);
      j["joint"] = distribution_to_json(r.joint);
      j["mass00"] = rational_to_json(r.mass00);
      j["mass11"] = rational_to_json(r.mass11);
      j["discordant"] = rational_to_json(r.discordant);
      j["agreement_gap"] = rational_to_json(r.agreement_gap);
      j["d_lower"] = rational_to_json(r.d_lower);
      j["delta_lower"] = rational_to_json(r.delta_lower);
      if (atk_brute) {
        SimulatorSearch s = best_simulator_agreement(z, eps);
        j["brute"] = {{"best_agreement", rational_to_json(s.best_agreement)},
                      {"tables_scanned", s.tables_scanned}};
      }
      emit(out_path, dump(j));
      if (!csv_path.empty()) {
        CsvTable t;
        t.header = {"z", "eps", "mass00", "mass11", "discordant", "delta_lower",
                    "delta_lower_dec"};
        t.rows.push_back({fraction_str(z), fraction_str(eps), fraction_str(r.mass00),
                          fraction_str(r.mass11), fraction_str(r.discordant),
                          fraction_str(r.delta_lower), dec(r.delta_lower)});
        emit(csv_path, t.str());
      }
      return kExitOk;
    }
    // mitm
    WcfProtocol inst = load_protocol(mitm_instance, Rational(1, 2), Rational(0));
    MuProtocol mu = build_mu(inst);
    MitmResult r = mitm_attack(mu);
    auto bias = conditional_bias(r.attacked, mu.coin1_alice, mu.coin2_alice);
    Json j;
    j["instance"] = mitm_instance;
    j["attacked_pr1"] = rational_to_json(r.attacked_pr1);
    j["honest_mu_pr1"] = rational_to_json(r.honest_mu_pr1);
    j["attacked_equals_single_instance"] = r.equal;
    if (bias) j["conditional_second_given_first"] = rational_to_json(*bias);
    emit(out_path, dump(j));
    if (!r.equal) throw ClaimError("delayed-relay attack did not reproduce the instance coin");
    return kExitOk;
  }

  if (*unb_cmd) {
    DyadicProb z(unb_bits);
    const Rational eps = parse_fraction(unb_eps);
    Json j;
    j["bits"] = z.str();
    j["z"] = rational_to_json(z.value());
    j["eps"] = fraction_str(eps);
    if (unb_mode == "formula" || unb_mode == "both") {
      j["formula_alice"] = rational_to_json(alice_bound_formula(z, eps));
      j["formula_bob"] = rational_to_json(bob_bound_formula(z, eps));
    }
    if (unb_mode == "dp" || unb_mode == "both") {
      j["dp_alice"] = rational_to_json(best_cascade_cheat(z, eps, CascadeParty::alice));
      j["dp_bob"] = rational_to_json(best_cascade_cheat(z, eps, CascadeParty::bob));
    }
    if (unb_mode == "both") {
      CascadeBiasReport r = cascade_bias_report(z, eps);
      j["eps_prime_alice"] = rational_to_json(r.eps_prime_alice);
      j["eps_prime_bob"] = rational_to_json(r.eps_prime_bob);
      j["eps_prime"] = rational_to_json(r.eps_prime);
      j["margin"] = rational_to_json(r.margin);
      j["within_margin"] = r.within_margin;
      if (eps > 0) j["eps_prime_over_eps"] = rational_to_json(r.eps_prime / eps);
      j["honest"] = rational_to_json(honest_cascade_distribution(z)[0]);
    }
    emit(out_path, dump(j));
    return kExitOk;
  }

  if (*glob_cmd) {
    Json j;
    if (!glob_demo.empty()) {
      WcfProtocol p = cheat_capped(parse_fraction(glob_z), parse_fraction(glob_eps));
      CompositionMode mode = glob_demo == "sequential" ? CompositionMode::sequential
                                                       : CompositionMode::interleaved;
      WcfProtocol inst = mode == CompositionMode::interleaved ? xor_echo_protocol() : p;
      CompositionDemoReport r = composition_demo(inst, mode);
      j["mode"] = glob_demo;
      j["partition_found"] = r.partition_found;
      if (r.audit) {
        j["max_given_k_alice"] = rational_to_json(r.audit->max_given_k_alice);
        j["max_given_k_bob"] = rational_to_json(r.audit->max_given_k_bob);
        j["pass_standalone_roles"] = r.audit->pass_standalone_roles;
        j["pass_swapped_roles"] = r.audit->pass_swapped_roles;
      }
      if (r.attack_conditional)
        j["attack_conditional"] = rational_to_json(*r.attack_conditional);
      j["globally_secure"] = r.globally_secure;
      emit(out_path, dump(j));
      return kExitOk;
    }
    if (glob_system.empty())
      throw CLI::ValidationError("global-check", "--system or --demo is required");
    SystemGraph s = system_from_json(Json::parse(read_text(glob_system)));
    Poset merged = merged_poset(s);
    auto wire_positions = [&](const std::string& csv) {
      std::uint64_t mask = 0;
      for (const auto& wid : split_list(csv)) {
        const CausalBox* b = s.box_of_wire(wid);
        if (!b) throw FormatError("unknown wire '" + wid + "'");
        for (const auto& pos : b->find_wire(wid)->positions)
          mask |= std::uint64_t(1) << merged.index_of(pos);
      }
      return mask;
    };
    std::uint64_t pi_mask = wire_positions(glob_pi);
    std::uint64_t eta_mask = wire_positions(glob_eta);
    if (!glob_partition.empty()) {
      Partition part;
      std::vector<std::uint64_t*> blocks = {&part.t1, &part.t2, &part.t3};
      std::stringstream ss(glob_partition);
      std::string block;
      std::size_t bi = 0;
      while (std::getline(ss, block, ';') && bi < 3) {
        for (const auto& pos : split_list(block))
          *blocks[bi] |= std::uint64_t(1) << merged.index_of(pos);
        ++bi;
      }
      j["partition_ok"] = partition_check(merged, part, pi_mask, eta_mask);
    } else {
      auto found = find_sequential_partition(merged, pi_mask, eta_mask);
      j["partition_found"] = found.has_value();
      if (found) {
        auto labels = [&](std::uint64_t m) { return Cut{merged, m}.member_labels(); };
        j["partition"] = {{"t1", labels(found->t1)},
                          {"t2", labels(found->t2)},
                          {"t3", labels(found->t3)}};
      }
    }
    emit(out_path, dump(j));
    return kExitOk;
  }

  if (*sweep_cmd) {
    CsvTable t;
    if (*sweep_thm1) {
      t.header = {"z", "eps", "mass00", "mass11", "discordant", "delta_lower", "delta_lower_dec",
                  "status"};
      for (const auto& zs : split_list(sw_z_list)) {
        const Rational z = parse_fraction(zs);
        for (const auto& es : split_list(sw_eps_list)) {
          std::vector<std::string> row{fraction_str(z)};
          try {
            const Rational eps = parse_eps_token(es, z);
            row.push_back(fraction_str(eps));
            AdvantageReport r = resource_gluing_report(z, eps);
            row.insert(row.end(),
                       {fraction_str(r.mass00), fraction_str(r.mass11),
                        fraction_str(r.discordant), fraction_str(r.delta_lower),
                        dec(r.delta_lower), "ok"});
          } catch (const std::exception& e) {
            while (row.size() + 1 < t.header.size()) row.push_back("");
            row.push_back(std::string("error: ") + e.what());
          }
          t.rows.push_back(std::move(row));
        }
      }
    } else {
      t.header = {"bits", "eps", "eps_prime_alice", "eps_prime_bob", "formula_alice",
                  "formula_bob", "eps_prime", "eps_prime_dec", "status"};
      for (const DyadicProb& z : all_dyadics_up_to(sw_n_max)) {
        for (const auto& es : split_list(sw_unb_eps_list)) {
          std::vector<std::string> row{z.str()};
          try {
            const Rational eps = parse_fraction(es);
            row.push_back(fraction_str(eps));
            CascadeBiasReport r = cascade_bias_report(z, eps);
            row.insert(row.end(),
                       {fraction_str(r.eps_prime_alice), fraction_str(r.eps_prime_bob),
                        fraction_str(r.formula_alice), fraction_str(r.formula_bob),
                        fraction_str(r.eps_prime), dec(r.eps_prime), "ok"});
          } catch (const std::exception& e) {
            while (row.size() + 1 < t.header.size()) row.push_back("");
            row.push_back(std::string("error: ") + e.what());
          }
          t.rows.push_back(std::move(row));
        }
      }
    }
    emit(csv_path.empty() ? out_path : csv_path, t.str());
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ClaimError& e) {
    std::cerr << "claim mismatch: " << e.what() << "\n";
    return kExitClaimMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
