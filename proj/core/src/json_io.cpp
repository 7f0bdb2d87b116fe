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
#include "coinbox/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace coinbox {

namespace {

Slot slot_from_str(const std::string& s) {
  auto at = s.find('@');
  if (at == std::string::npos) throw FormatError("slot '" + s + "' is not wire@position");
  return {s.substr(0, at), s.substr(at + 1)};
}

}  // namespace

Json poset_to_json(const Poset& p) {
  Json j;
  j["elements"] = p.labels();
  Json covers = Json::array();
  for (auto [a, b] : p.cover_pairs()) covers.push_back({p.label(a), p.label(b)});
  j["covers"] = std::move(covers);
  return j;
}

Poset poset_from_json(const Json& j) {
  if (!j.contains("elements")) throw FormatError("poset: missing 'elements'");
  std::vector<std::string> elements = j.at("elements").get<std::vector<std::string>>();
  std::vector<std::pair<std::string, std::string>> covers;
  for (const auto& e : j.value("covers", Json::array())) {
    if (!e.is_array() || e.size() != 2) throw FormatError("poset: covers entries are pairs");
    covers.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return Poset::build(elements, covers);
}

Json rational_to_json(const Rational& r) {
  Json j;
  j["fraction"] = fraction_str(r);
  j["decimal"] = to_double(r);
  return j;
}

Json system_to_json(const SystemGraph& s) {
  Json j;
  Json boxes = Json::array();
  for (const auto& b : s.boxes) {
    if (b.script) throw FormatError("system_to_json: quantum script boxes are not serializable");
    Json jb;
    jb["name"] = b.name;
    jb["poset"] = poset_to_json(b.poset);
    Json wires = Json::array();
    for (const auto& w : b.wires) {
      Json jw;
      jw["id"] = w.id;
      jw["dir"] = w.dir == WireDir::in ? "in" : "out";
      jw["alphabet"] = w.alphabet;
      if (w.quantum) jw["quantum"] = true;
      jw["positions"] = w.positions;
      wires.push_back(std::move(jw));
    }
    jb["wires"] = std::move(wires);
    Json chi;
    for (std::size_t t = 0; t < b.poset.size(); ++t) {
      std::vector<std::string> img;
      std::uint64_t m = b.chi.principal_image(int(t));
      for (std::size_t x = 0; x < b.poset.size(); ++x)
        if (m >> x & 1) img.push_back(b.poset.label(int(x)));
      chi[b.poset.label(int(t))] = img;
    }
    jb["chi"] = {{"principal_images", chi}};
    Json rules = Json::array();
    for (const auto& r : b.kernel.rules) {
      Json jr;
      jr["out"] = r.out.str();
      Json deps = Json::array();
      for (const auto& d : r.deps) deps.push_back(d.str());
      jr["deps"] = std::move(deps);
      Json rows = Json::array();
      for (const auto& [key, dist] : r.rows) {
        Json row;
        row["given"] = key;
        Json jd;
        for (const auto& [v, pr] : dist.weights) jd[std::to_string(v)] = fraction_str(pr);
        row["dist"] = std::move(jd);
        rows.push_back(std::move(row));
      }
      jr["rows"] = std::move(rows);
      rules.push_back(std::move(jr));
    }
    jb["kernel"] = {{"rules", rules}};
    boxes.push_back(std::move(jb));
  }
  j["boxes"] = std::move(boxes);
  Json links = Json::array();
  for (const auto& l : s.links) links.push_back({l.out_wire, l.in_wire});
  j["links"] = std::move(links);
  return j;
}

SystemGraph system_from_json(const Json& j) {
  SystemGraph s;
  for (const auto& jb : j.value("boxes", Json::array())) {
    CausalBox b;
    b.name = jb.value("name", "box");
    b.poset = poset_from_json(jb.at("poset"));
    for (const auto& jw : jb.value("wires", Json::array())) {
      Wire w;
      w.id = jw.at("id").get<std::string>();
      std::string dir = jw.at("dir").get<std::string>();
      if (dir != "in" && dir != "out") throw FormatError("wire dir must be 'in' or 'out'");
      w.dir = dir == "in" ? WireDir::in : WireDir::out;
      w.alphabet = jw.value("alphabet", 2);
      w.quantum = jw.value("quantum", false);
      w.positions = jw.at("positions").get<std::vector<std::string>>();
      b.wires.push_back(std::move(w));
    }
    if (jb.contains("chi")) {
      const Json& imgs = jb.at("chi").at("principal_images");
      std::vector<std::uint64_t> principal(b.poset.size(), 0);
      for (auto it = imgs.begin(); it != imgs.end(); ++it) {
        std::uint64_t m = 0;
        for (const auto& l : it.value())
          m |= std::uint64_t(1) << b.poset.index_of(l.get<std::string>());
        principal[std::size_t(b.poset.index_of(it.key()))] = m;
      }
      b.chi = CausalityFn(b.poset, std::move(principal));
    } else {
      b.chi = strict_past_causality(b.poset);
    }
    for (const auto& jr : jb.at("kernel").value("rules", Json::array())) {
      OutputRule r;
      r.out = slot_from_str(jr.at("out").get<std::string>());
      for (const auto& d : jr.value("deps", Json::array()))
        r.deps.push_back(slot_from_str(d.get<std::string>()));
      for (const auto& row : jr.value("rows", Json::array())) {
        std::vector<int> key = row.at("given").get<std::vector<int>>();
        SymbolDist dist;
        for (auto it = row.at("dist").begin(); it != row.at("dist").end(); ++it)
          dist.weights.push_back({std::stoi(it.key()), parse_fraction(it.value().get<std::string>())});
        r.rows[key] = std::move(dist);
      }
      b.kernel.rules.push_back(std::move(r));
    }
    b.validate();
    s.boxes.push_back(std::move(b));
  }
  for (const auto& jl : j.value("links", Json::array())) {
    if (!jl.is_array() || jl.size() != 2) throw FormatError("links entries are pairs");
    s.links.push_back({jl[0].get<std::string>(), jl[1].get<std::string>()});
  }
  return s;
}

Json protocol_to_json(const WcfProtocol& p) {
  Json j;
  j["system"] = system_to_json(p.system);
  j["roles"] = {{"alice", p.alice_boxes}, {"bob", p.bob_boxes}, {"middle", p.middle_boxes}};
  j["coin_a"] = p.coin_a.str();
  j["coin_b"] = p.coin_b.str();
  j["z"] = fraction_str(p.params.z);
  j["eps"] = fraction_str(p.params.eps);
  return j;
}

WcfProtocol protocol_from_json(const Json& j) {
  SystemGraph s = system_from_json(j.at("system"));
  WcfParams params(parse_fraction(j.at("z").get<std::string>()),
                   parse_fraction(j.at("eps").get<std::string>()));
  WcfProtocol p{std::move(s),
                j.at("roles").at("alice").get<std::vector<std::size_t>>(),
                j.at("roles").at("bob").get<std::vector<std::size_t>>(),
                j.at("roles").value("middle", std::vector<std::size_t>{}),
                slot_from_str(j.at("coin_a").get<std::string>()),
                slot_from_str(j.at("coin_b").get<std::string>()),
                params};
  return p;
}

Json distribution_to_json(const Distribution& d) {
  Json j;
  std::vector<std::string> slots;
  for (const auto& s : d.slots) slots.push_back(s.str());
  j["slots"] = slots;
  Json probs = Json::object();
  for (const auto& [row, pr] : d.probs) {
    std::string key;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) key += ",";
      key += std::to_string(row[i]);
    }
    probs[key] = rational_to_json(pr);
  }
  j["probs"] = std::move(probs);
  return j;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename '" + tmp + "' to '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coinbox
