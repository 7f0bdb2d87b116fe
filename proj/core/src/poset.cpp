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
#include "coinbox/poset.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace coinbox {

namespace {
constexpr std::size_t kMaxElements = 64;
}

struct Poset::Data {
  std::vector<std::string> labels;             // sorted
  std::vector<std::uint64_t> below;            // below[t] = mask of {x : x <= t}
};

Poset::Poset() : d_(std::make_shared<const Data>()) {}
Poset::Poset(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

Poset Poset::build(const std::vector<std::string>& elements,
                   const std::vector<std::pair<std::string, std::string>>& edges) {
  auto data = std::make_shared<Data>();
  data->labels = elements;
  std::sort(data->labels.begin(), data->labels.end());
  if (std::adjacent_find(data->labels.begin(), data->labels.end()) != data->labels.end())
    throw Error("poset: duplicate element label");
  const std::size_t n = data->labels.size();
  if (n > kMaxElements) throw Error("poset: more than 64 elements");

  auto idx = [&](const std::string& s) -> std::size_t {
    auto it = std::lower_bound(data->labels.begin(), data->labels.end(), s);
    if (it == data->labels.end() || *it != s)
      throw UnknownElementError("poset: unknown element '" + s + "'");
    return std::size_t(it - data->labels.begin());
  };

  // Reflexive base, then saturate with the edges (Floyd-Warshall on masks).
  data->below.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) data->below[i] = std::uint64_t(1) << i;
  std::vector<std::uint64_t> above(n, 0);
  for (std::size_t i = 0; i < n; ++i) above[i] = std::uint64_t(1) << i;
  for (const auto& [a, b] : edges) {
    std::size_t ia = idx(a), ib = idx(b);
    data->below[ib] |= std::uint64_t(1) << ia;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      if (data->below[j] >> k & 1) data->below[j] |= data->below[k];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (data->below[j] >> i & 1) && (data->below[i] >> j & 1))
        throw CycleError("poset: cycle through '" + data->labels[i] + "' and '" +
                         data->labels[j] + "'");
  return Poset(std::move(data));
}

Poset Poset::chain(const std::vector<std::string>& elements) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i + 1 < elements.size(); ++i)
    edges.emplace_back(elements[i], elements[i + 1]);
  return build(elements, edges);
}

std::size_t Poset::size() const { return d_->labels.size(); }
const std::vector<std::string>& Poset::labels() const { return d_->labels; }

bool Poset::contains(const std::string& label) const {
  return std::binary_search(d_->labels.begin(), d_->labels.end(), label);
}

int Poset::index_of(const std::string& label) const {
  auto it = std::lower_bound(d_->labels.begin(), d_->labels.end(), label);
  if (it == d_->labels.end() || *it != label)
    throw UnknownElementError("poset: unknown element '" + label + "'");
  return int(it - d_->labels.begin());
}

const std::string& Poset::label(int i) const { return d_->labels[std::size_t(i)]; }

bool Poset::leq(int a, int b) const { return d_->below[std::size_t(b)] >> a & 1; }
bool Poset::less(int a, int b) const { return a != b && leq(a, b); }
bool Poset::leq(const std::string& a, const std::string& b) const {
  return leq(index_of(a), index_of(b));
}

std::uint64_t Poset::down_mask(int t) const { return d_->below[std::size_t(t)]; }
std::uint64_t Poset::strict_down_mask(int t) const {
  return d_->below[std::size_t(t)] & ~(std::uint64_t(1) << t);
}

std::uint64_t Poset::full_mask() const {
  return size() == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << size()) - 1;
}

bool Poset::is_downset(std::uint64_t mask) const {
  for (std::size_t t = 0; t < size(); ++t)
    if (mask >> t & 1)
      if ((down_mask(int(t)) & ~mask) != 0) return false;
  return true;
}

bool Poset::is_bounded(std::uint64_t mask) const {
  for (std::size_t t = 0; t < size(); ++t)
    if ((mask & ~down_mask(int(t))) == 0) return true;
  return false;
}

std::vector<std::uint64_t> Poset::all_cuts() const {
  // Grows each downset by one maximal-eligible element; n stays small here.
  std::set<std::uint64_t> cuts;
  cuts.insert(0);
  std::vector<std::uint64_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t c : frontier) {
      for (std::size_t t = 0; t < size(); ++t) {
        if (c >> t & 1) continue;
        if ((strict_down_mask(int(t)) & ~c) != 0) continue;  // a predecessor missing
        std::uint64_t grown = c | (std::uint64_t(1) << t);
        if (cuts.insert(grown).second) next.push_back(grown);
      }
    }
    frontier = std::move(next);
  }
  return {cuts.begin(), cuts.end()};
}

std::vector<std::pair<int, int>> Poset::cover_pairs() const {
  std::vector<std::pair<int, int>> out;
  const int n = int(size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!less(i, j)) continue;
      bool direct = true;
      for (int k = 0; k < n && direct; ++k)
        if (k != i && k != j && less(i, k) && less(k, j)) direct = false;
      if (direct) out.emplace_back(i, j);
    }
  return out;
}

std::vector<int> Poset::linear_extension() const {
  const int n = int(size());
  std::vector<int> order;
  std::uint64_t placed = 0;
  while (int(order.size()) < n) {
    int pick = -1;
    for (int t = 0; t < n; ++t) {
      if (placed >> t & 1) continue;
      if ((strict_down_mask(t) & ~placed) != 0) continue;
      pick = t;  // labels are sorted, so the first eligible index is smallest
      break;
    }
    if (pick < 0) throw Error("poset: no linear extension (corrupt order)");
    order.push_back(pick);
    placed |= std::uint64_t(1) << pick;
  }
  return order;
}

bool Poset::operator==(const Poset& other) const {
  return d_->labels == other.d_->labels && d_->below == other.d_->below;
}
bool Poset::operator!=(const Poset& other) const { return !(*this == other); }

Poset Poset::relabeled(const std::map<std::string, std::string>& rename) const {
  std::vector<std::string> labels;
  labels.reserve(size());
  for (const auto& l : d_->labels) {
    auto it = rename.find(l);
    labels.push_back(it == rename.end() ? l : it->second);
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (auto [i, j] : cover_pairs()) edges.emplace_back(labels[std::size_t(i)], labels[std::size_t(j)]);
  return build(labels, edges);
}

std::vector<std::string> Cut::member_labels() const {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < poset.size(); ++t)
    if (mask >> t & 1) out.push_back(poset.label(int(t)));
  return out;
}

bool is_cut(const Poset& p, const std::vector<std::string>& subset) {
  std::uint64_t mask = 0;
  for (const auto& s : subset) mask |= std::uint64_t(1) << p.index_of(s);
  return p.is_downset(mask);
}

bool is_cut_mask(const Poset& p, std::uint64_t mask) { return p.is_downset(mask); }

Poset union_posets(const Poset& p1, const Poset& p2) {
  std::vector<std::string> labels = p1.labels();
  labels.insert(labels.end(), p2.labels().begin(), p2.labels().end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::vector<std::pair<std::string, std::string>> edges;
  auto add_all = [&](const Poset& p) {
    for (auto [i, j] : p.cover_pairs()) edges.emplace_back(p.label(i), p.label(j));
  };
  add_all(p1);
  add_all(p2);
  try {
    return Poset::build(labels, edges);
  } catch (const CycleError& e) {
    throw IncompatibleError(std::string("union of orders is not a partial order: ") + e.what());
  }
}

Cut restrict_cut(const Poset& whole, const Cut& c, const Poset& part) {
  if (c.poset != whole) throw DomainMismatchError("restrict_cut: cut not over the union poset");
  for (const auto& l : part.labels())
    if (!whole.contains(l)) throw NotASubposetError("restrict_cut: '" + l + "' not in the union");
  for (const auto& l : part.labels())
    for (const auto& m : part.labels())
      if (part.leq(l, m) && !whole.leq(l, m))
        throw NotASubposetError("restrict_cut: order of part disagrees with union");
  std::uint64_t mask = 0;
  for (const auto& l : part.labels())
    if (c.mask >> whole.index_of(l) & 1) mask |= std::uint64_t(1) << part.index_of(l);
  return Cut{part, mask};
}

CausalityFn::CausalityFn(Poset p, std::vector<std::uint64_t> principal_images)
    : poset_(std::move(p)), principal_(std::move(principal_images)) {
  if (principal_.size() != poset_.size())
    throw Error("causality function: one principal image per element required");
}

std::uint64_t CausalityFn::image(std::uint64_t cut_mask) const {
  std::uint64_t out = 0;
  for (std::size_t t = 0; t < poset_.size(); ++t)
    if (cut_mask >> t & 1) out |= principal_[t];
  return out;
}

CausalityFn strict_past_causality(const Poset& p) {
  std::vector<std::uint64_t> img(p.size());
  for (std::size_t t = 0; t < p.size(); ++t) img[t] = p.strict_down_mask(int(t));
  return CausalityFn(p, std::move(img));
}

CausalityFn identity_causality(const Poset& p) {
  std::vector<std::uint64_t> img(p.size());
  for (std::size_t t = 0; t < p.size(); ++t) img[t] = p.down_mask(int(t));
  return CausalityFn(p, std::move(img));
}

CausalityFn empty_causality(const Poset& p) {
  return CausalityFn(p, std::vector<std::uint64_t>(p.size(), 0));
}

namespace {
std::vector<std::string> mask_labels(const Poset& p, std::uint64_t mask) {
  return Cut{p, mask}.member_labels();
}
}  // namespace

CausalityReport validate_causality_fn(const Poset& p, const CausalityFn& chi) {
  CausalityReport report;
  auto cuts = p.all_cuts();
  auto flag = [&](const char* cond, std::uint64_t witness) {
    report.ok = false;
    report.violations.push_back({cond, mask_labels(p, witness)});
  };

  // Homomorphism and monotonicity over all cut pairs. Both hold by
  // construction for union-extended images; checked anyway so hand-built
  // tables are caught.
  for (std::uint64_t c : cuts) {
    for (std::uint64_t d : cuts) {
      std::uint64_t u = c | d;
      if (chi.image(u) != (chi.image(c) | chi.image(d))) {
        flag("homomorphism", u);
        break;
      }
      if ((c & ~d) == 0 && (chi.image(c) & ~chi.image(d)) != 0) {
        flag("monotone", c);
        break;
      }
    }
    if (!report.ok && report.violations.size() > 8) break;
  }

  for (std::uint64_t c : cuts) {
    if (c == 0 || !p.is_bounded(c)) continue;
    std::uint64_t img = chi.image(c);
    if (!((img & ~c) == 0 && img != c)) flag("decreasing", c);
  }

  for (std::uint64_t c : cuts) {
    if (!p.is_bounded(c)) continue;
    for (std::size_t t = 0; t < p.size(); ++t) {
      if (!(c >> t & 1)) continue;
      bool escapes = false;
      std::uint64_t iter = c;
      for (int n = 0; n < 100 && !escapes; ++n) {
        iter = chi.image(iter);
        if (!(iter >> t & 1)) escapes = true;
      }
      if (!escapes) {
        flag("escape", c);
        break;
      }
    }
  }
  return report;
}

DelayFn::DelayFn(Poset p, const std::map<std::string, std::string>& mapping) : poset_(std::move(p)) {
  for (const auto& [from, to] : mapping) {
    int a = poset_.index_of(from);
    int b = poset_.index_of(to);
    if (!poset_.less(a, b))
      throw NotAdvancingError("delay function: '" + from + "' is not strictly below '" + to + "'");
    map_[a] = b;
  }
}

std::optional<int> DelayFn::apply(int t) const {
  auto it = map_.find(t);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

CausalityFn delay_to_causality(const Poset& p, const DelayFn& f) {
  if (f.poset() != p) throw DomainMismatchError("delay_to_causality: poset mismatch");
  std::vector<std::uint64_t> img(p.size(), 0);
  for (std::size_t s = 0; s < p.size(); ++s) {
    // chi_f(T^{<=s}) = union of T^{<=t} over t with f(t) <= s
    for (const auto& [t, ft] : f.mapping())
      if (p.leq(ft, int(s))) img[s] |= p.down_mask(t);
  }
  return CausalityFn(p, std::move(img));
}

std::string hasse_dot(const Poset& p, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n";
  for (const auto& l : p.labels()) os << "  \"" << l << "\";\n";
  for (auto [i, j] : p.cover_pairs())
    os << "  \"" << p.label(i) << "\" -> \"" << p.label(j) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace coinbox
