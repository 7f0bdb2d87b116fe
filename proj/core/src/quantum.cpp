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
#include "coinbox/quantum.hpp"

#include "coinbox/errors.hpp"

namespace coinbox {

QReal operator/(const QReal& x, const QReal& y) {
  // Multiply by the conjugate c - d*sqrt2; c^2 - 2d^2 = 0 only for y = 0.
  Rational den = y.a * y.a - 2 * y.b * y.b;
  if (den == 0) throw Error("QReal: division by zero");
  return {(x.a * y.a - 2 * x.b * y.b) / den, (x.b * y.a - x.a * y.b) / den};
}

QAmp amp(long num, long den) { return {QReal(Rational(num, den)), QReal(Rational(0))}; }
QAmp amp_sqrt2_over(long den) { return {QReal::sqrt2_over(den), QReal(Rational(0))}; }

QMatrix q_identity(int dim) {
  QMatrix m(std::size_t(dim), std::vector<QAmp>(std::size_t(dim), amp(0)));
  for (int i = 0; i < dim; ++i) m[std::size_t(i)][std::size_t(i)] = amp(1);
  return m;
}

QMatrix q_hadamard() {
  QAmp h = amp_sqrt2_over(2);  // 1/sqrt2
  return {{h, h}, {h, QAmp{-h.re, -h.im}}};
}

QMatrix q_pauli_x() { return {{amp(0), amp(1)}, {amp(1), amp(0)}}; }
QMatrix q_pauli_z() { return {{amp(1), amp(0)}, {amp(0), amp(-1)}}; }

QMatrix q_cnot() {
  // Control = first (most significant) register of the pair.
  QMatrix m = q_identity(4);
  std::swap(m[2], m[3]);
  return m;
}

QMatrix q_bell_encoder() {
  // CNOT . (H x I): |00> -> (|00>+|11>)/sqrt2.
  QAmp h = amp_sqrt2_over(2), z = amp(0), nh = QAmp{-h.re, -h.im};
  return {{h, z, h, z}, {z, h, z, h}, {z, h, z, nh}, {h, z, nh, z}};
}

bool is_isometry(const QMatrix& m) {
  if (m.empty()) return false;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (const auto& row : m)
    if (row.size() != cols) return false;
  for (std::size_t c1 = 0; c1 < cols; ++c1)
    for (std::size_t c2 = 0; c2 < cols; ++c2) {
      QAmp dot{QReal(Rational(0)), QReal(Rational(0))};
      for (std::size_t r = 0; r < rows; ++r) dot = dot + m[r][c1].conj() * m[r][c2];
      QAmp expect = c1 == c2 ? amp(1) : amp(0);
      if (!(dot == expect)) return false;
    }
  return true;
}

int QState::add_register(int dim) {
  if (dim < 2 || dim > 4) throw Error("QState: register dimension must be 2..4");
  if (amp_.empty()) amp_ = {QAmp{QReal(Rational(1)), QReal(Rational(0))}};
  dims_.push_back(dim);
  std::vector<QAmp> grown(amp_.size() * std::size_t(dim), QAmp{});
  for (std::size_t i = 0; i < amp_.size(); ++i) grown[i * std::size_t(dim)] = amp_[i];
  amp_ = std::move(grown);
  return int(dims_.size()) - 1;
}

std::size_t QState::stride(int reg) const {
  std::size_t s = 1;
  for (std::size_t r = std::size_t(reg) + 1; r < dims_.size(); ++r) s *= std::size_t(dims_[r]);
  return s;
}

void QState::apply(const QMatrix& m, const std::vector<int>& regs) {
  std::size_t block = 1;
  for (int r : regs) block *= std::size_t(dims_[std::size_t(r)]);
  if (m.size() != block || m.empty() || m[0].size() != block)
    throw DimensionMismatchError("QState: matrix does not match register dims");

  // Decompose each global index into (sub, rest) where sub enumerates the
  // targeted registers most-significant-first.
  const std::size_t total = amp_.size();
  std::vector<std::size_t> strides;
  for (int r : regs) strides.push_back(stride(r));
  std::vector<int> rdims;
  for (int r : regs) rdims.push_back(dims_[std::size_t(r)]);

  std::vector<QAmp> out(total, QAmp{});
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (amp_[idx].is_zero()) continue;
    // Extract sub-index of the targeted regs at idx.
    std::size_t sub = 0, base = idx;
    for (std::size_t k = 0; k < regs.size(); ++k) {
      std::size_t digit = (idx / strides[k]) % std::size_t(rdims[k]);
      sub = sub * std::size_t(rdims[k]) + digit;
      base -= digit * strides[k];
    }
    for (std::size_t row = 0; row < block; ++row) {
      const QAmp& coeff = m[row][sub];
      if (coeff.is_zero()) continue;
      // Scatter row digits back into a global index.
      std::size_t target = base, rem = row;
      for (std::size_t k = regs.size(); k-- > 0;) {
        std::size_t digit = rem % std::size_t(rdims[k]);
        rem /= std::size_t(rdims[k]);
        target += digit * strides[k];
      }
      out[target] = out[target] + coeff * amp_[idx];
    }
  }
  amp_ = std::move(out);
}

std::vector<std::pair<int, QReal>> QState::measure_weights(int reg) const {
  const int d = dims_[std::size_t(reg)];
  const std::size_t s = stride(reg);
  std::vector<QReal> w(std::size_t(d), QReal(Rational(0)));
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    int digit = int((idx / s) % std::size_t(d));
    w[std::size_t(digit)] = w[std::size_t(digit)] + amp_[idx].norm2();
  }
  std::vector<std::pair<int, QReal>> out;
  for (int v = 0; v < d; ++v)
    if (!w[std::size_t(v)].is_zero()) out.push_back({v, w[std::size_t(v)]});
  return out;
}

void QState::project(int reg, int outcome) {
  const std::size_t s = stride(reg);
  const std::size_t d = std::size_t(dims_[std::size_t(reg)]);
  for (std::size_t idx = 0; idx < amp_.size(); ++idx)
    if (int((idx / s) % d) != outcome) amp_[idx] = QAmp{};
}

QReal QState::norm2() const {
  QReal n(Rational(0));
  for (const auto& a : amp_) n = n + a.norm2();
  if (amp_.empty()) n = QReal(Rational(1));
  return n;
}

QuantumScript::Step QuantumScript::prepare(std::vector<int> reg_ids, std::vector<int> dims) {
  Step s;
  s.kind = Step::Kind::prepare;
  s.regs = std::move(reg_ids);
  s.dims = std::move(dims);
  return s;
}

QuantumScript::Step QuantumScript::receive(std::string wire, std::string pos, int reg_id) {
  Step s;
  s.kind = Step::Kind::receive;
  s.wire = std::move(wire);
  s.pos = std::move(pos);
  s.regs = {reg_id};
  return s;
}

QuantumScript::Step QuantumScript::apply(std::string pos, QMatrix m, std::vector<int> reg_ids) {
  Step s;
  s.kind = Step::Kind::apply;
  s.pos = std::move(pos);
  s.matrix = std::move(m);
  s.regs = std::move(reg_ids);
  return s;
}

QuantumScript::Step QuantumScript::emit(std::string wire, std::string pos, int reg_id) {
  Step s;
  s.kind = Step::Kind::emit;
  s.wire = std::move(wire);
  s.pos = std::move(pos);
  s.regs = {reg_id};
  return s;
}

QuantumScript::Step QuantumScript::measure_emit(std::string wire, std::string pos, int reg_id) {
  Step s;
  s.kind = Step::Kind::measure_emit;
  s.wire = std::move(wire);
  s.pos = std::move(pos);
  s.regs = {reg_id};
  return s;
}

QuantumScript::Step QuantumScript::classical_emit(
    std::string wire, std::string pos, std::function<int(const std::map<std::string, int>&)> fn) {
  Step s;
  s.kind = Step::Kind::classical_emit;
  s.wire = std::move(wire);
  s.pos = std::move(pos);
  s.fn = std::move(fn);
  return s;
}

}  // namespace coinbox
