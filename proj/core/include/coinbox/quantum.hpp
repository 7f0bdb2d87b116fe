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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coinbox/rational.hpp"

namespace coinbox {

/** Element of Q(sqrt 2): a + b*sqrt(2) with exact rational a, b. Closed under
    the field operations, which keeps Hadamard-style amplitudes exact. */
struct QReal {
  Rational a, b;

  QReal() = default;
  QReal(Rational a_, Rational b_ = Rational(0)) : a(std::move(a_)), b(std::move(b_)) {}
  static QReal sqrt2_over(long den) { return QReal(Rational(0), Rational(1, den)); }

  bool is_rational() const { return b == 0; }
  bool is_zero() const { return a == 0 && b == 0; }
  double dbl() const { return to_double(a) + to_double(b) * 1.4142135623730951; }

  friend QReal operator+(const QReal& x, const QReal& y) { return {x.a + y.a, x.b + y.b}; }
  friend QReal operator-(const QReal& x, const QReal& y) { return {x.a - y.a, x.b - y.b}; }
  friend QReal operator-(const QReal& x) { return {-x.a, -x.b}; }
  friend QReal operator*(const QReal& x, const QReal& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend QReal operator/(const QReal& x, const QReal& y);
  friend bool operator==(const QReal& x, const QReal& y) { return x.a == y.a && x.b == y.b; }
};

/// Complex number over QReal.
struct QAmp {
  QReal re, im;

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  QAmp conj() const { return {re, -im}; }
  QReal norm2() const { return re * re + im * im; }

  friend QAmp operator+(const QAmp& x, const QAmp& y) { return {x.re + y.re, x.im + y.im}; }
  friend QAmp operator-(const QAmp& x, const QAmp& y) { return {x.re - y.re, x.im - y.im}; }
  friend QAmp operator*(const QAmp& x, const QAmp& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(const QAmp& x, const QAmp& y) { return x.re == y.re && x.im == y.im; }
};

QAmp amp(long num, long den = 1);            // rational real amplitude
QAmp amp_sqrt2_over(long den);               // (sqrt 2)/den

/// Row-major matrix; square unitaries and tall isometries both allowed.
using QMatrix = std::vector<std::vector<QAmp>>;

QMatrix q_identity(int dim);
QMatrix q_hadamard();
QMatrix q_pauli_x();
QMatrix q_pauli_z();
QMatrix q_cnot();
/// Isometry |0> -> (|00> + |11>)/sqrt2, |1> -> (|01> + |10>)/sqrt2.
QMatrix q_bell_encoder();
bool is_isometry(const QMatrix& m);

/** Pure state over an ordered register list; amplitudes exact, possibly
    unnormalized (branch weight carried outside). */
class QState {
 public:
  QState() = default;

  int add_register(int dim);  // tensored in as |0>
  int registers() const { return int(dims_.size()); }
  int dim(int reg) const { return dims_[std::size_t(reg)]; }

  /// Applies an isometry to the listed registers (most significant first).
  /// An isometry may grow a register's dimension only via matching dims.
  void apply(const QMatrix& m, const std::vector<int>& regs);

  /// Computational-basis measurement outcomes with exact relative weights:
  /// (outcome, norm2 of the projected state). Projection is NOT normalized.
  std::vector<std::pair<int, QReal>> measure_weights(int reg) const;
  /// Projects onto reg == outcome, leaving the state unnormalized.
  void project(int reg, int outcome);

  QReal norm2() const;
  const std::vector<QAmp>& amplitudes() const { return amp_; }

 private:
  std::vector<int> dims_;
  std::vector<QAmp> amp_{};  // empty means "no registers yet" (scalar 1)
  std::size_t stride(int reg) const;
};

/** Program of a quantum causal box: steps bound to positions of the box
    poset, executed in list order. Messages received on quantum in-wires are
    bound to script-local register names; classical emissions may be
    measurements or functions of received classical values. */
struct QuantumScript {
  struct Step {
    enum class Kind { prepare, receive, apply, emit, measure_emit, classical_emit };
    Kind kind;
    std::string pos;    // empty for prepare
    std::string wire;   // receive/emit variants
    std::vector<int> regs;
    std::vector<int> dims;  // prepare
    QMatrix matrix;         // apply
    // classical_emit: value from received classical messages, keyed "wire@pos"
    std::function<int(const std::map<std::string, int>&)> fn;
  };

  std::vector<Step> steps;

  static Step prepare(std::vector<int> reg_ids, std::vector<int> dims);
  static Step receive(std::string wire, std::string pos, int reg_id);
  static Step apply(std::string pos, QMatrix m, std::vector<int> reg_ids);
  static Step emit(std::string wire, std::string pos, int reg_id);
  static Step measure_emit(std::string wire, std::string pos, int reg_id);
  static Step classical_emit(std::string wire, std::string pos,
                             std::function<int(const std::map<std::string, int>&)> fn);
};

}  // namespace coinbox
