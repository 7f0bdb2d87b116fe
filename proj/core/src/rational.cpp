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
#include "coinbox/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace coinbox {

namespace {
bool digits_only(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}
}  // namespace

Rational parse_fraction(const std::string& text) {
  // Grammar: optional sign, digits, optionally "/" digits.
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  std::string num = s, den = "1";
  if (auto slash = s.find('/'); slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  if (!digits_only(num) || !digits_only(den))
    throw std::invalid_argument("not a fraction: '" + text + "'");
  boost::multiprecision::cpp_int n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  Rational r(n, d);
  return negative ? -r : r;
}

std::string fraction_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace coinbox
