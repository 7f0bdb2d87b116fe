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

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace coinbox {

/** Exact rational number. All probabilities in the library are carried as
    Rational; doubles appear only in renderings and statistical thresholds. */
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optional sign, decimal digits). Throws std::invalid_argument.
Rational parse_fraction(const std::string& text);

/// Renders as "p/q", or "p" when the denominator is 1.
std::string fraction_str(const Rational& r);

double to_double(const Rational& r);

}  // namespace coinbox
