// Copyright 2026 The Watertransport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WATERTRANSPORT_RATIONAL_HPP_
#define WATERTRANSPORT_RATIONAL_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wtp {

// All levels, mixing parameters and SAD weights are exact rationals.
using Rational = mpq_class;

// Raised for malformed user input (instance files, move lists, CNF text).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "3", "-2/7", "0.25", "1e-3" or ".5" exactly. Throws InputError.
Rational parse_rational(std::string_view text);

// Canonical exact form, e.g. "7261/3600" or "1".
std::string to_exact_string(const Rational& q);

// Decimal mirror with `digits` significant digits.
std::string to_decimal_string(const Rational& q, int digits = 17);

double to_double(const Rational& q);

// x / 2^64 for a raw 64-bit draw; lies in [0, 1).
Rational dyadic_from_bits(std::uint64_t bits);

// Hash over numerator and denominator limbs; equal values hash equal.
std::size_t hash_value(const Rational& q);

inline Rational half() { return Rational(1, 2); }

}  // namespace wtp

#endif  // WATERTRANSPORT_RATIONAL_HPP_
