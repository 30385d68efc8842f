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

#include "watertransport/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace wtp {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  const std::string original(text);
  if (s.empty()) throw InputError("empty number");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw InputError("malformed rational '" + original + "'");
    }
    mpz_class d{std::string(den), 10};
    if (d == 0) throw InputError("zero denominator in '" + original + "'");
    result = Rational(mpz_class(std::string(num), 10), d);
    result.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_part = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
        exp_negative = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      if (!all_digits(exp_part) || exp_part.size() > 6) {
        throw InputError("malformed exponent in '" + original + "'");
      }
      exponent = std::stol(std::string(exp_part));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      int_part = s.substr(0, dot);
      frac_part = s.substr(dot + 1);
    }
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw InputError("malformed number '" + original + "'");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
    long scale = exponent - static_cast<long>(frac_part.size());
    if (scale >= 0) {
      result = Rational(mantissa * pow10(static_cast<unsigned long>(scale)));
    } else {
      result = Rational(mantissa, pow10(static_cast<unsigned long>(-scale)));
      result.canonicalize();
    }
  }
  return negative ? Rational(-result) : result;
}

std::string to_exact_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_str();
}

std::string to_decimal_string(const Rational& q, int digits) {
  mpf_class f(q, 256);
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (mant.empty() || mant == "0") return "0";
  bool negative = mant.front() == '-';
  if (negative) mant.erase(0, 1);
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
  } else if (static_cast<std::size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp)) + "." +
          mant.substr(static_cast<std::size_t>(exp));
  }
  return negative ? "-" + out : out;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational dyadic_from_bits(std::uint64_t bits) {
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(bits), 0, 0, &bits);
  Rational r(num);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), 64);
  return r;
}

std::size_t hash_value(const Rational& q) {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](const mpz_class& z) {
    const std::size_t limbs = mpz_size(z.get_mpz_t());
    h ^= static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 2);
    h *= 1099511628211ull;
    for (std::size_t i = 0; i < limbs; ++i) {
      h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i)));
      h *= 1099511628211ull;
    }
  };
  mix(q.get_num());
  mix(q.get_den());
  return h;
}

}  // namespace wtp
