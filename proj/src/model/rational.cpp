// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include "bdc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace bdc {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  std::string t(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(t, 10);
}

Rational parse_decimal(std::string_view s) {
  std::string_view mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view es = s.substr(e + 1);
    mant = s.substr(0, e);
    exp10 = parse_integer(es).get_si();
    if (exp10 > 400 || exp10 < -400) throw std::invalid_argument("exponent out of range");
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long frac = 0;
  auto dot = mant.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(mant);
  } else {
    std::string_view ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw std::invalid_argument("bad decimal");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw std::invalid_argument("bad decimal '" + std::string(s) + "'");
    digits = std::string(ip) + std::string(fp);
    frac = static_cast<long>(fp.size());
  }
  if (!all_digits(digits)) throw std::invalid_argument("bad decimal '" + std::string(s) + "'");
  mpz_class num(digits, 10);
  long shift = exp10 - frac;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(num * pow10) : Rational(num, pow10);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class p = parse_integer(text.substr(0, slash));
    std::string_view qs = text.substr(slash + 1);
    if (!all_digits(qs)) throw std::invalid_argument("bad denominator '" + std::string(text) + "'");
    mpz_class q(std::string(qs), 10);
    if (q == 0) throw std::invalid_argument("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
  return Rational(parse_integer(text));
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

double to_double(const Rational& q) { return q.get_d(); }

mpz_class floor_of(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil_of(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace bdc
