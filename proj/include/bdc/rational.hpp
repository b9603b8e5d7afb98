// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bdc {

using Rational = mpq_class;
using RVec = std::vector<Rational>;

// Dense row-major matrix of rationals.
struct RMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  RMat() = default;
  RMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool operator==(const RMat& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

// Accepts "p", "p/q" and finite decimals such as "-1.25" or "3e-2".
// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

bool is_integer(const Rational& q);
double to_double(const Rational& q);
// Largest integer <= q / smallest integer >= q.
mpz_class floor_of(const Rational& q);
mpz_class ceil_of(const Rational& q);

}  // namespace bdc
