// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bdc/bilevel.hpp"

namespace bdc::detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline mip::Row to_row(const Cut& c) {
  mip::Row r;
  const std::size_t n1 = c.alpha.size();
  for (std::size_t j = 0; j < n1; ++j) r.a.add(static_cast<int>(j), c.alpha[j]);
  for (std::size_t j = 0; j < c.beta.size(); ++j) r.a.add(static_cast<int>(n1 + j), c.beta[j]);
  r.b = c.tau;
  return r;
}

inline void split(const InstanceData& d, const Vec& z, Vec& x, Vec& y) {
  x.assign(z.begin(), z.begin() + static_cast<long>(d.n1));
  y.assign(z.begin() + static_cast<long>(d.n1), z.end());
}

inline bool leader_objective_integral(const InstanceData& d) {
  auto integral = [](const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return a == std::round(a); });
  };
  return integral(d.c) && integral(d.d);
}

inline Rational leader_value(const BilevelInstance& inst, const std::vector<long>& x,
                             const std::vector<long>& y) {
  Rational z = 0;
  for (std::size_t j = 0; j < inst.n1; ++j) z += inst.c[j] * x[j];
  for (std::size_t j = 0; j < inst.n2; ++j) z += inst.d[j] * y[j];
  return z;
}

// Stores an integral point as the result's best point.
inline void set_best(const BilevelInstance& inst, const Vec& z, BilevelResult& out) {
  auto zi = integer_vector(z);
  std::vector<long> x(zi->begin(), zi->begin() + static_cast<long>(inst.n1));
  std::vector<long> y(zi->begin() + static_cast<long>(inst.n1), zi->end());
  out.z_star = leader_value(inst, x, y);
  out.best = Point{Vec(x.begin(), x.end()), Vec(y.begin(), y.end())};
  out.best_x = std::move(x);
  out.best_y = std::move(y);
}

}  // namespace bdc::detail
