// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <chrono>
#include <stdexcept>

#include "bdc/bilevel.hpp"
#include "bdc/follower.hpp"

namespace bdc {

BilevelResult brute_force(const BilevelInstance& inst, double max_points) {
  const auto t0 = std::chrono::steady_clock::now();
  inst.validate();
  double count = 1.0;
  for (std::size_t j = 0; j < inst.n1; ++j)
    count *= static_cast<double>(inst.ub[j] - inst.lb[j] + 1);
  if (count > max_points)
    throw std::invalid_argument("brute_force: leader box has too many points");

  FollowerSolver fs(inst);
  fs.lexicographic_ties = false;
  const InstanceData& d = fs.data();
  BilevelResult out;
  out.record.setting = "brute";

  std::vector<long> x(inst.lb.begin(), inst.lb.begin() + static_cast<long>(inst.n1));
  bool done = false;
  while (!done) {
    const Vec xv(x.begin(), x.end());
    const auto phi = fs.solve_optimal(xv);
    if (phi.status == FollowerStatus::kOptimal) {
      const auto best = fs.best_for_leader(xv, phi.q, d.d, true);
      if (best.status == FollowerStatus::kOptimal) {
        Rational z = 0;
        for (std::size_t j = 0; j < inst.n1; ++j) z += inst.c[j] * x[j];
        for (std::size_t j = 0; j < inst.n2; ++j) z += inst.d[j] * best.y[j];
        if (!out.z_star || z < *out.z_star) {
          out.z_star = z;
          out.best_x = x;
          out.best_y = best.y;
        }
      }
    }
    // next leader point
    std::size_t j = 0;
    for (; j < inst.n1; ++j) {
      if (x[j] < inst.ub[j]) {
        ++x[j];
        break;
      }
      x[j] = inst.lb[j];
    }
    done = j == inst.n1;
  }

  if (out.z_star) {
    out.status = RunStatus::kOptimal;
    out.best = Point{Vec(out.best_x->begin(), out.best_x->end()),
                     Vec(out.best_y->begin(), out.best_y->end())};
    out.lower_bound = to_double(*out.z_star);
  } else {
    out.status = RunStatus::kInfeasible;
  }
  out.record.status = out.status;
  out.record.t_follower = fs.stats().seconds;
  out.record.runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  apply_gaps(out, std::nullopt);
  return out;
}

}  // namespace bdc
