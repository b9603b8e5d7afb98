// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <cmath>

#include "bdc/cutgen.hpp"
#include "bdc/relaxations.hpp"

namespace bdc {

namespace {

std::vector<mip::SocBlock> soc_blocks(const PolyhedronP& P) {
  std::vector<mip::SocBlock> out;
  std::size_t r0 = 0;
  const std::size_t n = P.n1 + P.n2;
  for (std::size_t k : P.cones) {
    mip::SocBlock b;
    b.T = Matrix(k, n);
    b.t.assign(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t j = 0; j < P.n1; ++j) b.T(r, j) = P.Mtil(r0 + r, j);
      for (std::size_t j = 0; j < P.n2; ++j) b.T(r, P.n1 + j) = P.Ntil(r0 + r, j);
      b.t[r] = P.htil[r0 + r];
    }
    out.push_back(std::move(b));
    r0 += k;
  }
  return out;
}

// Relaxation of P ∩ D_i with the leader objective. The box rows of P are left
// to the variable bounds.
mip::LpRelaxation restricted(const InstanceData& d, const PolyhedronP& P, const Disjunction& di,
                             std::optional<double> cap) {
  const std::size_t n1 = P.n1, n2 = P.n2, n = n1 + n2;
  const std::size_t base = P.bound_rows_begin;
  Matrix G(base + 1 + (cap ? 1 : 0), n);
  Vec b(G.rows());
  for (std::size_t r = 0; r < base; ++r) {
    for (std::size_t j = 0; j < n1; ++j) G(r, j) = P.Mbar(r, j);
    for (std::size_t j = 0; j < n2; ++j) G(r, n1 + j) = P.Nbar(r, j);
    b[r] = P.hbar[r];
  }
  // -A^i x >= -(f_i - B^i y_hat - 1)
  for (std::size_t j = 0; j < n1; ++j) G(base, j) = -di.a[j];
  b[base] = -to_double(di.rhs);
  Vec c(n);
  for (std::size_t j = 0; j < n1; ++j) c[j] = d.c[j];
  for (std::size_t j = 0; j < n2; ++j) c[n1 + j] = d.d[j];
  if (cap) {
    for (std::size_t j = 0; j < n; ++j) G(base + 1, j) = -c[j];
    b[base + 1] = -*cap;
  }
  return mip::LpRelaxation(std::move(c), std::move(G), std::move(b), soc_blocks(P));
}

bool bound_redundant(const PolyhedronP& P, const Disjunction& di) {
  double lo = 0.0;
  for (std::size_t j = 0; j < P.n1; ++j) lo += std::min(di.a[j] * P.ub[j], di.a[j] * P.lb[j]);
  return lo > to_double(di.rhs + 1) + 1e-9;
}

bool leader_objective_integral(const InstanceData& d) {
  auto integral = [](const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return a == std::round(a); });
  };
  return integral(d.c) && integral(d.d);
}

enum class Verdict { kKeep, kRemove, kTimeout };

Verdict test_one(const InstanceData& d, const PolyhedronP& P, const Disjunction& di,
                 const RemovalOptions& opt) {
  if (bound_redundant(P, di)) return Verdict::kRemove;
  if (opt.strategy == Removal::kBound) return Verdict::kKeep;

  std::optional<double> cap;
  if (opt.strategy == Removal::kOptimality && opt.upper_bound) cap = *opt.upper_bound - 1e-5;
  auto relax = restricted(d, P, di, cap);
  if (opt.strategy == Removal::kRelaxation) {
    const auto r = relax.solve(P.lb, P.ub, {}, nullptr);
    return r.status == mip::RelaxStatus::kInfeasible ? Verdict::kRemove : Verdict::kKeep;
  }
  mip::Config cfg;
  cfg.solution_limit = 1;
  cfg.time_limit = opt.time_limit;
  cfg.cutoff = cap;
  cfg.objective_integral = leader_objective_integral(d);
  mip::Engine e(relax, P.lb, P.ub, cfg);
  const auto r = e.solve();
  if (r.status == mip::Status::kInfeasible) return Verdict::kRemove;
  if (r.status == mip::Status::kTimeLimit) return Verdict::kTimeout;
  return Verdict::kKeep;
}

}  // namespace

RemovalResult remove_redundant(const InstanceData& d, std::vector<Disjunction> ds,
                               const PolyhedronP& P, const RemovalOptions& opt) {
  RemovalResult out;
  if (opt.strategy == Removal::kNone) {
    out.kept = std::move(ds);
    return out;
  }
  for (auto& di : ds) {
    if (di.kind == Disjunction::Kind::kObjective) {
      out.kept.push_back(std::move(di));
      continue;
    }
    switch (test_one(d, P, di, opt)) {
      case Verdict::kRemove: ++out.removed; break;
      case Verdict::kTimeout: ++out.timeouts; [[fallthrough]];
      case Verdict::kKeep: out.kept.push_back(std::move(di)); break;
    }
  }
  return out;
}

}  // namespace bdc
