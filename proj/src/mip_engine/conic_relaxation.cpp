// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <cmath>
#include <stdexcept>

#include "bdc/relaxations.hpp"

namespace bdc::mip {

ConicRelaxation::ConicRelaxation(Matrix W, Vec r, Matrix V, Vec g)
    : w_(std::move(W)), r_(std::move(r)), v_(std::move(V)), g_(std::move(g)) {
  const std::size_t n = g_.size();
  if (w_.rows() == 0) w_ = Matrix(0, n);
  if (v_.rows() == 0) v_ = Matrix(0, n);
  if (w_.rows() != r_.size() || w_.cols() != n || v_.cols() != n)
    throw std::invalid_argument("ConicRelaxation: inconsistent data");
}

double ConicRelaxation::quadratic(const Vec& z) const {
  double q = dot(g_, z);
  if (v_.rows() > 0) {
    Vec vz = v_.multiply(z);
    q += dot(vz, vz);
  }
  return q;
}

double ConicRelaxation::objective(const Vec& z) const {
  return linear_ ? dot(*linear_, z) : quadratic(z);
}

bool ConicRelaxation::feasible(const Vec& z) const {
  if (w_.rows() > 0) {
    Vec wz = w_.multiply(z);
    for (std::size_t i = 0; i < wz.size(); ++i)
      if (wz[i] < r_[i] - feas_tol) return false;
  }
  if (cap_ && quadratic(z) > *cap_ + feas_tol * (1.0 + std::fabs(*cap_))) return false;
  return true;
}

RelaxResult ConicRelaxation::solve(const Vec& lb, const Vec& ub, const std::vector<ActiveRow>& rows,
                                   const WarmStart*) {
  const std::size_t n = g_.size();
  RelaxResult res;
  std::vector<int> col(n, -1);
  std::vector<std::size_t> free_vars;
  Vec fixed(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (lb[j] > ub[j]) {
      res.status = RelaxStatus::kInfeasible;
      return res;
    }
    if (lb[j] == ub[j]) {
      fixed[j] = lb[j];
    } else {
      col[j] = static_cast<int>(free_vars.size());
      free_vars.push_back(j);
    }
  }

  if (free_vars.empty()) {
    bool ok = feasible(lb);
    for (const auto& ar : rows) ok = ok && ar.row->satisfied(lb, feas_tol);
    if (!ok) {
      res.status = RelaxStatus::kInfeasible;
      return res;
    }
    res.status = RelaxStatus::kOptimal;
    res.z = lb;
    res.bound = objective(lb);
    return res;
  }

  const bool use_t = v_.rows() > 0 && (!linear_ || cap_);
  const std::size_t nf = free_vars.size();
  const std::size_t tcol = nf;
  ConicProblem p;
  p.c.assign(nf + (use_t ? 1 : 0), 0.0);
  double constant = 0.0;
  if (linear_) {
    for (std::size_t j = 0; j < n; ++j) {
      if (col[j] >= 0) p.c[static_cast<std::size_t>(col[j])] = (*linear_)[j];
      else constant += (*linear_)[j] * fixed[j];
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      if (col[j] >= 0) p.c[static_cast<std::size_t>(col[j])] = g_[j];
      else constant += g_[j] * fixed[j];
    }
    if (use_t) p.c[tcol] = 1.0;
  }
  p.A.cols = p.G.cols = static_cast<int>(p.c.size());

  // Linear rows a'y >= b become -a_F'y_F + s = -(b - a_X'y_X).
  auto add_ge = [&](const double* a, double b) {
    auto& row = p.G.add_row();
    double rhs = b;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] == 0.0) continue;
      if (col[j] >= 0) row.add(col[j], -a[j]);
      else rhs -= a[j] * fixed[j];
    }
    p.h.push_back(-rhs);
  };
  for (std::size_t i = 0; i < w_.rows(); ++i) add_ge(w_.row(i), r_[i]);
  Vec dense(n);
  for (const auto& ar : rows) {
    std::fill(dense.begin(), dense.end(), 0.0);
    for (const auto& [j, v] : ar.row->a.entries) dense[static_cast<std::size_t>(j)] = v;
    add_ge(dense.data(), ar.row->b);
  }
  for (std::size_t k = 0; k < nf; ++k) {
    p.G.add_row().add(static_cast<int>(k), -1.0);
    p.h.push_back(-lb[free_vars[k]]);
    p.G.add_row().add(static_cast<int>(k), 1.0);
    p.h.push_back(ub[free_vars[k]]);
  }
  if (use_t && cap_) {
    // t + g'y <= cap
    auto& row = p.G.add_row();
    double rhs = *cap_;
    for (std::size_t j = 0; j < n; ++j) {
      if (col[j] >= 0) row.add(col[j], g_[j]);
      else rhs -= g_[j] * fixed[j];
    }
    row.add(static_cast<int>(tcol), 1.0);
    p.h.push_back(rhs);
  }
  p.cones.push_back({ConeType::kNonneg, p.h.size()});
  if (use_t) {
    p.G.add_row().add(static_cast<int>(tcol), -0.5);
    p.h.push_back(0.5);
    for (std::size_t i = 0; i < v_.rows(); ++i) {
      auto& row = p.G.add_row();
      double h = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = v_(i, j);
        if (a == 0.0) continue;
        if (col[j] >= 0) row.add(col[j], -a);
        else h += a * fixed[j];
      }
      p.h.push_back(h);
    }
    p.G.add_row().add(static_cast<int>(tcol), 0.5);
    p.h.push_back(0.5);
    p.cones.push_back({ConeType::kSoc, v_.rows() + 2});
  }

  const ConicOutcome o = conic_solve(p);
  ++conic_solves_;
  if (o.status == ConicStatus::kPrimalInfeasible) {
    res.status = RelaxStatus::kInfeasible;
    return res;
  }
  if (o.status != ConicStatus::kOptimal) {
    res.status = RelaxStatus::kFailed;
    return res;
  }
  res.status = RelaxStatus::kOptimal;
  res.z = fixed;
  for (std::size_t k = 0; k < nf; ++k)
    res.z[free_vars[k]] = std::min(ub[free_vars[k]], std::max(lb[free_vars[k]], o.x[k]));
  res.bound = constant + std::min(o.primal_objective, o.dual_objective);
  return res;
}

}  // namespace bdc::mip
