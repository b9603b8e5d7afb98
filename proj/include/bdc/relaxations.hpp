// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <vector>

#include "bdc/conic_solve.hpp"
#include "bdc/lin_solve.hpp"
#include "bdc/mip_engine.hpp"

namespace bdc::mip {

// Affine map z -> T z - t constrained to a second-order cone.
struct SocBlock {
  Matrix T;
  Vec t;
};

// min c'z  s.t.  G z >= b,  T_k z - t_k in Q,  bounds
// Cones are handled by an outer approximation: each solve re-optimizes the LP
// and appends supporting hyperplanes until the cone violation drops below
// cone_tol. The hyperplanes are globally valid and persist across solves.
class LpRelaxation : public Relaxation {
 public:
  LpRelaxation(Vec c, Matrix G, Vec b, std::vector<SocBlock> cones = {});

  std::size_t num_vars() const override { return c_.size(); }
  RelaxResult solve(const Vec& lb, const Vec& ub, const std::vector<ActiveRow>& rows,
                    const WarmStart* warm) override;
  double objective(const Vec& z) const override;
  bool feasible(const Vec& z) const override;
  bool is_integer(std::size_t j) const override { return integer_.empty() || integer_[j]; }

  void set_integer(std::vector<bool> integer) { integer_ = std::move(integer); }
  double cone_violation(const Vec& z) const;
  std::size_t num_oa_rows() const { return oa_.size(); }
  long lp_solves() const { return lp_solves_; }

  double feas_tol = 1e-6;
  double cone_tol = 1e-6;
  int max_oa_rounds = 200;

 private:
  Vec c_;
  Matrix g_;
  Vec b_;
  std::vector<SocBlock> cones_;
  std::vector<Row> oa_;
  std::vector<bool> integer_;
  long lp_solves_ = 0;
};

// Integer convex quadratic program
//   min ||V y||^2 + g'y   (or a linear objective)
//   s.t. W y >= r,  optional ||V y||^2 + g'y <= cap,  bounds
// solved node by node as an SOCP through the epigraph
//   ((1 + t)/2, V y, (1 - t)/2) in Q.
// Variables at a fixed bound are substituted out before each solve.
class ConicRelaxation : public Relaxation {
 public:
  ConicRelaxation(Matrix W, Vec r, Matrix V, Vec g);

  std::size_t num_vars() const override { return g_.size(); }
  RelaxResult solve(const Vec& lb, const Vec& ub, const std::vector<ActiveRow>& rows,
                    const WarmStart* warm) override;
  double objective(const Vec& z) const override;
  bool feasible(const Vec& z) const override;

  void set_linear_objective(Vec d) { linear_ = std::move(d); }
  void set_quadratic_cap(double cap) { cap_ = cap; }
  double quadratic(const Vec& z) const;
  long conic_solves() const { return conic_solves_; }

  double feas_tol = 1e-7;

 private:
  Matrix w_;
  Vec r_;
  Matrix v_;
  Vec g_;
  std::optional<Vec> linear_;
  std::optional<double> cap_;
  long conic_solves_ = 0;
};

}  // namespace bdc::mip
