// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <vector>

#include "bdc/dense.hpp"

namespace bdc {

// min c'z  s.t.  G z >= b,  l <= z <= u  (all bounds finite)
struct LpProblem {
  Vec c;
  Matrix G;
  Vec b;
  Vec l, u;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return b.size(); }
};

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper };

// Status of the n structurals followed by the m row slacks.
struct LpBasis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

struct LpOutcome {
  LpStatus status = LpStatus::kNumericalFailure;
  Vec z;
  double objective = 0.0;
  Vec duals;           // y >= 0 with c - G'y = reduced costs
  Vec reduced_costs;
  LpBasis basis;
  // Infeasible: r >= 0 with r'b - sum_j max((G'r)_j l_j, (G'r)_j u_j) > 0.
  Vec farkas;
  double farkas_value = 0.0;
  Vec ray;  // Unbounded: improving direction
  int iterations = 0;
};

struct LpOptions {
  double tol = 1e-7;
  int max_iterations = 0;  // 0 picks a size-dependent cap
  int refactor_every = 64;
};

LpOutcome lp_solve(const LpProblem& p, const LpOptions& opt = {}, const LpBasis* warm = nullptr);

// Appends rows G_new z >= b_new. A basis for the old problem stays usable
// through extend_basis (the new slacks enter as basic).
LpProblem lp_add_rows(LpProblem p, const Matrix& rows, const Vec& rhs);
LpProblem lp_change_bounds(LpProblem p, const Vec& l, const Vec& u);
LpBasis extend_basis(const LpBasis& basis, std::size_t num_vars, std::size_t new_rows);

// Certificate value r'b - sum_j max((G'r)_j l_j, (G'r)_j u_j); positive means
// the box and rows are jointly infeasible. Negative entries of r are rejected
// by returning -inf.
double farkas_value(const LpProblem& p, const Vec& r);

}  // namespace bdc
