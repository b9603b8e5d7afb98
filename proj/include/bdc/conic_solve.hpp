// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bdc/dense.hpp"

namespace bdc {

enum class ConeType { kNonneg, kSoc };

struct ConeBlock {
  ConeType type = ConeType::kNonneg;
  std::size_t dim = 0;
};

// min c'x  s.t.  A x = b,  G x + s = h,  s in K
// where K is the product of the blocks in `cones` (applied to the rows of G
// in order). A second-order block of size k is {u : u_0 >= ||u_{1..k-1}||}.
struct ConicProblem {
  Vec c;
  SparseMatrix A;
  Vec b;
  SparseMatrix G;
  Vec h;
  std::vector<ConeBlock> cones;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_eq() const { return b.size(); }
  std::size_t num_cone_rows() const { return h.size(); }
  void validate() const;
};

enum class ConicStatus { kOptimal, kPrimalInfeasible, kDualInfeasible, kNumericalFailure };

// Optimal: x, s primal; y, z dual (A'y + G'z + c = 0, z in K).
// PrimalInfeasible: y, z with A'y + G'z = 0, z in K, h'z + b'y = -1.
// DualInfeasible: x, s with A x = 0, G x + s = 0, s in K, c'x = -1.
struct ConicOutcome {
  ConicStatus status = ConicStatus::kNumericalFailure;
  Vec x, s, y, z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool reduced_accuracy = false;
};

struct ConicOptions {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  int max_iterations = 200;
};

ConicOutcome conic_solve(const ConicProblem& p, const ConicOptions& opt = {});

struct ConicDuals {
  Vec equality;             // y
  std::vector<Vec> blocks;  // z split per cone block
};
// Throws std::logic_error unless the outcome is Optimal.
ConicDuals conic_extract_duals(const ConicProblem& p, const ConicOutcome& o);

// Residuals recomputed from scratch, each scaled by 1 + the norm of the
// matching data vector.
struct KktResiduals {
  double primal_eq = 0.0;    // ||Ax - b||
  double primal_cone = 0.0;  // ||Gx + s - h||
  double dual = 0.0;         // ||A'y + G'z + c||
  double gap = 0.0;          // |c'x + b'y + h'z| / (1 + |c'x|)
  double complementarity = 0.0;  // s'z / (1 + |c'x|)
  double cone_violation = 0.0;   // max distance of s, z outside K
  double max() const;
};
KktResiduals conic_residuals(const ConicProblem& p, const ConicOutcome& o);

namespace cone {

// How far u lies outside K (0 when inside).
double violation(const std::vector<ConeBlock>& cones, const Vec& u);
// Euclidean projection onto K.
Vec project(const std::vector<ConeBlock>& cones, const Vec& u);
// Euclidean projection of one second-order cone vector.
Vec project_soc(const Vec& u);
// Largest alpha with u + alpha d in K (infinity when unbounded); u must be
// interior.
double max_step(const std::vector<ConeBlock>& cones, const Vec& u, const Vec& d);

// Nesterov-Todd scaling point for one block: W z = W^{-1} s = lambda.
struct Scaling {
  ConeType type = ConeType::kNonneg;
  Vec w;  // nonneg: sqrt(s/z); soc: v with v'Jv = 1
  double beta = 1.0;
};
std::vector<Scaling> nt_scaling(const std::vector<ConeBlock>& cones, const Vec& s, const Vec& z);
Vec apply_w(const std::vector<ConeBlock>& cones, const std::vector<Scaling>& sc, const Vec& u);
Vec apply_winv(const std::vector<ConeBlock>& cones, const std::vector<Scaling>& sc, const Vec& u);
// Jordan product and its inverse (solve lambda o x = r).
Vec jordan(const std::vector<ConeBlock>& cones, const Vec& a, const Vec& b);
Vec jordan_div(const std::vector<ConeBlock>& cones, const Vec& lambda, const Vec& r);
Vec identity(const std::vector<ConeBlock>& cones);
std::size_t degree(const std::vector<ConeBlock>& cones);

}  // namespace cone
}  // namespace bdc
