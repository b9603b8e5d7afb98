// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdc/conic_solve.hpp"
#include "bdc/follower.hpp"
#include "bdc/model.hpp"

namespace bdc {

struct NormalizationSpec {
  enum class Family { kStandard, kUniform, kCoefficient };
  Family family = Family::kStandard;
  int p = 2;

  // "S1", "S2", "U1", "U2", "C1" or "C2"; throws std::invalid_argument.
  static NormalizationSpec parse(std::string_view text);
  std::string name() const;
  bool operator==(const NormalizationSpec&) const = default;
};

enum class Removal { kNone, kBound, kRelaxation, kIntegrality, kOptimality };
// "RN", "RB", "RR", "RI" or "RO"; throws std::invalid_argument.
Removal parse_removal(std::string_view text);
std::string to_string(Removal r);

// The convex set the disjunctions are intersected with:
//   Mbar x + Nbar y >= hbar,   Mtil x + Ntil y - htil in K.
// The rows of Mbar are the leader rows, the linking rows, the follower-only
// rows and finally the box [lb, ub] as 2n rows.
struct PolyhedronP {
  std::size_t n1 = 0, n2 = 0;
  Matrix Mbar, Nbar;
  Vec hbar;
  Matrix Mtil, Ntil;
  Vec htil;
  std::vector<std::size_t> cones;
  Vec lb, ub;
  std::size_t bound_rows_begin = 0;

  std::size_t num_linear() const { return hbar.size(); }
  std::size_t num_conic() const { return htil.size(); }
  bool contains(const Vec& x, const Vec& y, double tol = 1e-7) const;
};

// P for the continuous high-point relaxation over the box [lb, ub] (x first).
PolyhedronP make_polyhedron(const InstanceData& d, const Vec& lb, const Vec& ub);

// D_0:  q(y) <= q_hat, written as  Dt y - ct in Q  with
//       Dt = (-g'/2; V; g'/2),  ct = ((-1 - q_hat)/2; 0; (-1 + q_hat)/2).
// D_i:  A^i x <= f_i - B^i y_hat - 1.
struct Disjunction {
  enum class Kind { kObjective, kLinear };
  Kind kind = Kind::kObjective;
  std::size_t index = 0;  // 0 for the objective disjunction, otherwise the linking row (1-based)

  Matrix Dt;
  Vec ct;
  Rational q_hat;

  Vec a;  // A^i
  Rational rhs;
};

std::vector<Disjunction> build_disjunctions(const BilevelInstance& inst,
                                            const std::vector<long>& y_hat);
// Throws std::invalid_argument when y_hat is not integral.
std::vector<Disjunction> build_disjunctions(const BilevelInstance& inst, const Vec& y_hat);

struct RemovalOptions {
  Removal strategy = Removal::kNone;
  // Incumbent leader value for the optimality test; without it the test
  // degenerates to the integrality test.
  std::optional<double> upper_bound;
  double time_limit = 30.0;  // per subproblem
};

struct RemovalResult {
  std::vector<Disjunction> kept;
  std::size_t removed = 0;
  std::size_t timeouts = 0;  // subproblems that ran out of time (disjunction kept)
};

// Tests the linear disjunctions only; D_0 is always kept.
RemovalResult remove_redundant(const InstanceData& d, std::vector<Disjunction> ds,
                               const PolyhedronP& P, const RemovalOptions& opt);

// Column bookkeeping of a CG-SOCP. Every multiplier is a linear expression in
// the conic program's columns (sign-split pairs contribute +1 and -1).
struct CgsocpLayout {
  using Expr = std::vector<std::pair<int, double>>;
  std::vector<Expr> alpha, beta;
  Expr tau;
  struct Term {
    std::vector<Expr> pibar, pitil;
    std::vector<Expr> extra;  // sigma (one entry) or rho
  };
  std::vector<Term> terms;  // in disjunction order
};

struct CgsocpProblem {
  ConicProblem conic;
  CgsocpLayout layout;
  NormalizationSpec norm;
  const PolyhedronP* P = nullptr;
  std::vector<Disjunction> disjunctions;
  Vec x_star, y_star;
};

// min -tau + alpha'x* + beta'y* subject to the cut-generating constraints
// and one normalization row. Throws std::invalid_argument("all disjunctions
// removed") for an empty list. P must outlive the result.
CgsocpProblem build_cgsocp(const PolyhedronP& P, const std::vector<Disjunction>& ds,
                           const Vec& x_star, const Vec& y_star, NormalizationSpec norm);

enum class CutOutcome { kCut, kNoViolatedCut, kRayCut, kAlwaysViolated };
std::string to_string(CutOutcome o);

struct Multipliers {
  std::vector<Vec> pibar, pitil;
  std::vector<Vec> extra;  // sigma_i as a one-element vector, or rho
};

struct CgsocpSolution {
  CutOutcome outcome = CutOutcome::kNoViolatedCut;
  Cut cut;  // alpha'x + beta'y >= tau, filled for kCut, kRayCut and kAlwaysViolated
  double violation = -std::numeric_limits<double>::infinity();
  Multipliers multipliers;  // projected onto their cones
  ConicStatus solver_status = ConicStatus::kNumericalFailure;
  bool numerical_warning = false;
  int iterations = 0;
};

// The returned right-hand side is recomputed from the multipliers so that the
// cut is valid for every P ∩ D_i regardless of solver accuracy.
CgsocpSolution solve_cgsocp(const CgsocpProblem& prob, double min_violation = 1e-6);

// Drops coefficients below `threshold` in absolute value and lowers tau by
// max(a_j l_j, a_j u_j) for each of them.
Cut postprocess_cut(Cut cut, const Vec& lb, const Vec& ub, double threshold = 5e-6);

enum class SeparationStrategy { kOptimal, kGreedy };

struct SeparationConfig {
  SeparationStrategy strategy = SeparationStrategy::kOptimal;
  NormalizationSpec norm;
  Removal removal = Removal::kNone;
  std::optional<double> upper_bound;
  double min_violation = 1e-6;
  double removal_time_limit = 30.0;
};

struct SeparationResult {
  std::optional<Cut> cut;
  CutOutcome outcome = CutOutcome::kNoViolatedCut;
  double violation = -std::numeric_limits<double>::infinity();
  // Some follower point with q(y) < q(y*) was seen, so (x*, y*) is not bilevel
  // feasible.
  bool improving_found = false;
  bool follower_timeout = false;
  // A CG-SOCP solve failed numerically; no cut was taken from it.
  bool numerical_warning = false;
  std::vector<long> y_hat;  // the point the cut was derived from
  std::optional<double> upper_bound;  // incumbent used by optimality-based removal
};

struct SeparationStats {
  long calls = 0;
  long cgsocp_solves = 0;
  long removed = 0;            // disjunctions
  long cuts_with_removal = 0;  // cuts built after removing at least one disjunction
  long ray_cuts = 0;
  long always_violated = 0;
  long numerical_warnings = 0;
  double seconds = 0.0;  // excluding follower time
};

class Separator {
 public:
  Separator(const BilevelInstance& inst, FollowerSolver& follower);

  // (x*, y*) must lie in P.
  SeparationResult separate(const PolyhedronP& P, const Vec& x_star, const Vec& y_star,
                            const SeparationConfig& cfg);

  const SeparationStats& stats() const { return stats_; }

 private:
  // Returns true when a cut was stored in `out`.
  bool try_point(const PolyhedronP& P, const Vec& x_star, const Vec& y_star,
                 const std::vector<long>& y_hat, const SeparationConfig& cfg,
                 SeparationResult& out);

  const BilevelInstance& inst_;
  FollowerSolver& follower_;
  const InstanceData& data_;
  SeparationStats stats_;
};

}  // namespace bdc
