// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdc/dense.hpp"
#include "bdc/rational.hpp"

namespace bdc {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer bilevel program with a convex-quadratic follower.
//
//   min  c'x + d'y
//   s.t. M x + N y >= h
//        Mt x + Nt y - ht in K          (product of second-order cones)
//        y in argmin { y'V'Vy + g'y : A x + B y >= f, CY y >= UY, lb <= y <= ub }
//        lb <= (x, y) <= ub, (x, y) integer
struct BilevelInstance {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  RVec c, d;
  RMat M, N;
  RVec h;
  RMat Mt, Nt;
  RVec ht;
  std::vector<std::size_t> cones;  // SOC block sizes partitioning the rows of Mt
  RMat A, B;
  RVec f;
  RMat V;
  RVec g;
  RMat CY;
  RVec UY;
  std::vector<long> lb, ub;  // length n1 + n2, x first

  std::size_t n() const { return n1 + n2; }
  std::size_t m1() const { return h.size(); }
  std::size_t mt1() const { return ht.size(); }
  std::size_t m2() const { return f.size(); }
  std::size_t nY() const { return UY.size(); }
  std::size_t n3() const { return V.rows; }

  bool is_binary() const;
  // V and g integer, hence q(y) is integer at integer y.
  bool follower_objective_integral() const;
  // Throws ValidationError naming the violated invariant.
  void validate() const;

  bool operator==(const BilevelInstance& o) const;
};

// Floating-point copy of an instance used by the solvers.
struct InstanceData {
  std::size_t n1 = 0, n2 = 0;
  Vec c, d;
  Matrix M, N;
  Vec h;
  Matrix Mt, Nt;
  Vec ht;
  std::vector<std::size_t> cones;
  Matrix A, B;
  Vec f;
  Matrix V;
  Vec g;
  Matrix R;  // V'V
  Matrix CY;
  Vec UY;
  Vec lb, ub;
  bool integral_objective = false;

  explicit InstanceData(const BilevelInstance& inst);
  std::size_t n() const { return n1 + n2; }
  double leader_objective(const Vec& x, const Vec& y) const;
  double follower_objective(const Vec& y) const;
};

struct Point {
  Vec x;
  Vec y;
};

enum class CutScope { kGlobal, kLocal };

// alpha'x + beta'y >= tau
struct Cut {
  Vec alpha;
  Vec beta;
  double tau = 0.0;
  CutScope scope = CutScope::kGlobal;
  long node = -1;  // owner node for local cuts

  double violation(const Vec& x, const Vec& y) const;
  bool is_always_violated() const;
  static Cut always_violated(std::size_t n1, std::size_t n2);
};

// q(y) = y'Ry + g'y with R = V'V.
class FollowerQuadratic {
 public:
  explicit FollowerQuadratic(const BilevelInstance& inst);
  double value(const Vec& y) const;
  Vec gradient(const Vec& y) const;
  Rational exact(const std::vector<long>& y) const;

 private:
  const BilevelInstance* inst_;
  Matrix R_;
  Vec g_;
};

// Exact q(y) for integer y.
Rational eval_follower_objective(const BilevelInstance& inst, const std::vector<long>& y);
// Exact q(y) for rational y; throws ValidationError on a size mismatch.
Rational eval_follower_objective(const BilevelInstance& inst, const RVec& y);

enum class RunStatus { kOptimal, kFeasible, kInfeasible, kUnknown, kTimeLimit };
std::string to_string(RunStatus s);

struct RunRecord {
  std::string instance;
  std::string setting;
  double runtime = 0.0;
  std::optional<double> gap, gap_star, rgap, rgap_star;
  long n_node = 0;
  long n_icut = 0;
  long n_fcut = 0;
  long n_red = 0;
  double t_follower = 0.0;
  double t_separation = 0.0;
  RunStatus status = RunStatus::kUnknown;
};

// Returns Phi(x), or nullopt when the follower problem at x is infeasible.
using ValueFunctionOracle = std::function<std::optional<Rational>(const std::vector<long>& x)>;

// Integer point with all leader, conic, linking, follower and bound
// constraints satisfied (exact arithmetic).
bool is_hpr_feasible(const BilevelInstance& inst, const std::vector<long>& x,
                     const std::vector<long>& y);
bool is_bilevel_feasible(const BilevelInstance& inst, const Point& p,
                         const ValueFunctionOracle& follower_oracle);

// Rounds p to integers when every entry is within tol of one.
std::optional<std::vector<long>> integer_vector(const Vec& v, double tol = 1e-6);

}  // namespace bdc
