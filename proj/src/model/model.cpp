// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include "bdc/model.hpp"

#include <cmath>
#include <numeric>

namespace bdc {
namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

void check_shape(const RMat& m, std::size_t r, std::size_t c, const char* name) {
  require(m.rows == r && m.cols == c && m.data.size() == r * c,
          std::string("dimension mismatch in ") + name + ": expected " + std::to_string(r) +
              "x" + std::to_string(c) + ", got " + std::to_string(m.rows) + "x" +
              std::to_string(m.cols));
}

template <class V>
void check_len(const V& v, std::size_t n, const char* name) {
  require(v.size() == n, std::string("dimension mismatch in ") + name + ": expected length " +
                             std::to_string(n) + ", got " + std::to_string(v.size()));
}

bool all_integer(const RMat& m) {
  for (const auto& q : m.data)
    if (!is_integer(q)) return false;
  return true;
}
bool all_integer(const RVec& v) {
  for (const auto& q : v)
    if (!is_integer(q)) return false;
  return true;
}

Matrix to_matrix(const RMat& m) {
  Matrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = to_double(m(i, j));
  return out;
}

Vec to_vec(const RVec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

Rational row_dot(const RMat& m, std::size_t i, const std::vector<long>& v) {
  Rational s = 0;
  for (std::size_t j = 0; j < m.cols; ++j)
    if (v[j] != 0 && m(i, j) != 0) s += m(i, j) * v[j];
  return s;
}

}  // namespace

bool BilevelInstance::is_binary() const {
  for (std::size_t j = 0; j < lb.size(); ++j)
    if (lb[j] != 0 || ub[j] != 1) return false;
  return true;
}

bool BilevelInstance::follower_objective_integral() const {
  return all_integer(V) && all_integer(g);
}

void BilevelInstance::validate() const {
  const std::size_t m1v = m1(), mtv = mt1(), m2v = m2(), nyv = nY();
  check_len(c, n1, "c");
  check_len(d, n2, "d");
  check_shape(M, m1v, n1, "M");
  check_shape(N, m1v, n2, "N");
  check_shape(Mt, mtv, n1, "Mt");
  check_shape(Nt, mtv, n2, "Nt");
  check_shape(A, m2v, n1, "A");
  check_shape(B, m2v, n2, "B");
  require(V.cols == n2 && V.data.size() == V.rows * V.cols, "dimension mismatch in V");
  require(V.rows <= n2 || n2 == 0, "V must have at most n2 rows");
  check_len(g, n2, "g");
  check_shape(CY, nyv, n2, "CY");
  check_len(lb, n(), "lb");
  check_len(ub, n(), "ub");
  require(std::accumulate(cones.begin(), cones.end(), std::size_t{0}) == mtv,
          "cone block sizes must sum to the number of conic rows");
  for (std::size_t k : cones) require(k >= 1, "cone block of size zero");
  require(all_integer(A), "non-integer entry in A");
  require(all_integer(B), "non-integer entry in B");
  require(all_integer(f), "non-integer entry in f");
  for (std::size_t i = 0; i < m2v; ++i) {
    bool nz = false;
    for (std::size_t j = 0; j < n1 && !nz; ++j) nz = A(i, j) != 0;
    for (std::size_t j = 0; j < n2 && !nz; ++j) nz = B(i, j) != 0;
    require(nz, "zero linking row " + std::to_string(i));
  }
  for (std::size_t j = 0; j < n(); ++j)
    require(lb[j] <= ub[j], "lb > ub for variable " + std::to_string(j));
}

bool BilevelInstance::operator==(const BilevelInstance& o) const {
  return n1 == o.n1 && n2 == o.n2 && c == o.c && d == o.d && M == o.M && N == o.N && h == o.h &&
         Mt == o.Mt && Nt == o.Nt && ht == o.ht && cones == o.cones && A == o.A && B == o.B &&
         f == o.f && V == o.V && g == o.g && CY == o.CY && UY == o.UY && lb == o.lb && ub == o.ub;
}

InstanceData::InstanceData(const BilevelInstance& inst)
    : n1(inst.n1),
      n2(inst.n2),
      c(to_vec(inst.c)),
      d(to_vec(inst.d)),
      M(to_matrix(inst.M)),
      N(to_matrix(inst.N)),
      h(to_vec(inst.h)),
      Mt(to_matrix(inst.Mt)),
      Nt(to_matrix(inst.Nt)),
      ht(to_vec(inst.ht)),
      cones(inst.cones),
      A(to_matrix(inst.A)),
      B(to_matrix(inst.B)),
      f(to_vec(inst.f)),
      V(to_matrix(inst.V)),
      g(to_vec(inst.g)),
      CY(to_matrix(inst.CY)),
      UY(to_vec(inst.UY)),
      integral_objective(inst.follower_objective_integral()) {
  if (V.cols() != n2) V = Matrix(0, n2);
  R = Matrix(n2, n2);
  for (std::size_t k = 0; k < V.rows(); ++k)
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < n2; ++j) R(i, j) += V(k, i) * V(k, j);
  lb.resize(inst.lb.size());
  ub.resize(inst.ub.size());
  for (std::size_t j = 0; j < inst.lb.size(); ++j) {
    lb[j] = static_cast<double>(inst.lb[j]);
    ub[j] = static_cast<double>(inst.ub[j]);
  }
}

double InstanceData::leader_objective(const Vec& x, const Vec& y) const {
  return dot(c, x) + dot(d, y);
}

double InstanceData::follower_objective(const Vec& y) const {
  double q = dot(g, y);
  for (std::size_t k = 0; k < V.rows(); ++k) {
    double v = dot(V.row_vec(k), y);
    q += v * v;
  }
  return q;
}

double Cut::violation(const Vec& x, const Vec& y) const { return tau - dot(alpha, x) - dot(beta, y); }

bool Cut::is_always_violated() const {
  return norm_inf(alpha) == 0.0 && norm_inf(beta) == 0.0 && tau > 0.0;
}

Cut Cut::always_violated(std::size_t n1, std::size_t n2) {
  Cut c;
  c.alpha.assign(n1, 0.0);
  c.beta.assign(n2, 0.0);
  c.tau = 1.0;
  return c;
}

FollowerQuadratic::FollowerQuadratic(const BilevelInstance& inst) : inst_(&inst) {
  InstanceData data(inst);
  R_ = data.R;
  g_ = data.g;
}

double FollowerQuadratic::value(const Vec& y) const {
  Vec ry = R_.multiply(y);
  return dot(y, ry) + dot(g_, y);
}

Vec FollowerQuadratic::gradient(const Vec& y) const {
  Vec gr = R_.multiply(y);
  for (std::size_t i = 0; i < gr.size(); ++i) gr[i] = 2.0 * gr[i] + g_[i];
  return gr;
}

Rational FollowerQuadratic::exact(const std::vector<long>& y) const {
  return eval_follower_objective(*inst_, y);
}

Rational eval_follower_objective(const BilevelInstance& inst, const std::vector<long>& y) {
  require(y.size() == inst.n2, "dimension mismatch in follower point");
  Rational q = 0;
  for (std::size_t k = 0; k < inst.V.rows; ++k) {
    Rational v = row_dot(inst.V, k, y);
    q += v * v;
  }
  for (std::size_t j = 0; j < inst.n2; ++j) q += inst.g[j] * y[j];
  return q;
}

Rational eval_follower_objective(const BilevelInstance& inst, const RVec& y) {
  require(y.size() == inst.n2, "dimension mismatch in follower point");
  Rational q = 0;
  for (std::size_t k = 0; k < inst.V.rows; ++k) {
    Rational v = 0;
    for (std::size_t j = 0; j < inst.n2; ++j) v += inst.V(k, j) * y[j];
    q += v * v;
  }
  for (std::size_t j = 0; j < inst.n2; ++j) q += inst.g[j] * y[j];
  return q;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kOptimal: return "Optimal";
    case RunStatus::kFeasible: return "Feasible";
    case RunStatus::kInfeasible: return "Infeasible";
    case RunStatus::kUnknown: return "Unknown";
    case RunStatus::kTimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

bool is_hpr_feasible(const BilevelInstance& inst, const std::vector<long>& x,
                     const std::vector<long>& y) {
  if (x.size() != inst.n1 || y.size() != inst.n2) return false;
  for (std::size_t j = 0; j < inst.n1; ++j)
    if (x[j] < inst.lb[j] || x[j] > inst.ub[j]) return false;
  for (std::size_t j = 0; j < inst.n2; ++j)
    if (y[j] < inst.lb[inst.n1 + j] || y[j] > inst.ub[inst.n1 + j]) return false;
  for (std::size_t i = 0; i < inst.m1(); ++i)
    if (row_dot(inst.M, i, x) + row_dot(inst.N, i, y) < inst.h[i]) return false;
  for (std::size_t i = 0; i < inst.m2(); ++i)
    if (row_dot(inst.A, i, x) + row_dot(inst.B, i, y) < inst.f[i]) return false;
  for (std::size_t i = 0; i < inst.nY(); ++i)
    if (row_dot(inst.CY, i, y) < inst.UY[i]) return false;
  std::size_t r0 = 0;
  for (std::size_t k : inst.cones) {
    RVec u(k);
    for (std::size_t t = 0; t < k; ++t)
      u[t] = row_dot(inst.Mt, r0 + t, x) + row_dot(inst.Nt, r0 + t, y) - inst.ht[r0 + t];
    if (u[0] < 0) return false;
    Rational tail = 0;
    for (std::size_t t = 1; t < k; ++t) tail += u[t] * u[t];
    if (u[0] * u[0] < tail) return false;
    r0 += k;
  }
  return true;
}

std::optional<std::vector<long>> integer_vector(const Vec& v, double tol) {
  std::vector<long> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return std::nullopt;
    double r = std::round(v[i]);
    if (std::fabs(v[i] - r) > tol) return std::nullopt;
    out[i] = static_cast<long>(r);
  }
  return out;
}

bool is_bilevel_feasible(const BilevelInstance& inst, const Point& p,
                         const ValueFunctionOracle& follower_oracle) {
  auto xi = integer_vector(p.x);
  auto yi = integer_vector(p.y);
  if (!xi || !yi) return false;
  if (!is_hpr_feasible(inst, *xi, *yi)) return false;
  auto phi = follower_oracle(*xi);
  if (!phi) return false;
  return eval_follower_objective(inst, *yi) <= *phi;
}

}  // namespace bdc
