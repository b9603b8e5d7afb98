// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include "bdc/follower.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace bdc {

namespace {

struct Timer {
  explicit Timer(double& acc) : acc_(acc), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    acc_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }
  double& acc_;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace

FollowerSolver::FollowerSolver(const BilevelInstance& inst) : inst_(inst), data_(inst) {}

mip::ConicRelaxation FollowerSolver::relaxation(const Vec& x) const {
  const std::size_t m2 = data_.B.rows(), ny = data_.CY.rows();
  Matrix w(m2 + ny, data_.n2);
  Vec r(m2 + ny);
  for (std::size_t i = 0; i < m2; ++i) {
    std::copy(data_.B.row(i), data_.B.row(i) + data_.n2, w.row(i));
    double ax = 0.0;
    for (std::size_t j = 0; j < data_.n1; ++j) ax += data_.A(i, j) * x[j];
    r[i] = data_.f[i] - ax;
  }
  for (std::size_t i = 0; i < ny; ++i) {
    std::copy(data_.CY.row(i), data_.CY.row(i) + data_.n2, w.row(m2 + i));
    r[m2 + i] = data_.UY[i];
  }
  Matrix v = data_.V.rows() > 0 ? data_.V : Matrix(0, data_.n2);
  return mip::ConicRelaxation(std::move(w), std::move(r), std::move(v), data_.g);
}

double FollowerSolver::improving_cutoff(double q_star) const {
  if (data_.integral_objective) return std::ceil(q_star - 1e-9) - 1.0;
  return q_star - 1e-5;
}

bool FollowerSolver::in_follower_set(const Vec& x, const std::vector<long>& y) const {
  const std::size_t n1 = data_.n1, n2 = data_.n2;
  for (std::size_t j = 0; j < n2; ++j)
    if (y[j] < inst_.lb[n1 + j] || y[j] > inst_.ub[n1 + j]) return false;
  auto xi = integer_vector(x, 0.0);
  for (std::size_t i = 0; i < inst_.m2(); ++i) {
    if (xi) {
      Rational s = 0;
      for (std::size_t j = 0; j < n1; ++j) s += inst_.A(i, j) * (*xi)[j];
      for (std::size_t j = 0; j < n2; ++j) s += inst_.B(i, j) * y[j];
      if (s < inst_.f[i]) return false;
    } else {
      double s = 0.0;
      for (std::size_t j = 0; j < n1; ++j) s += data_.A(i, j) * x[j];
      for (std::size_t j = 0; j < n2; ++j) s += data_.B(i, j) * static_cast<double>(y[j]);
      if (s < data_.f[i] - 1e-9) return false;
    }
  }
  for (std::size_t i = 0; i < inst_.nY(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n2; ++j) s += inst_.CY(i, j) * y[j];
    if (s < inst_.UY[i]) return false;
  }
  return true;
}

std::vector<long> FollowerSolver::to_long(const Vec& z) const {
  std::vector<long> y(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) y[j] = std::lround(z[j]);
  return y;
}

void FollowerSolver::remember(const std::vector<long>& y) {
  if (std::find(pool_.begin(), pool_.end(), y) != pool_.end()) return;
  pool_.push_back(y);
  while (pool_.size() > kPoolCapacity) pool_.pop_front();
}

FollowerResult FollowerSolver::solve_optimal(const Vec& x, std::optional<double> q_star) {
  Timer t(stats_.seconds);
  ++stats_.calls;
  auto rel = relaxation(x);
  mip::Config cfg;
  cfg.objective_integral = data_.integral_objective;
  cfg.time_limit = time_limit;
  if (q_star) cfg.cutoff = improving_cutoff(*q_star);
  for (const auto& y : pool_)
    if (in_follower_set(x, y)) cfg.initial_solutions.emplace_back(y.begin(), y.end());
  mip::Engine e(rel, Vec(data_.lb.begin() + static_cast<long>(data_.n1), data_.lb.end()),
                Vec(data_.ub.begin() + static_cast<long>(data_.n1), data_.ub.end()), cfg);
  const auto r = e.solve();
  stats_.nodes += r.stats.nodes;
  FollowerResult out;
  if (r.status == mip::Status::kTimeLimit) {
    out.status = FollowerStatus::kTimeLimit;
    return out;
  }
  if (!r.incumbent) {
    out.status = FollowerStatus::kInfeasible;
    return out;
  }
  out.y = to_long(*r.incumbent);
  out.q = eval_follower_objective(inst_, out.y);
  if (q_star && !(to_double(out.q) < *q_star)) {
    out.status = FollowerStatus::kInfeasible;
    return out;
  }
  out.status = FollowerStatus::kOptimal;
  remember(out.y);
  if (lexicographic_ties) lexicographic_min(x, out);
  return out;
}

void FollowerSolver::lexicographic_min(const Vec& x, FollowerResult& r) {
  const std::size_t n1 = data_.n1, n2 = data_.n2;
  Vec lb(data_.lb.begin() + static_cast<long>(n1), data_.lb.end());
  Vec ub(data_.ub.begin() + static_cast<long>(n1), data_.ub.end());
  const double cap = to_double(r.q);
  std::vector<long> cur = r.y;
  for (std::size_t j = 0; j < n2; ++j) {
    if (lb[j] == ub[j] || static_cast<double>(cur[j]) == lb[j]) {
      lb[j] = ub[j] = static_cast<double>(cur[j]);
      continue;
    }
    auto rel = relaxation(x);
    Vec e(n2, 0.0);
    e[j] = 1.0;
    rel.set_linear_objective(e);
    rel.set_quadratic_cap(cap);
    mip::Config cfg;
    cfg.objective_integral = true;
    cfg.time_limit = time_limit;
    cfg.initial_solutions.emplace_back(cur.begin(), cur.end());
    mip::Engine eng(rel, lb, ub, cfg);
    const auto res = eng.solve();
    stats_.nodes += res.stats.nodes;
    if (res.incumbent) {
      auto y = to_long(*res.incumbent);
      if (in_follower_set(x, y) && eval_follower_objective(inst_, y) == r.q) cur = y;
    }
    lb[j] = ub[j] = static_cast<double>(cur[j]);
  }
  r.y = cur;
}

bool FollowerSolver::stream_improving(const Vec& x, double q_star, const FollowerYield& yield) {
  Timer t(stats_.seconds);
  ++stats_.calls;
  auto rel = relaxation(x);
  mip::Config cfg;
  cfg.objective_integral = data_.integral_objective;
  cfg.time_limit = time_limit;
  for (const auto& y : pool_)
    if (in_follower_set(x, y)) cfg.initial_solutions.emplace_back(y.begin(), y.end());
  const std::vector<Vec> pooled = cfg.initial_solutions;
  cfg.cutoff = improving_cutoff(q_star);
  std::vector<std::vector<long>> found;
  mip::Callbacks cbs;
  cbs.on_new_incumbent = [&](const Vec& z, double) {
    auto y = to_long(z);
    const Rational q = eval_follower_objective(inst_, y);
    // Strict improvement and membership are rechecked exactly.
    if (!(to_double(q) < q_star) || !in_follower_set(x, y)) return true;
    found.push_back(y);
    if (std::find(pooled.begin(), pooled.end(), z) != pooled.end()) ++stats_.pool_hits;
    return yield(y, q);
  };
  mip::Engine e(rel, Vec(data_.lb.begin() + static_cast<long>(data_.n1), data_.lb.end()),
                Vec(data_.ub.begin() + static_cast<long>(data_.n1), data_.ub.end()), cfg, cbs);
  const auto r = e.solve();
  stats_.nodes += r.stats.nodes;
  for (const auto& y : found) remember(y);
  return r.status != mip::Status::kTimeLimit;
}

FollowerResult FollowerSolver::best_for_leader(const Vec& x, const Rational& phi, const Vec& d,
                                               bool leader_rows) {
  Timer t(stats_.seconds);
  ++stats_.calls;
  auto rel = relaxation(x);
  rel.set_linear_objective(d);
  rel.set_quadratic_cap(to_double(phi));
  mip::Config cfg;
  cfg.time_limit = time_limit;
  cfg.objective_integral = std::all_of(d.begin(), d.end(), [](double v) { return v == std::round(v); });
  std::vector<std::vector<long>> accepted;
  mip::Callbacks cb;
  auto xi = integer_vector(x, 0.0);
  if (leader_rows && !xi) throw std::invalid_argument("best_for_leader: leader rows need integral x");
  // Only exact follower optima may become incumbents.
  cb.on_integer = [&](const Vec& z, bool, const mip::NodeContext&) {
    auto y = to_long(z);
    bool ok = in_follower_set(x, y) && eval_follower_objective(inst_, y) <= phi;
    if (ok && leader_rows) ok = is_hpr_feasible(inst_, *xi, y);
    if (ok) return mip::Decision{};
    return mip::Decision{mip::Verdict::kReject, {}};
  };
  mip::Engine e(rel, Vec(data_.lb.begin() + static_cast<long>(data_.n1), data_.lb.end()),
                Vec(data_.ub.begin() + static_cast<long>(data_.n1), data_.ub.end()), cfg, cb);
  if (leader_rows) {
    // N y >= h - M x
    for (std::size_t i = 0; i < data_.h.size(); ++i) {
      mip::Row row;
      double rhs = data_.h[i];
      for (std::size_t j = 0; j < data_.n1; ++j) rhs -= data_.M(i, j) * x[j];
      for (std::size_t j = 0; j < data_.n2; ++j) row.a.add(static_cast<int>(j), data_.N(i, j));
      row.b = rhs;
      e.add_global_row(std::move(row));
    }
  }
  const auto r = e.solve();
  stats_.nodes += r.stats.nodes;
  FollowerResult out;
  if (r.status == mip::Status::kTimeLimit) {
    out.status = FollowerStatus::kTimeLimit;
    return out;
  }
  if (!r.incumbent) return out;
  out.status = FollowerStatus::kOptimal;
  out.y = to_long(*r.incumbent);
  out.q = eval_follower_objective(inst_, out.y);
  return out;
}

}  // namespace bdc
