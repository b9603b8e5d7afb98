// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

// Dense bounded-variable primal simplex on G z - s = b, s >= 0, with an
// explicit basis inverse kept up to date by elementary row operations and
// rebuilt from an LU factorization at regular intervals.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bdc/kernels.hpp"
#include "bdc/lin_solve.hpp"

namespace bdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;

class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opt) : p_(p), opt_(opt) {
    n_ = p.num_vars();
    m_ = p.num_rows();
    lo_.resize(n_ + m_);
    hi_.resize(n_ + m_);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = p.l[j];
      hi_[j] = p.u[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      lo_[n_ + i] = 0.0;
      hi_[n_ + i] = kInf;
    }
    max_iter_ = opt.max_iterations > 0 ? opt.max_iterations
                                       : static_cast<int>(50 * (n_ + m_) + 1000);
  }

  LpOutcome run(const LpBasis* warm) {
    LpOutcome out;
    init_basis(warm);
    if (!refactor()) {
      slack_basis();
      if (!refactor()) {
        out.status = LpStatus::kNumericalFailure;
        return out;
      }
    }
    int degenerate = 0;
    bool bland = false;
    int since_refactor = 0;
    for (iter_ = 0; iter_ < max_iter_; ++iter_) {
      if (since_refactor >= opt_.refactor_every) {
        if (!refactor()) {
          out.status = LpStatus::kNumericalFailure;
          return out;
        }
        since_refactor = 0;
      }
      const bool phase1 = compute_costs();
      compute_duals();
      const long q = choose_entering(bland);
      if (q < 0) {
        // Confirm with fresh values before declaring the outcome.
        if (since_refactor > 0) {
          if (!refactor()) {
            out.status = LpStatus::kNumericalFailure;
            return out;
          }
          since_refactor = 0;
          if (compute_costs() != phase1) continue;
          compute_duals();
          if (choose_entering(bland) >= 0) continue;
        }
        return phase1 ? infeasible() : optimal();
      }
      double step = 0.0;
      const int r = ratio_test(static_cast<std::size_t>(q), phase1, bland, step);
      if (r == -2) return unbounded(static_cast<std::size_t>(q));
      apply(static_cast<std::size_t>(q), r, step);
      if (r >= 0) ++since_refactor;
      if (step <= 1e-12) {
        if (++degenerate > static_cast<int>(3 * std::max<std::size_t>(m_, 1))) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
    out.status = LpStatus::kIterationLimit;
    out.iterations = iter_;
    return out;
  }

 private:
  // a_j as a dense column
  void column(std::size_t j, Vec& col) const {
    col.assign(m_, 0.0);
    if (j < n_) {
      for (std::size_t i = 0; i < m_; ++i) col[i] = p_.G(i, j);
    } else {
      col[j - n_] = -1.0;
    }
  }

  void init_basis(const LpBasis* warm) {
    status_.assign(n_ + m_, VarStatus::kAtLower);
    bool ok = warm != nullptr && warm->status.size() == n_ + m_;
    if (ok) {
      std::size_t basics = 0;
      for (auto s : warm->status) basics += s == VarStatus::kBasic;
      ok = basics == m_;
    }
    if (ok) {
      status_ = warm->status;
      for (std::size_t i = 0; i < m_; ++i)
        if (status_[n_ + i] == VarStatus::kAtUpper) status_[n_ + i] = VarStatus::kAtLower;
    } else {
      if (warm != nullptr && warm->status.size() >= n_) {
        for (std::size_t j = 0; j < n_; ++j)
          status_[j] = warm->status[j] == VarStatus::kAtUpper ? VarStatus::kAtUpper
                                                              : VarStatus::kAtLower;
      }
      for (std::size_t i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::kBasic;
    }
    head_.clear();
    for (std::size_t j = 0; j < n_ + m_; ++j)
      if (status_[j] == VarStatus::kBasic) head_.push_back(j);
    x_.assign(n_ + m_, 0.0);
  }

  void slack_basis() {
    for (std::size_t j = 0; j < n_; ++j)
      if (status_[j] == VarStatus::kBasic) status_[j] = VarStatus::kAtLower;
    for (std::size_t i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::kBasic;
    head_.clear();
    for (std::size_t i = 0; i < m_; ++i) head_.push_back(n_ + i);
  }

  bool refactor() {
    // Nonbasic values sit at their bounds.
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::kAtLower) x_[j] = lo_[j];
      else if (status_[j] == VarStatus::kAtUpper) x_[j] = hi_[j];
    }
    binv_ = Matrix(m_, m_);
    if (m_ == 0) return true;
    Matrix bm(m_, m_);
    Vec col;
    for (std::size_t k = 0; k < m_; ++k) {
      column(head_[k], col);
      for (std::size_t i = 0; i < m_; ++i) bm(i, k) = col[i];
    }
    LuFactor lu;
    if (!lu.factor(bm, 1e-11)) return false;
    // Binv' row by row: column k of Binv solves B w = e_k; store as row of
    // the transpose then transpose back.
    Vec e(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      std::fill(e.begin(), e.end(), 0.0);
      e[k] = 1.0;
      lu.solve(e);
      for (std::size_t i = 0; i < m_; ++i) binv_(i, k) = e[i];
    }
    recompute_basics();
    return true;
  }

  void recompute_basics() {
    // B x_B = b - sum_nonbasic a_j x_j
    Vec rhs = p_.b;
    for (std::size_t j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= p_.G(i, j) * x_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t j = n_ + i;
      if (status_[j] != VarStatus::kBasic) rhs[i] += x_[j];
    }
    for (std::size_t k = 0; k < m_; ++k) x_[head_[k]] = kernels::dot(binv_.row(k), rhs.data(), m_);
  }

  double infeasibility(std::size_t j) const {
    const double tol = opt_.tol;
    if (x_[j] < lo_[j] - tol) return lo_[j] - x_[j];
    if (x_[j] > hi_[j] + tol) return x_[j] - hi_[j];
    return 0.0;
  }

  // Fills cb_ with the basic costs; returns true in phase 1.
  bool compute_costs() {
    cb_.assign(m_, 0.0);
    bool phase1 = false;
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t j = head_[k];
      if (x_[j] < lo_[j] - opt_.tol) {
        cb_[k] = -1.0;
        phase1 = true;
      } else if (x_[j] > hi_[j] + opt_.tol) {
        cb_[k] = 1.0;
        phase1 = true;
      }
    }
    if (!phase1) {
      for (std::size_t k = 0; k < m_; ++k) cb_[k] = head_[k] < n_ ? p_.c[head_[k]] : 0.0;
    }
    phase1_ = phase1;
    return phase1;
  }

  double cost(std::size_t j) const {
    if (phase1_) return 0.0;
    return j < n_ ? p_.c[j] : 0.0;
  }

  void compute_duals() {
    y_.assign(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k)
      if (cb_[k] != 0.0) kernels::axpy(cb_[k], binv_.row(k), y_.data(), m_);
    gty_ = p_.G.multiply_transpose(y_);
  }

  double reduced_cost(std::size_t j) const {
    return j < n_ ? cost(j) - gty_[j] : cost(j) + y_[j - n_];
  }

  long choose_entering(bool bland) const {
    const double tol = opt_.tol;
    long best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::kBasic) continue;
      if (hi_[j] - lo_[j] <= 0.0) continue;
      const double d = reduced_cost(j);
      double score = 0.0;
      if (status_[j] == VarStatus::kAtLower && d < -tol) score = -d;
      else if (status_[j] == VarStatus::kAtUpper && d > tol) score = d;
      if (score <= 0.0) continue;
      if (bland) return static_cast<long>(j);
      if (score > best_score) {
        best_score = score;
        best = static_cast<long>(j);
      }
    }
    return best;
  }

  // Returns the leaving row, -1 for a bound flip of the entering variable and
  // -2 for an unbounded direction. alpha_ receives B^{-1} a_q.
  int ratio_test(std::size_t q, bool phase1, bool bland, double& step) {
    Vec col;
    column(q, col);
    alpha_.assign(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) alpha_[k] = kernels::dot(binv_.row(k), col.data(), m_);
    dir_ = status_[q] == VarStatus::kAtLower ? 1.0 : -1.0;
    const double tol = opt_.tol;
    const double flip = hi_[q] - lo_[q];

    // Harris pass 1: largest step with bounds relaxed by tol.
    double relaxed = kInf;
    for (std::size_t k = 0; k < m_; ++k) {
      const double delta = -dir_ * alpha_[k];
      if (std::fabs(delta) < kPivotTol) continue;
      const std::size_t j = head_[k];
      const double lim = limit(j, delta, phase1, tol);
      relaxed = std::min(relaxed, lim);
    }
    if (flip <= relaxed && std::isfinite(flip)) {
      step = flip;
      return -1;
    }
    if (!std::isfinite(relaxed)) {
      if (std::isfinite(flip)) {
        step = flip;
        return -1;
      }
      return -2;
    }
    // Pass 2: among rows whose exact ratio fits, take the largest pivot.
    int leave = -1;
    double best_piv = 0.0;
    double best_ratio = kInf;
    for (std::size_t k = 0; k < m_; ++k) {
      const double delta = -dir_ * alpha_[k];
      if (std::fabs(delta) < kPivotTol) continue;
      const std::size_t j = head_[k];
      const double lim = limit(j, delta, phase1, 0.0);
      if (lim > relaxed) continue;
      if (bland) {
        if (lim < best_ratio - 1e-12 ||
            (lim <= best_ratio + 1e-12 && (leave < 0 || j < head_[leave]))) {
          best_ratio = lim;
          leave = static_cast<int>(k);
        }
      } else if (std::fabs(delta) > best_piv) {
        best_piv = std::fabs(delta);
        leave = static_cast<int>(k);
        best_ratio = lim;
      }
    }
    if (leave < 0) return -2;
    step = std::max(best_ratio, 0.0);
    return leave;
  }

  // Step at which basic variable j (moving at rate delta) reaches the bound
  // that stops it. In phase 1 an infeasible variable stops on reaching its
  // violated bound; one moving away from feasibility is unrestricted.
  double limit(std::size_t j, double delta, bool phase1, double tol) const {
    const double v = x_[j];
    if (phase1 && v < lo_[j] - opt_.tol) {
      return delta > 0.0 ? (lo_[j] - v + tol) / delta : kInf;
    }
    if (phase1 && v > hi_[j] + opt_.tol) {
      return delta < 0.0 ? (v - hi_[j] + tol) / -delta : kInf;
    }
    if (delta < 0.0) return std::max(0.0, (v - lo_[j] + tol) / -delta);
    if (!std::isfinite(hi_[j])) return kInf;
    return std::max(0.0, (hi_[j] - v + tol) / delta);
  }

  void apply(std::size_t q, int r, double step) {
    // Bound the leaving variable lands on, decided before the update.
    bool to_lower = true;
    if (r >= 0) {
      const std::size_t j = head_[r];
      const double delta = -dir_ * alpha_[r];
      if (phase1_ && x_[j] < lo_[j] - opt_.tol) to_lower = true;
      else if (phase1_ && x_[j] > hi_[j] + opt_.tol) to_lower = false;
      else to_lower = delta < 0.0 || !std::isfinite(hi_[j]);
    }
    for (std::size_t k = 0; k < m_; ++k) x_[head_[k]] -= dir_ * step * alpha_[k];
    x_[q] += dir_ * step;
    if (r == -1) {
      status_[q] = status_[q] == VarStatus::kAtLower ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x_[q] = status_[q] == VarStatus::kAtLower ? lo_[q] : hi_[q];
      return;
    }
    const std::size_t leave_var = head_[r];
    status_[leave_var] = to_lower ? VarStatus::kAtLower : VarStatus::kAtUpper;
    x_[leave_var] = to_lower ? lo_[leave_var] : hi_[leave_var];
    status_[q] = VarStatus::kBasic;
    head_[r] = q;
    // Elementary row operations on the explicit inverse.
    const double piv = alpha_[r];
    double* rr = binv_.row(r);
    kernels::scale(1.0 / piv, rr, m_);
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == static_cast<std::size_t>(r) || alpha_[k] == 0.0) continue;
      kernels::axpy(-alpha_[k], rr, binv_.row(k), m_);
    }
  }

  void fill_common(LpOutcome& out) const {
    out.iterations = iter_;
    out.basis.status = status_;
    out.z.assign(x_.begin(), x_.begin() + static_cast<long>(n_));
    for (std::size_t j = 0; j < n_; ++j) out.z[j] = std::clamp(out.z[j], lo_[j], hi_[j]);
  }

  LpOutcome optimal() const {
    LpOutcome out;
    out.status = LpStatus::kOptimal;
    fill_common(out);
    out.objective = dot(p_.c, out.z);
    out.duals = y_;
    out.reduced_costs.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) out.reduced_costs[j] = p_.c[j] - gty_[j];
    return out;
  }

  LpOutcome infeasible() const {
    LpOutcome out;
    out.status = LpStatus::kInfeasible;
    fill_common(out);
    out.farkas = y_;
    for (double& v : out.farkas) v = std::max(v, 0.0);
    out.farkas_value = farkas_value(p_, out.farkas);
    return out;
  }

  LpOutcome unbounded(std::size_t q) const {
    LpOutcome out;
    out.status = LpStatus::kUnbounded;
    fill_common(out);
    out.ray.assign(n_, 0.0);
    if (q < n_) out.ray[q] = dir_;
    for (std::size_t k = 0; k < m_; ++k)
      if (head_[k] < n_) out.ray[head_[k]] = -dir_ * alpha_[k];
    return out;
  }

  const LpProblem& p_;
  LpOptions opt_;
  std::size_t n_ = 0, m_ = 0;
  int max_iter_ = 0;
  int iter_ = 0;
  Vec lo_, hi_, x_, cb_, y_, gty_, alpha_;
  std::vector<VarStatus> status_;
  std::vector<std::size_t> head_;
  Matrix binv_;
  double dir_ = 1.0;
  bool phase1_ = false;
};

void check(const LpProblem& p) {
  const std::size_t n = p.num_vars(), m = p.num_rows();
  if (p.l.size() != n || p.u.size() != n) throw std::invalid_argument("lp: bound length mismatch");
  if (m > 0 && (p.G.rows() != m || p.G.cols() != n))
    throw std::invalid_argument("lp: constraint matrix shape mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(p.l[j]) || !std::isfinite(p.u[j]))
      throw std::invalid_argument("lp: infinite variable bound");
  }
}

}  // namespace

LpOutcome lp_solve(const LpProblem& p, const LpOptions& opt, const LpBasis* warm) {
  check(p);
  // Crossed bounds: a single variable certifies emptiness.
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    if (p.l[j] > p.u[j]) {
      LpOutcome out;
      out.status = LpStatus::kInfeasible;
      out.farkas.assign(p.num_rows(), 0.0);
      out.farkas_value = -kInf;
      return out;
    }
  }
  LpProblem q = p;
  if (q.num_rows() == 0) q.G = Matrix(0, q.num_vars());
  Simplex s(q, opt);
  return s.run(warm);
}

LpProblem lp_add_rows(LpProblem p, const Matrix& rows, const Vec& rhs) {
  if (rows.rows() != rhs.size() || (rows.rows() > 0 && rows.cols() != p.num_vars()))
    throw std::invalid_argument("lp_add_rows: dimension mismatch");
  if (p.G.cols() != p.num_vars()) p.G = Matrix(p.G.rows(), p.num_vars());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    p.G.append_row(rows.row_vec(i));
    p.b.push_back(rhs[i]);
  }
  return p;
}

LpProblem lp_change_bounds(LpProblem p, const Vec& l, const Vec& u) {
  if (l.size() != p.num_vars() || u.size() != p.num_vars())
    throw std::invalid_argument("lp_change_bounds: dimension mismatch");
  p.l = l;
  p.u = u;
  return p;
}

LpBasis extend_basis(const LpBasis& basis, std::size_t num_vars, std::size_t new_rows) {
  LpBasis out = basis;
  if (out.status.size() < num_vars) return {};
  out.status.insert(out.status.end(), new_rows, VarStatus::kBasic);
  return out;
}

double farkas_value(const LpProblem& p, const Vec& r) {
  if (r.size() != p.num_rows()) return -kInf;
  for (double v : r)
    if (v < 0.0) return -kInf;
  double val = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) val += r[i] * p.b[i];
  Vec gr = p.num_rows() ? p.G.multiply_transpose(r) : Vec(p.num_vars(), 0.0);
  for (std::size_t j = 0; j < p.num_vars(); ++j) val -= std::max(gr[j] * p.l[j], gr[j] * p.u[j]);
  return val;
}

}  // namespace bdc
