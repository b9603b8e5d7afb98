// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
// Mehrotra predictor-corrector steps. Each Newton system is reduced to
//   [ G'W^{-2}G + dI   A' ] [dx]
//   [ A               -dI ] [dy]
// and factored by a dense LDL'.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bdc/conic_solve.hpp"
#include "bdc/kernels.hpp"

namespace bdc {

void ConicProblem::validate() const {
  const std::size_t n = num_vars();
  for (const SparseMatrix* m : {&A, &G})
    for (const auto& row : m->rows)
      for (const auto& [j, v] : row.entries)
        if (j < 0 || static_cast<std::size_t>(j) >= n || !std::isfinite(v))
          throw std::invalid_argument("conic: bad matrix entry");
  if (static_cast<std::size_t>(A.num_rows()) != b.size())
    throw std::invalid_argument("conic: A and b disagree");
  if (static_cast<std::size_t>(G.num_rows()) != h.size())
    throw std::invalid_argument("conic: G and h disagree");
  std::size_t m = 0;
  for (const auto& k : cones) {
    if (k.dim == 0) throw std::invalid_argument("conic: empty cone block");
    m += k.dim;
  }
  if (m != h.size()) throw std::invalid_argument("conic: cone sizes do not cover the rows of G");
  if (n == 0) throw std::invalid_argument("conic: no variables");
}

namespace {

constexpr double kStepFraction = 0.99;
constexpr double kStaticReg = 7e-8;
constexpr int kRefineSteps = 3;

class Ipm {
 public:
  Ipm(const ConicProblem& p, const ConicOptions& opt)
      : p_(p), opt_(opt), n_(p.num_vars()), pe_(p.num_eq()), m_(p.num_cone_rows()) {
    deg_ = cone::degree(p.cones);
    nrm_b_ = 1.0 + norm2(p.b);
    nrm_h_ = 1.0 + norm2(p.h);
    nrm_c_ = 1.0 + norm2(p.c);
    e_ = cone::identity(p.cones);
  }

  ConicOutcome run() {
    ConicOutcome out;
    if (!initialize()) {
      fallback_start();
    }
    for (int it = 0; it <= opt_.max_iterations; ++it) {
      out.iterations = it;
      Metrics mt = metrics();
      if (mt.optimal(opt_)) return optimal(out, mt, false);
      if (mt.primal_infeasible(opt_)) return primal_infeasible(out);
      if (mt.dual_infeasible(opt_)) return dual_infeasible(out);
      if (it == opt_.max_iterations) break;
      if (!step()) break;
    }
    Metrics mt = metrics();
    if (mt.nearly_optimal()) return optimal(out, mt, true);
    if (mt.nearly_primal_infeasible()) {
      out = primal_infeasible(out);
      out.reduced_accuracy = true;
      return out;
    }
    if (mt.nearly_dual_infeasible()) {
      out = dual_infeasible(out);
      out.reduced_accuracy = true;
      return out;
    }
    out.status = ConicStatus::kNumericalFailure;
    out.x = x_;
    out.s = s_;
    out.y = y_;
    out.z = z_;
    return out;
  }

 private:
  struct Metrics {
    double pres, dres, gap, relgap, pcost, dcost;
    double pinf, dinf;  // certificate residuals (inf when not applicable)
    bool optimal(const ConicOptions& o) const {
      return pres < o.feastol && dres < o.feastol && (gap < o.abstol || relgap < o.reltol) &&
             relgap < std::max(o.reltol, o.abstol);
    }
    bool primal_infeasible(const ConicOptions& o) const { return pinf < o.feastol; }
    bool dual_infeasible(const ConicOptions& o) const { return dinf < o.feastol; }
    bool nearly_optimal() const {
      return pres < 1e-6 && dres < 1e-6 && (gap < 1e-6 || relgap < 1e-6);
    }
    bool nearly_primal_infeasible() const { return pinf < 1e-6; }
    bool nearly_dual_infeasible() const { return dinf < 1e-6; }
  };

  Metrics metrics() const {
    Metrics mt{};
    const double tau = tau_;
    Vec ax = p_.A.multiply(x_);
    Vec gx = p_.G.multiply(x_);
    double rp_eq = 0.0, rp_cone = 0.0;
    for (std::size_t i = 0; i < pe_; ++i) rp_eq += sq(ax[i] - p_.b[i] * tau);
    for (std::size_t i = 0; i < m_; ++i) rp_cone += sq(gx[i] + s_[i] - p_.h[i] * tau);
    mt.pres = std::max(std::sqrt(rp_eq) / nrm_b_, std::sqrt(rp_cone) / nrm_h_) / tau;
    Vec aty = p_.A.multiply_transpose(y_);
    Vec gtz = p_.G.multiply_transpose(z_);
    double rd = 0.0, rd_hom = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = aty[j] + gtz[j];
      rd += sq(v + p_.c[j] * tau);
      rd_hom += sq(v);
    }
    mt.dres = std::sqrt(rd) / nrm_c_ / tau;
    const double cx = dot(p_.c, x_);
    const double by_hz = dot(p_.b, y_) + dot(p_.h, z_);
    mt.pcost = cx / tau;
    mt.dcost = -by_hz / tau;
    mt.gap = dot(s_, z_) / (tau * tau);
    // Both the complementarity and the objective gap, relative to 1 + |c'x|.
    mt.relgap = std::max(mt.gap, std::fabs(mt.pcost - mt.dcost)) / (1.0 + std::fabs(mt.pcost));
    mt.pinf = std::numeric_limits<double>::infinity();
    mt.dinf = std::numeric_limits<double>::infinity();
    if (by_hz < 0.0) mt.pinf = std::sqrt(rd_hom) / (-by_hz) / nrm_c_ * 1.0;
    if (cx < 0.0) {
      double ax2 = 0.0, gs2 = 0.0;
      for (std::size_t i = 0; i < pe_; ++i) ax2 += sq(ax[i]);
      for (std::size_t i = 0; i < m_; ++i) gs2 += sq(gx[i] + s_[i]);
      mt.dinf = std::max(std::sqrt(ax2) / nrm_b_, std::sqrt(gs2) / nrm_h_) / (-cx);
    }
    return mt;
  }

  static double sq(double v) { return v * v; }

  ConicOutcome& optimal(ConicOutcome& out, const Metrics& mt, bool reduced) {
    out.status = ConicStatus::kOptimal;
    out.reduced_accuracy = reduced;
    out.x = scaled(x_, 1.0 / tau_);
    out.s = scaled(s_, 1.0 / tau_);
    out.y = scaled(y_, 1.0 / tau_);
    out.z = scaled(z_, 1.0 / tau_);
    out.primal_objective = mt.pcost;
    out.dual_objective = mt.dcost;
    out.gap = mt.gap;
    return out;
  }

  ConicOutcome& primal_infeasible(ConicOutcome& out) {
    const double t = -(dot(p_.b, y_) + dot(p_.h, z_));
    out.status = ConicStatus::kPrimalInfeasible;
    out.y = scaled(y_, 1.0 / t);
    out.z = scaled(z_, 1.0 / t);
    out.x.assign(n_, 0.0);
    out.s.assign(m_, 0.0);
    return out;
  }

  ConicOutcome& dual_infeasible(ConicOutcome& out) {
    const double t = -dot(p_.c, x_);
    out.status = ConicStatus::kDualInfeasible;
    out.x = scaled(x_, 1.0 / t);
    out.s = scaled(s_, 1.0 / t);
    out.y.assign(pe_, 0.0);
    out.z.assign(m_, 0.0);
    return out;
  }

  static Vec scaled(const Vec& v, double a) {
    Vec out = v;
    kernels::scale(a, out.data(), out.size());
    return out;
  }

  // Quasi-definite KKT matrix
  //   [ dI  A'   G'        ]
  //   [ A  -dI   0         ]
  //   [ G   0   -W^2 - dI  ]
  void factor_kkt(bool identity) {
    const std::size_t nk = n_ + pe_ + m_;
    Matrix k(nk, nk);
    for (std::size_t j = 0; j < n_; ++j) k(j, j) = kStaticReg;
    for (std::size_t i = 0; i < pe_; ++i) {
      for (const auto& [j, v] : p_.A.rows[i].entries) {
        k(n_ + i, j) = v;
        k(j, n_ + i) = v;
      }
      k(n_ + i, n_ + i) = -kStaticReg;
    }
    const std::size_t off = n_ + pe_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& [j, v] : p_.G.rows[i].entries) {
        k(off + i, j) = v;
        k(j, off + i) = v;
      }
    }
    std::size_t r = 0;
    for (std::size_t b = 0; b < p_.cones.size(); ++b) {
      const auto& blk = p_.cones[b];
      if (identity) {
        for (std::size_t i = r; i < r + blk.dim; ++i) k(off + i, off + i) = -1.0;
      } else if (blk.type == ConeType::kNonneg) {
        for (std::size_t i = 0; i < blk.dim; ++i) k(off + r + i, off + r + i) = -sq(sc_[b].w[i]);
      } else {
        // W^2 = beta^2 (4 (v'v) v v' - 2 (v v'J + J v v') + I)
        const auto& v = sc_[b].w;
        const double b2 = sq(sc_[b].beta);
        const double vv = kernels::sumsq(v.data(), v.size());
        for (std::size_t i1 = 0; i1 < blk.dim; ++i1) {
          const double jv1 = i1 == 0 ? v[0] : -v[i1];
          for (std::size_t i2 = 0; i2 < blk.dim; ++i2) {
            const double jv2 = i2 == 0 ? v[0] : -v[i2];
            double w2 = 4.0 * vv * v[i1] * v[i2] - 2.0 * (v[i1] * jv2 + jv1 * v[i2]);
            if (i1 == i2) w2 += 1.0;
            k(off + r + i1, off + r + i2) = -b2 * w2;
          }
        }
      }
      r += blk.dim;
    }
    for (std::size_t i = 0; i < m_; ++i) k(off + i, off + i) -= kStaticReg;
    ldl_.factor(k, n_);
  }

  bool solve_once(const Vec& r1, const Vec& r2, const Vec& r3, Vec& dx, Vec& dy,
                  Vec& dz) const {
    Vec sol(n_ + pe_ + m_);
    std::copy(r1.begin(), r1.end(), sol.begin());
    std::copy(r2.begin(), r2.end(), sol.begin() + static_cast<long>(n_));
    std::copy(r3.begin(), r3.end(), sol.begin() + static_cast<long>(n_ + pe_));
    ldl_.solve(sol);
    for (double v : sol)
      if (!std::isfinite(v)) return false;
    dx.assign(sol.begin(), sol.begin() + static_cast<long>(n_));
    dy.assign(sol.begin() + static_cast<long>(n_), sol.begin() + static_cast<long>(n_ + pe_));
    dz.assign(sol.begin() + static_cast<long>(n_ + pe_), sol.end());
    return true;
  }

  // Solves  [0 A' G'; A 0 0; G 0 -W^2] (dx, dy, dz) = (r1, r2, r3), refining
  // against the residual of the full system.
  bool solve(const Vec& r1, const Vec& r2, const Vec& r3, Vec& dx, Vec& dy, Vec& dz,
             bool identity) const {
    if (!solve_once(r1, r2, r3, dx, dy, dz)) return false;
    const double scale = 1.0 + std::max({norm_inf(r1), norm_inf(r2), norm_inf(r3)});
    for (int k = 0; k < kRefineSteps; ++k) {
      Vec e1 = r1, e2 = r2, e3 = r3;
      Vec aty = p_.A.multiply_transpose(dy), gtz = p_.G.multiply_transpose(dz);
      for (std::size_t j = 0; j < n_; ++j) e1[j] -= aty[j] + gtz[j];
      Vec ax = p_.A.multiply(dx), gx = p_.G.multiply(dx);
      for (std::size_t i = 0; i < pe_; ++i) e2[i] -= ax[i];
      Vec w2dz = identity ? dz : cone::apply_w(p_.cones, sc_, cone::apply_w(p_.cones, sc_, dz));
      for (std::size_t i = 0; i < m_; ++i) e3[i] -= gx[i] - w2dz[i];
      const double err = std::max({norm_inf(e1), norm_inf(e2), norm_inf(e3)});
      if (err <= 1e-14 * scale) break;
      Vec cx, cy, cz;
      if (!solve_once(e1, e2, e3, cx, cy, cz)) return false;
      axpy(1.0, cx, dx);
      axpy(1.0, cy, dy);
      axpy(1.0, cz, dz);
    }
    return true;
  }

  // Cone-interior shift of u: add (1 + alpha) e when u is not strictly inside.
  void shift_into_cone(Vec& u) const {
    double alpha = -std::numeric_limits<double>::infinity();
    std::size_t r = 0;
    for (const auto& blk : p_.cones) {
      if (blk.type == ConeType::kNonneg) {
        for (std::size_t i = 0; i < blk.dim; ++i) alpha = std::max(alpha, -u[r + i]);
      } else {
        double t = blk.dim > 1 ? std::sqrt(kernels::sumsq(&u[r + 1], blk.dim - 1)) : 0.0;
        alpha = std::max(alpha, t - u[r]);
      }
      r += blk.dim;
    }
    if (alpha >= -1e-8) {
      for (std::size_t i = 0; i < m_; ++i) u[i] += (1.0 + alpha) * e_[i];
    }
  }

  bool initialize() {
    factor_kkt(true);
    Vec dx, dy, dz;
    // Primal: min ||Gx - h|| s.t. Ax = b, s = h - Gx.
    Vec zero_n(n_, 0.0);
    if (!solve(zero_n, p_.b, p_.h, dx, dy, dz, true)) return false;
    x_ = dx;
    s_.resize(m_);
    Vec gx = p_.G.multiply(x_);
    for (std::size_t i = 0; i < m_; ++i) s_[i] = p_.h[i] - gx[i];
    // Dual: min ||z|| s.t. A'y + G'z + c = 0.
    Vec minus_c = scaled(p_.c, -1.0);
    Vec zero_p(pe_, 0.0), zero_m(m_, 0.0);
    if (!solve(minus_c, zero_p, zero_m, dx, dy, dz, true)) return false;
    y_ = dy;
    z_ = dz;
    shift_into_cone(s_);
    shift_into_cone(z_);
    tau_ = 1.0;
    kappa_ = 1.0;
    for (double v : s_)
      if (!std::isfinite(v)) return false;
    for (double v : z_)
      if (!std::isfinite(v)) return false;
    return cone::violation(p_.cones, s_) <= 0.0 && cone::violation(p_.cones, z_) <= 0.0;
  }

  void fallback_start() {
    x_.assign(n_, 0.0);
    y_.assign(pe_, 0.0);
    s_ = e_;
    z_ = e_;
    tau_ = 1.0;
    kappa_ = 1.0;
  }

  double max_step(const Vec& ds, const Vec& dz, double dtau, double dkappa) const {
    double a = std::min(cone::max_step(p_.cones, s_, ds), cone::max_step(p_.cones, z_, dz));
    if (dtau < 0.0) a = std::min(a, -tau_ / dtau);
    if (dkappa < 0.0) a = std::min(a, -kappa_ / dkappa);
    return a;
  }

  bool step() {
    // Residuals of the homogeneous embedding.
    Vec aty = p_.A.multiply_transpose(y_);
    Vec gtz = p_.G.multiply_transpose(z_);
    Vec r1(n_), r2(pe_), r3(m_);
    for (std::size_t j = 0; j < n_; ++j) r1[j] = aty[j] + gtz[j] + p_.c[j] * tau_;
    Vec ax = p_.A.multiply(x_), gx = p_.G.multiply(x_);
    for (std::size_t i = 0; i < pe_; ++i) r2[i] = -ax[i] + p_.b[i] * tau_;
    for (std::size_t i = 0; i < m_; ++i) r3[i] = p_.h[i] * tau_ - gx[i] - s_[i];
    const double r4 = -dot(p_.c, x_) - dot(p_.b, y_) - dot(p_.h, z_) - kappa_;

    sc_ = cone::nt_scaling(p_.cones, s_, z_);
    const Vec lambda = cone::apply_w(p_.cones, sc_, z_);
    factor_kkt(false);

    Vec x1, y1, z1;
    Vec minus_c = scaled(p_.c, -1.0);
    if (!solve(minus_c, p_.b, p_.h, x1, y1, z1, false)) return false;
    const double den0 = dot(p_.c, x1) + dot(p_.b, y1) + dot(p_.h, z1);

    const double mu = (dot(s_, z_) + tau_ * kappa_) / static_cast<double>(deg_ + 1);
    const Vec ll = cone::jordan(p_.cones, lambda, lambda);

    auto direction = [&](double eta, const Vec& ds_rhs, double dk, Vec& dx, Vec& dy, Vec& dz,
                         Vec& dsv, double& dtau, double& dkappa) -> bool {
      Vec dst = cone::jordan_div(p_.cones, lambda, ds_rhs);
      Vec wdst = cone::apply_w(p_.cones, sc_, dst);
      Vec q1(n_), q2(pe_), q3(m_);
      for (std::size_t j = 0; j < n_; ++j) q1[j] = -eta * r1[j];
      for (std::size_t i = 0; i < pe_; ++i) q2[i] = eta * r2[i];
      for (std::size_t i = 0; i < m_; ++i) q3[i] = eta * r3[i] - wdst[i];
      Vec x2, y2, z2;
      if (!solve(q1, q2, q3, x2, y2, z2, false)) return false;
      const double den = den0 - kappa_ / tau_;
      dtau = (eta * r4 - dk / tau_ - dot(p_.c, x2) - dot(p_.b, y2) - dot(p_.h, z2)) / den;
      dx = x2;
      dy = y2;
      dz = z2;
      axpy(dtau, x1, dx);
      axpy(dtau, y1, dy);
      axpy(dtau, z1, dz);
      // ds = W (dst - W dz)
      Vec wdz = cone::apply_w(p_.cones, sc_, dz);
      for (std::size_t i = 0; i < m_; ++i) wdz[i] = dst[i] - wdz[i];
      dsv = cone::apply_w(p_.cones, sc_, wdz);
      dkappa = (dk - kappa_ * dtau) / tau_;
      return std::isfinite(dtau) && std::isfinite(dkappa);
    };

    // Predictor.
    Vec ds_aff_rhs = scaled(ll, -1.0);
    Vec dxa, dya, dza, dsa;
    double dta = 0.0, dka = 0.0;
    if (!direction(1.0, ds_aff_rhs, -tau_ * kappa_, dxa, dya, dza, dsa, dta, dka)) return false;
    const double alpha_aff = std::min(1.0, max_step(dsa, dza, dta, dka));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector.
    Vec a = cone::apply_winv(p_.cones, sc_, dsa);
    Vec b = cone::apply_w(p_.cones, sc_, dza);
    Vec cross = cone::jordan(p_.cones, a, b);
    Vec ds_rhs(m_);
    for (std::size_t i = 0; i < m_; ++i) ds_rhs[i] = -ll[i] - cross[i] + sigma * mu * e_[i];
    const double dk = -tau_ * kappa_ - dta * dka + sigma * mu;
    Vec dx, dy, dz, dsv;
    double dtau = 0.0, dkappa = 0.0;
    if (!direction(1.0 - sigma, ds_rhs, dk, dx, dy, dz, dsv, dtau, dkappa)) return false;
    const double alpha = std::min(1.0, kStepFraction * max_step(dsv, dz, dtau, dkappa));
    if (!(alpha > 1e-10)) return false;

    axpy(alpha, dx, x_);
    axpy(alpha, dy, y_);
    axpy(alpha, dz, z_);
    axpy(alpha, dsv, s_);
    tau_ += alpha * dtau;
    kappa_ += alpha * dkappa;
    // Rescale the embedding when it drifts far from unit size.
    const double scale = std::max({tau_, kappa_, norm_inf(x_), norm_inf(z_), norm_inf(s_)});
    if (scale > 1e10 || scale < 1e-10) {
      const double f = 1.0 / scale;
      for (Vec* v : {&x_, &y_, &z_, &s_}) kernels::scale(f, v->data(), v->size());
      tau_ *= f;
      kappa_ *= f;
    }
    return tau_ > 0.0 && kappa_ > 0.0;
  }

  const ConicProblem& p_;
  ConicOptions opt_;
  std::size_t n_, pe_, m_, deg_ = 0;
  double nrm_b_ = 1, nrm_h_ = 1, nrm_c_ = 1;
  Vec e_;
  Vec x_, y_, s_, z_;
  double tau_ = 1.0, kappa_ = 1.0;
  std::vector<cone::Scaling> sc_;
  LdltFactor ldl_;
};

}  // namespace

namespace {
ConicProblem with_width(const ConicProblem& p) {
  ConicProblem q = p;
  q.A.cols = q.G.cols = static_cast<int>(p.num_vars());
  return q;
}
}  // namespace

ConicOutcome conic_solve(const ConicProblem& prob, const ConicOptions& opt) {
  prob.validate();
  const ConicProblem p = with_width(prob);
  Ipm ipm(p, opt);
  return ipm.run();
}

ConicDuals conic_extract_duals(const ConicProblem& p, const ConicOutcome& o) {
  if (o.status != ConicStatus::kOptimal)
    throw std::logic_error("conic_extract_duals: outcome is not optimal");
  ConicDuals d;
  d.equality = o.y;
  std::size_t r = 0;
  for (const auto& blk : p.cones) {
    d.blocks.emplace_back(o.z.begin() + static_cast<long>(r),
                          o.z.begin() + static_cast<long>(r + blk.dim));
    r += blk.dim;
  }
  return d;
}

double KktResiduals::max() const {
  return std::max({primal_eq, primal_cone, dual, gap, complementarity, cone_violation});
}

KktResiduals conic_residuals(const ConicProblem& prob, const ConicOutcome& o) {
  const ConicProblem p = with_width(prob);
  KktResiduals r;
  auto nrm = [](const Vec& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); };
  Vec ax = p.A.multiply(o.x), gx = p.G.multiply(o.x);
  Vec e1(p.num_eq()), e2(p.num_cone_rows());
  for (std::size_t i = 0; i < e1.size(); ++i) e1[i] = ax[i] - p.b[i];
  for (std::size_t i = 0; i < e2.size(); ++i) e2[i] = gx[i] + o.s[i] - p.h[i];
  r.primal_eq = nrm(e1) / (1.0 + nrm(p.b));
  r.primal_cone = nrm(e2) / (1.0 + nrm(p.h));
  Vec aty = p.A.multiply_transpose(o.y), gtz = p.G.multiply_transpose(o.z);
  Vec e3(p.num_vars());
  for (std::size_t j = 0; j < e3.size(); ++j) e3[j] = aty[j] + gtz[j] + p.c[j];
  r.dual = nrm(e3) / (1.0 + nrm(p.c));
  const double cx = std::inner_product(p.c.begin(), p.c.end(), o.x.begin(), 0.0);
  const double by = std::inner_product(p.b.begin(), p.b.end(), o.y.begin(), 0.0);
  const double hz = std::inner_product(p.h.begin(), p.h.end(), o.z.begin(), 0.0);
  r.gap = std::fabs(cx + by + hz) / (1.0 + std::fabs(cx));
  r.complementarity =
      std::fabs(std::inner_product(o.s.begin(), o.s.end(), o.z.begin(), 0.0)) / (1.0 + std::fabs(cx));
  r.cone_violation = std::max(cone::violation(p.cones, o.s), cone::violation(p.cones, o.z));
  return r;
}

}  // namespace bdc
