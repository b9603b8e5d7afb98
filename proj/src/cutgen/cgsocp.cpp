// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bdc/cutgen.hpp"

namespace bdc {

namespace {

using Expr = CgsocpLayout::Expr;

Expr compact(Expr e) {
  std::map<int, double> m;
  for (const auto& [j, v] : e) m[j] += v;
  Expr out;
  for (const auto& [j, v] : m)
    if (v != 0.0) out.emplace_back(j, v);
  return out;
}

void add_scaled(Expr& dst, const Expr& src, double s) {
  if (s == 0.0) return;
  for (const auto& [j, v] : src) dst.emplace_back(j, s * v);
}

double value(const Expr& e, const Vec& x) {
  double s = 0.0;
  for (const auto& [j, v] : e) s += v * x[static_cast<std::size_t>(j)];
  return s;
}

// Affine expression e + constant.
struct Affine {
  Expr e;
  double constant = 0.0;
};

struct Builder {
  int ncols = 0;
  std::vector<Affine> nonneg;             // each >= 0
  std::vector<std::vector<Affine>> socs;  // each block in Q
  std::vector<Affine> equalities;         // each == 0

  struct Var {
    Expr val;
    Expr abs;  // |val| as a linear expression, when one exists
  };

  int column() { return ncols++; }

  Var free_var(bool split) {
    if (!split) return {{{column(), 1.0}}, {}};
    const int p = column(), m = column();
    nonneg.push_back({{{p, 1.0}}, 0.0});
    nonneg.push_back({{{m, 1.0}}, 0.0});
    return {{{p, 1.0}, {m, -1.0}}, {{p, 1.0}, {m, 1.0}}};
  }
  Var nonneg_var() {
    const int c = column();
    nonneg.push_back({{{c, 1.0}}, 0.0});
    return {{{c, 1.0}}, {{c, 1.0}}};
  }
  Var nonpos_var() {
    const int c = column();
    nonneg.push_back({{{c, -1.0}}, 0.0});
    return {{{c, 1.0}}, {{c, -1.0}}};
  }
  // A vector constrained to one second-order cone; tails split when needed.
  std::vector<Var> soc_var(std::size_t k, bool split) {
    std::vector<Var> v;
    std::vector<Affine> block;
    for (std::size_t i = 0; i < k; ++i) {
      Var x;
      if (i == 0) {
        const int c = column();
        x = {{{c, 1.0}}, {{c, 1.0}}};  // the head of a cone member is >= 0
      } else {
        x = free_var(split);
      }
      block.push_back({x.val, 0.0});
      v.push_back(std::move(x));
    }
    socs.push_back(std::move(block));
    return v;
  }
};

std::vector<ConeBlock> soc_list(const std::vector<std::size_t>& dims) {
  std::vector<ConeBlock> out;
  for (std::size_t k : dims) out.push_back({ConeType::kSoc, k});
  return out;
}

}  // namespace

CgsocpProblem build_cgsocp(const PolyhedronP& P, const std::vector<Disjunction>& ds,
                           const Vec& x_star, const Vec& y_star, NormalizationSpec norm) {
  if (ds.empty()) throw std::invalid_argument("all disjunctions removed");
  if (norm.p != 1 && norm.p != 2) throw std::invalid_argument("normalization norm must be 1 or 2");
  const std::size_t n1 = P.n1, n2 = P.n2, mb = P.num_linear(), mt = P.num_conic();
  if (x_star.size() != n1 || y_star.size() != n2)
    throw std::invalid_argument("build_cgsocp: point size");

  using Family = NormalizationSpec::Family;
  const bool one = norm.p == 1;
  const bool split_ab = one && norm.family == Family::kCoefficient;
  const bool split_pt = one && norm.family != Family::kCoefficient;
  const bool split_rho = one && norm.family == Family::kStandard;

  Builder b;
  CgsocpProblem out;
  out.norm = norm;
  out.P = &P;
  out.disjunctions = ds;
  out.x_star = x_star;
  out.y_star = y_star;
  CgsocpLayout& L = out.layout;

  std::vector<Builder::Var> alpha, beta;
  for (std::size_t j = 0; j < n1; ++j) alpha.push_back(b.free_var(split_ab));
  for (std::size_t j = 0; j < n2; ++j) beta.push_back(b.free_var(split_ab));
  const Builder::Var tau = b.free_var(false);
  for (const auto& v : alpha) L.alpha.push_back(v.val);
  for (const auto& v : beta) L.beta.push_back(v.val);
  L.tau = tau.val;

  std::vector<Builder::Var> normed;  // members of the normalization
  if (norm.family == Family::kCoefficient) {
    normed.insert(normed.end(), alpha.begin(), alpha.end());
    normed.insert(normed.end(), beta.begin(), beta.end());
  }

  for (const auto& dk : ds) {
    CgsocpLayout::Term t;
    std::vector<Builder::Var> pibar, pitil, extra;
    for (std::size_t r = 0; r < mb; ++r) pibar.push_back(b.nonneg_var());
    for (std::size_t k : P.cones) {
      auto blk = b.soc_var(k, split_pt);
      pitil.insert(pitil.end(), blk.begin(), blk.end());
    }
    if (dk.kind == Disjunction::Kind::kLinear) {
      extra.push_back(b.nonpos_var());
    } else {
      if (dk.Dt.cols() != n2) throw std::invalid_argument("build_cgsocp: D0 width");
      extra = b.soc_var(dk.Dt.rows(), split_rho);
    }
    if (norm.family != Family::kCoefficient) {
      normed.insert(normed.end(), pibar.begin(), pibar.end());
      normed.insert(normed.end(), pitil.begin(), pitil.end());
      if (norm.family == Family::kStandard) normed.insert(normed.end(), extra.begin(), extra.end());
    }

    // alpha' = pibar'Mbar + pitil'Mtil (+ sigma A^i)
    for (std::size_t j = 0; j < n1; ++j) {
      Affine eq{alpha[j].val, 0.0};
      for (std::size_t r = 0; r < mb; ++r) add_scaled(eq.e, pibar[r].val, -P.Mbar(r, j));
      for (std::size_t r = 0; r < mt; ++r) add_scaled(eq.e, pitil[r].val, -P.Mtil(r, j));
      if (dk.kind == Disjunction::Kind::kLinear) add_scaled(eq.e, extra[0].val, -dk.a[j]);
      eq.e = compact(std::move(eq.e));
      b.equalities.push_back(std::move(eq));
    }
    // beta' = pibar'Nbar + pitil'Ntil (+ rho'Dt)
    for (std::size_t j = 0; j < n2; ++j) {
      Affine eq{beta[j].val, 0.0};
      for (std::size_t r = 0; r < mb; ++r) add_scaled(eq.e, pibar[r].val, -P.Nbar(r, j));
      for (std::size_t r = 0; r < mt; ++r) add_scaled(eq.e, pitil[r].val, -P.Ntil(r, j));
      if (dk.kind == Disjunction::Kind::kObjective)
        for (std::size_t r = 0; r < dk.Dt.rows(); ++r) add_scaled(eq.e, extra[r].val, -dk.Dt(r, j));
      eq.e = compact(std::move(eq.e));
      b.equalities.push_back(std::move(eq));
    }
    // tau <= pibar'hbar + pitil'htil + sigma rhs  (or rho'ct)
    Affine row{{}, 0.0};
    for (std::size_t r = 0; r < mb; ++r) add_scaled(row.e, pibar[r].val, P.hbar[r]);
    for (std::size_t r = 0; r < mt; ++r) add_scaled(row.e, pitil[r].val, P.htil[r]);
    if (dk.kind == Disjunction::Kind::kLinear) {
      add_scaled(row.e, extra[0].val, to_double(dk.rhs));
    } else {
      for (std::size_t r = 0; r < dk.ct.size(); ++r) add_scaled(row.e, extra[r].val, dk.ct[r]);
    }
    add_scaled(row.e, tau.val, -1.0);
    row.e = compact(std::move(row.e));
    b.nonneg.push_back(std::move(row));

    for (const auto& v : pibar) t.pibar.push_back(v.val);
    for (const auto& v : pitil) t.pitil.push_back(v.val);
    for (const auto& v : extra) t.extra.push_back(v.val);
    L.terms.push_back(std::move(t));
  }

  if (one) {
    Affine row{{}, 1.0};
    for (const auto& v : normed) add_scaled(row.e, v.abs, -1.0);
    row.e = compact(std::move(row.e));
    b.nonneg.push_back(std::move(row));
  } else {
    std::vector<Affine> block;
    block.push_back({{}, 1.0});
    for (const auto& v : normed) block.push_back({v.val, 0.0});
    b.socs.push_back(std::move(block));
  }

  ConicProblem& cp = out.conic;
  cp.c.assign(static_cast<std::size_t>(b.ncols), 0.0);
  for (const auto& [j, v] : tau.val) cp.c[static_cast<std::size_t>(j)] -= v;
  for (std::size_t j = 0; j < n1; ++j)
    for (const auto& [c, v] : alpha[j].val) cp.c[static_cast<std::size_t>(c)] += v * x_star[j];
  for (std::size_t j = 0; j < n2; ++j)
    for (const auto& [c, v] : beta[j].val) cp.c[static_cast<std::size_t>(c)] += v * y_star[j];
  cp.A.cols = cp.G.cols = b.ncols;
  for (const auto& eq : b.equalities) {
    auto& row = cp.A.add_row();
    for (const auto& [j, v] : eq.e) row.add(j, v);
    cp.b.push_back(-eq.constant);
  }
  // Affine a >= 0 becomes  G = -a.e,  h = a.constant.
  auto emit = [&](const Affine& a) {
    auto& row = cp.G.add_row();
    for (const auto& [j, v] : a.e) row.add(j, -v);
    cp.h.push_back(a.constant);
  };
  for (const auto& a : b.nonneg) emit(a);
  if (!b.nonneg.empty()) cp.cones.push_back({ConeType::kNonneg, b.nonneg.size()});
  for (const auto& blk : b.socs) {
    for (const auto& a : blk) emit(a);
    cp.cones.push_back({ConeType::kSoc, blk.size()});
  }
  return out;
}

Cut postprocess_cut(Cut cut, const Vec& lb, const Vec& ub, double threshold) {
  const std::size_t n1 = cut.alpha.size();
  auto drop = [&](double& a, std::size_t j) {
    if (a == 0.0 || std::fabs(a) >= threshold) return;
    cut.tau -= std::max(a * lb[j], a * ub[j]);
    a = 0.0;
  };
  for (std::size_t j = 0; j < n1; ++j) drop(cut.alpha[j], j);
  for (std::size_t j = 0; j < cut.beta.size(); ++j) drop(cut.beta[j], n1 + j);
  return cut;
}

namespace {

Multipliers read_multipliers(const CgsocpProblem& prob, const Vec& x) {
  const PolyhedronP& P = *prob.P;
  const auto tail_cones = soc_list(P.cones);
  Multipliers m;
  for (std::size_t k = 0; k < prob.layout.terms.size(); ++k) {
    const auto& t = prob.layout.terms[k];
    Vec pb(t.pibar.size()), pt(t.pitil.size()), ex(t.extra.size());
    for (std::size_t r = 0; r < pb.size(); ++r) pb[r] = std::max(0.0, value(t.pibar[r], x));
    for (std::size_t r = 0; r < pt.size(); ++r) pt[r] = value(t.pitil[r], x);
    for (std::size_t r = 0; r < ex.size(); ++r) ex[r] = value(t.extra[r], x);
    if (!pt.empty()) pt = cone::project(tail_cones, pt);
    if (prob.disjunctions[k].kind == Disjunction::Kind::kLinear) ex[0] = std::min(0.0, ex[0]);
    else ex = cone::project_soc(ex);
    m.pibar.push_back(std::move(pb));
    m.pitil.push_back(std::move(pt));
    m.extra.push_back(std::move(ex));
  }
  return m;
}

// Largest tau with alpha'x + beta'y >= tau implied on P ∩ D_k by the
// multipliers of term k, using the box of P for the residual.
double safe_rhs(const CgsocpProblem& prob, const Multipliers& m, const Vec& alpha,
                const Vec& beta, std::size_t k) {
  const PolyhedronP& P = *prob.P;
  const Disjunction& dk = prob.disjunctions[k];
  const std::size_t n1 = P.n1, n2 = P.n2;
  Vec wx(n1, 0.0), wy(n2, 0.0);
  double low = 0.0;
  const Vec& pb = m.pibar[k];
  for (std::size_t r = 0; r < pb.size(); ++r) {
    if (pb[r] == 0.0) continue;
    for (std::size_t j = 0; j < n1; ++j) wx[j] += pb[r] * P.Mbar(r, j);
    for (std::size_t j = 0; j < n2; ++j) wy[j] += pb[r] * P.Nbar(r, j);
    low += pb[r] * P.hbar[r];
  }
  const Vec& pt = m.pitil[k];
  for (std::size_t r = 0; r < pt.size(); ++r) {
    for (std::size_t j = 0; j < n1; ++j) wx[j] += pt[r] * P.Mtil(r, j);
    for (std::size_t j = 0; j < n2; ++j) wy[j] += pt[r] * P.Ntil(r, j);
    low += pt[r] * P.htil[r];
  }
  const Vec& ex = m.extra[k];
  if (dk.kind == Disjunction::Kind::kLinear) {
    for (std::size_t j = 0; j < n1; ++j) wx[j] += ex[0] * dk.a[j];
    low += ex[0] * to_double(dk.rhs);
  } else {
    for (std::size_t r = 0; r < ex.size(); ++r) {
      for (std::size_t j = 0; j < n2; ++j) wy[j] += ex[r] * dk.Dt(r, j);
      low += ex[r] * dk.ct[r];
    }
  }
  double tau = low;
  for (std::size_t j = 0; j < n1; ++j) {
    const double r = alpha[j] - wx[j];
    tau += std::min(r * P.lb[j], r * P.ub[j]);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    const double r = beta[j] - wy[j];
    tau += std::min(r * P.lb[n1 + j], r * P.ub[n1 + j]);
  }
  return tau;
}

double safe_tau(const CgsocpProblem& prob, const Multipliers& m, const Vec& alpha,
                const Vec& beta) {
  double tau = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < prob.disjunctions.size(); ++k)
    tau = std::min(tau, safe_rhs(prob, m, alpha, beta, k));
  return tau;
}

}  // namespace

CgsocpSolution solve_cgsocp(const CgsocpProblem& prob, double min_violation) {
  const PolyhedronP& P = *prob.P;
  const std::size_t n1 = P.n1, n2 = P.n2;
  CgsocpSolution sol;
  const ConicOutcome o = conic_solve(prob.conic);
  sol.solver_status = o.status;
  sol.iterations = o.iterations;

  auto finish = [&](Cut cut, CutOutcome kind) {
    cut = postprocess_cut(std::move(cut), P.lb, P.ub);
    const double v = cut.violation(prob.x_star, prob.y_star);
    if (!std::isfinite(cut.tau) || !(v > min_violation)) return;
    sol.cut = std::move(cut);
    sol.violation = v;
    sol.outcome = kind;
  };

  using Family = NormalizationSpec::Family;
  if (o.status == ConicStatus::kOptimal) {
    sol.multipliers = read_multipliers(prob, o.x);
    Cut cut;
    cut.alpha.resize(n1);
    cut.beta.resize(n2);
    for (std::size_t j = 0; j < n1; ++j) cut.alpha[j] = value(prob.layout.alpha[j], o.x);
    for (std::size_t j = 0; j < n2; ++j) cut.beta[j] = value(prob.layout.beta[j], o.x);
    cut.tau = safe_tau(prob, sol.multipliers, cut.alpha, cut.beta);
    finish(std::move(cut), CutOutcome::kCut);
    return sol;
  }

  if (o.status == ConicStatus::kDualInfeasible && prob.norm.family != Family::kStandard) {
    sol.multipliers = read_multipliers(prob, o.x);
    Cut cut;
    cut.alpha.resize(n1);
    cut.beta.resize(n2);
    for (std::size_t j = 0; j < n1; ++j) cut.alpha[j] = value(prob.layout.alpha[j], o.x);
    for (std::size_t j = 0; j < n2; ++j) cut.beta[j] = value(prob.layout.beta[j], o.x);
    double nrm = 0.0;
    for (double a : cut.alpha) nrm += a * a;
    for (double a : cut.beta) nrm += a * a;
    nrm = std::sqrt(nrm);
    if (prob.norm.family == Family::kUniform && nrm > 1e-9) {
      for (double& a : cut.alpha) a /= nrm;
      for (double& a : cut.beta) a /= nrm;
      for (auto& v : sol.multipliers.pibar)
        for (double& a : v) a /= nrm;
      for (auto& v : sol.multipliers.pitil)
        for (double& a : v) a /= nrm;
      for (auto& v : sol.multipliers.extra)
        for (double& a : v) a /= nrm;
      cut.tau = safe_tau(prob, sol.multipliers, cut.alpha, cut.beta);
      finish(std::move(cut), CutOutcome::kRayCut);
      return sol;
    }
    // Every P ∩ D_k must be certified empty by the ray with alpha = beta = 0.
    const Vec za(n1, 0.0), zb(n2, 0.0);
    bool all_empty = true;
    for (std::size_t k = 0; k < prob.disjunctions.size(); ++k)
      if (!(safe_rhs(prob, sol.multipliers, za, zb, k) > 1e-9)) all_empty = false;
    if (all_empty) {
      sol.cut = Cut::always_violated(n1, n2);
      sol.violation = 1.0;
      sol.outcome = CutOutcome::kAlwaysViolated;
      return sol;
    }
    sol.numerical_warning = true;
    return sol;
  }

  sol.numerical_warning = true;
  return sol;
}

}  // namespace bdc
