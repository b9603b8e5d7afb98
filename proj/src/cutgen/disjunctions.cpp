// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <cmath>
#include <stdexcept>

#include "bdc/cutgen.hpp"

namespace bdc {

NormalizationSpec NormalizationSpec::parse(std::string_view text) {
  if (text.size() != 2 || (text[1] != '1' && text[1] != '2'))
    throw std::invalid_argument("unknown normalization '" + std::string(text) + "'");
  NormalizationSpec n;
  switch (text[0]) {
    case 'S': n.family = Family::kStandard; break;
    case 'U': n.family = Family::kUniform; break;
    case 'C': n.family = Family::kCoefficient; break;
    default: throw std::invalid_argument("unknown normalization '" + std::string(text) + "'");
  }
  n.p = text[1] - '0';
  return n;
}

std::string NormalizationSpec::name() const {
  const char f = family == Family::kStandard ? 'S' : family == Family::kUniform ? 'U' : 'C';
  return std::string(1, f) + std::to_string(p);
}

Removal parse_removal(std::string_view text) {
  if (text == "RN") return Removal::kNone;
  if (text == "RB") return Removal::kBound;
  if (text == "RR") return Removal::kRelaxation;
  if (text == "RI") return Removal::kIntegrality;
  if (text == "RO") return Removal::kOptimality;
  throw std::invalid_argument("unknown removal strategy '" + std::string(text) + "'");
}

std::string to_string(Removal r) {
  switch (r) {
    case Removal::kNone: return "RN";
    case Removal::kBound: return "RB";
    case Removal::kRelaxation: return "RR";
    case Removal::kIntegrality: return "RI";
    case Removal::kOptimality: return "RO";
  }
  return "?";
}

std::string to_string(CutOutcome o) {
  switch (o) {
    case CutOutcome::kCut: return "cut";
    case CutOutcome::kNoViolatedCut: return "no_cut";
    case CutOutcome::kRayCut: return "ray_cut";
    case CutOutcome::kAlwaysViolated: return "always_violated";
  }
  return "?";
}

bool PolyhedronP::contains(const Vec& x, const Vec& y, double tol) const {
  for (std::size_t r = 0; r < num_linear(); ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < n1; ++j) s += Mbar(r, j) * x[j];
    for (std::size_t j = 0; j < n2; ++j) s += Nbar(r, j) * y[j];
    if (s < hbar[r] - tol * (1.0 + std::fabs(hbar[r]))) return false;
  }
  if (num_conic() > 0) {
    Vec u(num_conic());
    for (std::size_t r = 0; r < u.size(); ++r) {
      double s = -htil[r];
      for (std::size_t j = 0; j < n1; ++j) s += Mtil(r, j) * x[j];
      for (std::size_t j = 0; j < n2; ++j) s += Ntil(r, j) * y[j];
      u[r] = s;
    }
    std::vector<ConeBlock> blocks;
    for (std::size_t k : cones) blocks.push_back({ConeType::kSoc, k});
    if (cone::violation(blocks, u) > tol * (1.0 + norm_inf(u))) return false;
  }
  return true;
}

PolyhedronP make_polyhedron(const InstanceData& d, const Vec& lb, const Vec& ub) {
  const std::size_t n1 = d.n1, n2 = d.n2, n = n1 + n2;
  if (lb.size() != n || ub.size() != n) throw std::invalid_argument("make_polyhedron: box size");
  PolyhedronP P;
  P.n1 = n1;
  P.n2 = n2;
  P.lb = lb;
  P.ub = ub;
  const std::size_t m1 = d.h.size(), m2 = d.f.size(), ny = d.UY.size();
  const std::size_t rows = m1 + m2 + ny + 2 * n;
  P.Mbar = Matrix(rows, n1);
  P.Nbar = Matrix(rows, n2);
  P.hbar.assign(rows, 0.0);
  std::size_t r = 0;
  auto copy = [&](const Matrix& mx, const Matrix& my, const Vec& rhs, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i, ++r) {
      for (std::size_t j = 0; j < n1 && mx.rows() > 0; ++j) P.Mbar(r, j) = mx(i, j);
      for (std::size_t j = 0; j < n2 && my.rows() > 0; ++j) P.Nbar(r, j) = my(i, j);
      P.hbar[r] = rhs[i];
    }
  };
  copy(d.M, d.N, d.h, m1);
  copy(d.A, d.B, d.f, m2);
  copy(Matrix(), d.CY, d.UY, ny);
  P.bound_rows_begin = r;
  for (std::size_t j = 0; j < n; ++j) {
    Matrix& m = j < n1 ? P.Mbar : P.Nbar;
    const std::size_t c = j < n1 ? j : j - n1;
    m(r, c) = 1.0;
    P.hbar[r++] = lb[j];
    m(r, c) = -1.0;
    P.hbar[r++] = -ub[j];
  }
  P.Mtil = d.Mt.rows() > 0 ? d.Mt : Matrix(0, n1);
  P.Ntil = d.Nt.rows() > 0 ? d.Nt : Matrix(0, n2);
  P.htil = d.ht;
  P.cones = d.cones;
  return P;
}

std::vector<Disjunction> build_disjunctions(const BilevelInstance& inst,
                                            const std::vector<long>& y_hat) {
  const std::size_t n1 = inst.n1, n2 = inst.n2, n3 = inst.n3();
  if (y_hat.size() != n2) throw std::invalid_argument("build_disjunctions: y_hat size");
  std::vector<Disjunction> out;
  out.reserve(inst.m2() + 1);

  Disjunction d0;
  d0.kind = Disjunction::Kind::kObjective;
  d0.index = 0;
  d0.q_hat = eval_follower_objective(inst, y_hat);
  d0.Dt = Matrix(n3 + 2, n2);
  for (std::size_t j = 0; j < n2; ++j) {
    const double g = to_double(inst.g[j]);
    d0.Dt(0, j) = -0.5 * g;
    for (std::size_t r = 0; r < n3; ++r) d0.Dt(1 + r, j) = to_double(inst.V(r, j));
    d0.Dt(n3 + 1, j) = 0.5 * g;
  }
  d0.ct.assign(n3 + 2, 0.0);
  d0.ct[0] = to_double((-1 - d0.q_hat) / 2);
  d0.ct[n3 + 1] = to_double((-1 + d0.q_hat) / 2);
  out.push_back(std::move(d0));

  for (std::size_t i = 0; i < inst.m2(); ++i) {
    Disjunction di;
    di.kind = Disjunction::Kind::kLinear;
    di.index = i + 1;
    di.a.resize(n1);
    for (std::size_t j = 0; j < n1; ++j) di.a[j] = to_double(inst.A(i, j));
    Rational by = 0;
    for (std::size_t j = 0; j < n2; ++j) by += inst.B(i, j) * y_hat[j];
    di.rhs = inst.f[i] - by - 1;
    out.push_back(std::move(di));
  }
  return out;
}

std::vector<Disjunction> build_disjunctions(const BilevelInstance& inst, const Vec& y_hat) {
  auto yi = integer_vector(y_hat, 0.0);
  if (!yi) throw std::invalid_argument("build_disjunctions: y_hat is not integral");
  return build_disjunctions(inst, *yi);
}

}  // namespace bdc
