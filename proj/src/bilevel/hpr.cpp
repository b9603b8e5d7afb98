// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <stdexcept>

#include "bdc/bilevel.hpp"

namespace bdc {

Placement parse_placement(std::string_view text) {
  if (text == "IO") return Placement::kIO;
  if (text == "IFO") return Placement::kIFO;
  if (text == "IG") return Placement::kIG;
  if (text == "IFG") return Placement::kIFG;
  throw std::invalid_argument("unknown separation setting: " + std::string(text));
}

std::string to_string(Placement p) {
  switch (p) {
    case Placement::kIO: return "IO";
    case Placement::kIFO: return "IFO";
    case Placement::kIG: return "IG";
    case Placement::kIFG: return "IFG";
  }
  return "?";
}

bool separates_fractional(Placement p) { return p == Placement::kIFO || p == Placement::kIFG; }

SeparationStrategy strategy_of(Placement p) {
  return (p == Placement::kIO || p == Placement::kIFO) ? SeparationStrategy::kOptimal
                                                       : SeparationStrategy::kGreedy;
}

std::string SolveConfig::name() const {
  return to_string(placement) + "+" + to_string(removal) + "+" + norm.name();
}

std::vector<mip::SocBlock> leader_cones(const InstanceData& d) {
  std::vector<mip::SocBlock> out;
  const std::size_t n = d.n();
  std::size_t r0 = 0;
  for (std::size_t k : d.cones) {
    mip::SocBlock b;
    b.T = Matrix(k, n);
    b.t.assign(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t j = 0; j < d.n1; ++j) b.T(r, j) = d.Mt(r0 + r, j);
      for (std::size_t j = 0; j < d.n2; ++j) b.T(r, d.n1 + j) = d.Nt(r0 + r, j);
      b.t[r] = d.ht[r0 + r];
    }
    out.push_back(std::move(b));
    r0 += k;
  }
  return out;
}

mip::LpRelaxation make_hpr(const InstanceData& d) {
  const std::size_t n1 = d.n1, n2 = d.n2, n = d.n();
  const std::size_t m1 = d.h.size(), m2 = d.f.size(), mY = d.UY.size();
  Matrix G(m1 + m2 + mY, n);
  Vec b(G.rows());
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j = 0; j < n1; ++j) G(i, j) = d.M(i, j);
    for (std::size_t j = 0; j < n2; ++j) G(i, n1 + j) = d.N(i, j);
    b[i] = d.h[i];
  }
  for (std::size_t i = 0; i < m2; ++i) {
    for (std::size_t j = 0; j < n1; ++j) G(m1 + i, j) = d.A(i, j);
    for (std::size_t j = 0; j < n2; ++j) G(m1 + i, n1 + j) = d.B(i, j);
    b[m1 + i] = d.f[i];
  }
  for (std::size_t i = 0; i < mY; ++i) {
    for (std::size_t j = 0; j < n2; ++j) G(m1 + m2 + i, n1 + j) = d.CY(i, j);
    b[m1 + m2 + i] = d.UY[i];
  }
  Vec c(n);
  for (std::size_t j = 0; j < n1; ++j) c[j] = d.c[j];
  for (std::size_t j = 0; j < n2; ++j) c[n1 + j] = d.d[j];
  return mip::LpRelaxation(std::move(c), std::move(G), std::move(b), leader_cones(d));
}

}  // namespace bdc
