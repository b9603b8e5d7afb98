// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bdc/harness.hpp"

namespace bdc {

namespace {

// Exact decimal when the denominator divides a power of ten.
std::string lp_number(const Rational& q) {
  mpz_class den = q.get_den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", to_double(q));
    return buf;
  }
  const int k = std::max(twos, fives);
  mpz_class scale = 1;
  for (int i = 0; i < k; ++i) scale *= 10;
  mpz_class num = q.get_num() * scale / q.get_den();
  const bool neg = num < 0;
  if (neg) num = -num;
  std::string digits = num.get_str();
  if (k > 0) {
    if (static_cast<int>(digits.size()) <= k) digits.insert(0, k - digits.size() + 1, '0');
    digits.insert(digits.size() - k, ".");
  }
  return (neg ? "-" : "") + digits;
}

struct Term {
  Rational coef;
  std::string var;
};

std::string expr(const std::vector<Term>& terms) {
  std::string out;
  for (const auto& t : terms) {
    if (t.coef == 0) continue;
    const Rational a = abs(t.coef);
    out += t.coef < 0 ? " - " : " + ";
    if (a != 1) out += lp_number(a) + " ";
    out += t.var;
  }
  return out.empty() ? " 0" : out;
}

std::string xname(std::size_t j) { return "x" + std::to_string(j); }
std::string yname(std::size_t j) { return "y" + std::to_string(j); }
std::string wname(std::size_t i, std::size_t j) {
  return "w" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

Rational McCormickModel::follower_value(const std::vector<long>& y,
                                        const std::vector<long>& w) const {
  Rational v = 0;
  for (std::size_t i = 0; i < n2; ++i) v += follower_linear[i] * y[i];
  for (std::size_t k = 0; k < products.size(); ++k) v += follower_product[k] * w[k];
  return v;
}

McCormickModel export_mccormick(const BilevelInstance& inst) {
  inst.validate();
  if (!inst.is_binary()) throw std::invalid_argument("export_mccormick: instance is not binary");
  if (!inst.cones.empty())
    throw std::invalid_argument("export_mccormick: conic leader constraints cannot be linearized");
  const std::size_t n1 = inst.n1, n2 = inst.n2;
  McCormickModel mc;
  mc.n1 = n1;
  mc.n2 = n2;

  // R = V'V
  RMat R(n2, n2);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t r = 0; r < inst.V.rows; ++r) R(i, j) += inst.V(r, i) * inst.V(r, j);

  mc.follower_linear.resize(n2);
  for (std::size_t i = 0; i < n2; ++i) mc.follower_linear[i] = R(i, i) + inst.g[i];
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = i + 1; j < n2; ++j)
      if (R(i, j) != 0) {
        mc.products.emplace_back(i, j);
        mc.follower_product.push_back(2 * R(i, j));
      }

  auto row_terms = [&](const RMat& L, const RMat& F, std::size_t r) {
    std::vector<Term> t;
    for (std::size_t j = 0; j < n1; ++j) t.push_back({L(r, j), xname(j)});
    for (std::size_t j = 0; j < n2; ++j) t.push_back({F(r, j), yname(j)});
    return t;
  };

  std::ostringstream lp;
  lp << "\\ Leader problem of a bilevel instance; follower data in the aux file\n";
  lp << "Minimize\n obj:";
  {
    std::vector<Term> t;
    for (std::size_t j = 0; j < n1; ++j) t.push_back({inst.c[j], xname(j)});
    for (std::size_t j = 0; j < n2; ++j) t.push_back({inst.d[j], yname(j)});
    lp << expr(t) << '\n';
  }
  lp << "Subject To\n";
  std::vector<std::string> follower_rows;
  for (std::size_t i = 0; i < inst.m1(); ++i)
    lp << " lead" << i << ":" << expr(row_terms(inst.M, inst.N, i)) << " >= "
       << lp_number(inst.h[i]) << '\n';
  for (std::size_t i = 0; i < inst.m2(); ++i) {
    const std::string name = "link" + std::to_string(i);
    follower_rows.push_back(name);
    lp << ' ' << name << ":" << expr(row_terms(inst.A, inst.B, i)) << " >= "
       << lp_number(inst.f[i]) << '\n';
  }
  for (std::size_t i = 0; i < inst.nY(); ++i) {
    const std::string name = "fol" + std::to_string(i);
    follower_rows.push_back(name);
    std::vector<Term> t;
    for (std::size_t j = 0; j < n2; ++j) t.push_back({inst.CY(i, j), yname(j)});
    lp << ' ' << name << ":" << expr(t) << " >= " << lp_number(inst.UY[i]) << '\n';
  }
  for (const auto& [i, j] : mc.products) {
    const std::string w = wname(i, j), base = "mc" + std::to_string(i) + "_" + std::to_string(j);
    lp << ' ' << base << "a: " << w << " - " << yname(i) << " - " << yname(j) << " >= -1\n";
    lp << ' ' << base << "b: " << w << " - " << yname(i) << " <= 0\n";
    lp << ' ' << base << "c: " << w << " - " << yname(j) << " <= 0\n";
    for (char s : {'a', 'b', 'c'}) follower_rows.push_back(base + s);
  }
  lp << "Bounds\n";
  for (const auto& [i, j] : mc.products) lp << " 0 <= " << wname(i, j) << " <= 1\n";
  lp << "Binaries\n";
  for (std::size_t j = 0; j < n1; ++j) lp << ' ' << xname(j) << '\n';
  for (std::size_t j = 0; j < n2; ++j) lp << ' ' << yname(j) << '\n';
  lp << "End\n";
  mc.lp = lp.str();

  std::ostringstream aux;
  aux << "@NUMVARS\n" << n2 + mc.products.size() << '\n';
  aux << "@NUMCONSTRS\n" << follower_rows.size() << '\n';
  aux << "@VARSBEGIN\n";
  for (std::size_t i = 0; i < n2; ++i)
    aux << yname(i) << ' ' << lp_number(mc.follower_linear[i]) << '\n';
  for (std::size_t k = 0; k < mc.products.size(); ++k)
    aux << wname(mc.products[k].first, mc.products[k].second) << ' '
        << lp_number(mc.follower_product[k]) << '\n';
  aux << "@VARSEND\n@CONSTRSBEGIN\n";
  for (const auto& r : follower_rows) aux << r << '\n';
  aux << "@CONSTRSEND\n@NAME\nbilevel\n@LP\n";
  mc.aux = aux.str();
  return mc;
}

}  // namespace bdc
