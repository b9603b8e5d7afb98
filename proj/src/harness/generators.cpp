// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bdc/harness.hpp"

namespace bdc {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw std::invalid_argument("malformed MKP: " + what);
}

long parse_long(const std::string& tok) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    malformed("not an integer: '" + tok + "'");
  }
  if (pos != tok.size()) malformed("not an integer: '" + tok + "'");
  return v;
}

// Smallest s >= 0 with s^4 >= v.
long ceil_fourth_root(long v) {
  long s = static_cast<long>(std::floor(std::pow(static_cast<double>(v), 0.25)));
  while (s > 0 && (s - 1) * (s - 1) * (s - 1) * (s - 1) >= v) --s;
  while (s * s * s * s < v) ++s;
  return s;
}

void empty_leader_cone(BilevelInstance& inst) {
  inst.Mt = RMat(0, inst.n1);
  inst.Nt = RMat(0, inst.n2);
  inst.ht.clear();
  inst.cones.clear();
  inst.CY = RMat(0, inst.n2);
  inst.UY.clear();
}

}  // namespace

MkpData parse_mkp(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream head(line);
  std::vector<long> counts;
  for (std::string tok; head >> tok;) counts.push_back(parse_long(tok));
  if (counts.size() < 2 || counts.size() > 3) malformed("first line must hold 'n m [optimum]'");
  if (counts[0] <= 0 || counts[1] <= 0) malformed("item and constraint counts must be positive");
  MkpData mkp;
  mkp.n = static_cast<std::size_t>(counts[0]);
  mkp.m = static_cast<std::size_t>(counts[1]);
  std::vector<long> rest;
  for (std::string tok; in >> tok;) rest.push_back(parse_long(tok));
  const std::size_t need = mkp.n + mkp.m * mkp.n + mkp.m;
  if (rest.size() != need)
    malformed("expected " + std::to_string(need) + " numbers after the first line, got " +
              std::to_string(rest.size()));
  std::size_t k = 0;
  mkp.profit.assign(rest.begin(), rest.begin() + static_cast<long>(mkp.n));
  k = mkp.n;
  mkp.weight.resize(mkp.m);
  for (std::size_t i = 0; i < mkp.m; ++i) {
    mkp.weight[i].assign(rest.begin() + static_cast<long>(k),
                         rest.begin() + static_cast<long>(k + mkp.n));
    k += mkp.n;
  }
  mkp.capacity.assign(rest.begin() + static_cast<long>(k), rest.end());
  return mkp;
}

MkpData read_mkp_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mkp(ss.str());
}

std::string write_mkp(const MkpData& mkp) {
  std::ostringstream out;
  out << mkp.n << ' ' << mkp.m << '\n';
  auto line = [&](const std::vector<long>& v) {
    for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << v[j];
    out << '\n';
  };
  line(mkp.profit);
  for (const auto& w : mkp.weight) line(w);
  line(mkp.capacity);
  return out.str();
}

MkpData synthetic_mkp(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw std::invalid_argument("synthetic_mkp: empty dimensions");
  SplitMix64 rng(seed);
  MkpData mkp;
  mkp.n = n;
  mkp.m = m;
  for (std::size_t j = 0; j < n; ++j) mkp.profit.push_back(rng.uniform(1, 99));
  mkp.weight.assign(m, std::vector<long>(n));
  for (auto& row : mkp.weight)
    for (auto& w : row) w = rng.uniform(0, 99);
  for (const auto& row : mkp.weight) {
    long sum = 0;
    for (long w : row) sum += w;
    mkp.capacity.push_back(sum / 2);
  }
  return mkp;
}

std::vector<long> covering_complement(const std::vector<long>& z) {
  std::vector<long> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = 1 - z[j];
  return out;
}

BilevelInstance gen_qbcov(std::size_t n, std::size_t m1, std::size_t m2, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_qbcov: n must be even and >= 2");
  if (m1 > 1) throw std::invalid_argument("gen_qbcov: m1 must be 0 or 1");
  if (m2 < 1 || m2 > 2) throw std::invalid_argument("gen_qbcov: m2 must be 1 or 2");
  SplitMix64 rng(seed);
  BilevelInstance inst;
  inst.n1 = inst.n2 = n / 2;
  const std::size_t n1 = inst.n1, n2 = inst.n2;
  auto fill = [&](RMat& a, long hi) {
    for (auto& q : a.data) q = rng.uniform(0, hi);
  };
  for (std::size_t j = 0; j < n1; ++j) inst.c.push_back(rng.uniform(0, 99));
  for (std::size_t j = 0; j < n2; ++j) inst.d.push_back(rng.uniform(0, 99));
  inst.M = RMat(m1, n1);
  inst.N = RMat(m1, n2);
  fill(inst.M, 99);
  fill(inst.N, 99);
  for (std::size_t i = 0; i < m1; ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < n1; ++j) sum += inst.M(i, j);
    for (std::size_t j = 0; j < n2; ++j) sum += inst.N(i, j);
    inst.h.push_back(sum / 4);
  }
  inst.A = RMat(m2, n1);
  inst.B = RMat(m2, n2);
  fill(inst.A, 99);
  fill(inst.B, 99);
  for (std::size_t i = 0; i < m2; ++i) {
    long sum = 0;
    for (std::size_t j = 0; j < n1; ++j) sum += static_cast<long>(inst.A(i, j).get_num().get_si());
    for (std::size_t j = 0; j < n2; ++j) sum += static_cast<long>(inst.B(i, j).get_num().get_si());
    // The linking right-hand side must be integral; over integer points
    // a'z >= sum/4 and a'z >= ceil(sum/4) coincide.
    inst.f.push_back(Rational((sum + 3) / 4));
  }
  inst.V = RMat(n2, n2);
  fill(inst.V, 9);
  inst.g.assign(n2, 0);
  empty_leader_cone(inst);
  inst.lb.assign(inst.n(), 0);
  inst.ub.assign(inst.n(), 1);
  inst.validate();
  return inst;
}

BilevelInstance gen_qbmkp(const MkpData& mkp, std::size_t m2, double leader_share,
                          bool integer_domain, std::uint64_t seed) {
  if (m2 < 1) throw std::invalid_argument("gen_qbmkp: m2 must be positive");
  if (mkp.m < m2 + 1) throw std::invalid_argument("gen_qbmkp: need at least m2 + 1 constraints");
  if (!(leader_share > 0.0 && leader_share < 1.0))
    throw std::invalid_argument("gen_qbmkp: leader share must lie in (0, 1)");
  const auto n1 = static_cast<std::size_t>(std::ceil(leader_share * static_cast<double>(mkp.n) - 1e-9));
  if (n1 == 0 || n1 >= mkp.n) throw std::invalid_argument("gen_qbmkp: empty leader or follower");
  const std::size_t n2 = mkp.n - n1;
  const std::size_t m1 = mkp.m - m2;
  const long scale = integer_domain ? 2 : 1;

  BilevelInstance inst;
  inst.n1 = n1;
  inst.n2 = n2;
  for (std::size_t j = 0; j < n1; ++j) inst.c.push_back(mkp.profit[j]);
  for (std::size_t j = 0; j < n2; ++j) inst.d.push_back(mkp.profit[n1 + j]);
  auto covering = [&](std::size_t row, RMat& L, RMat& F, std::size_t r, RVec& rhs) {
    long sum = 0;
    for (std::size_t j = 0; j < mkp.n; ++j) sum += mkp.weight[row][j];
    for (std::size_t j = 0; j < n1; ++j) L(r, j) = mkp.weight[row][j];
    for (std::size_t j = 0; j < n2; ++j) F(r, j) = mkp.weight[row][n1 + j];
    rhs.push_back(Rational(scale * (sum - mkp.capacity[row])));
  };
  inst.M = RMat(m1, n1);
  inst.N = RMat(m1, n2);
  for (std::size_t i = 0; i < m1; ++i) covering(i, inst.M, inst.N, i, inst.h);
  inst.A = RMat(m2, n1);
  inst.B = RMat(m2, n2);
  for (std::size_t i = 0; i < m2; ++i) covering(m1 + i, inst.A, inst.B, i, inst.f);

  long dmax = 0;
  for (std::size_t j = 0; j < n2; ++j) dmax = std::max(dmax, std::abs(mkp.profit[n1 + j]));
  const long sigma = ceil_fourth_root(dmax);
  SplitMix64 rng(seed);
  inst.V = RMat(n2, n2);
  for (auto& q : inst.V.data) q = rng.uniform(-sigma, sigma);
  inst.g.assign(n2, 0);
  empty_leader_cone(inst);
  inst.lb.assign(inst.n(), 0);
  inst.ub.assign(inst.n(), integer_domain ? 5 : 1);
  inst.validate();
  return inst;
}

BilevelInstance generate(const GeneratorSpec& spec) {
  if (spec.family == GeneratorSpec::Family::kQBCov)
    return gen_qbcov(spec.n, spec.m1, spec.m2, spec.seed);
  const MkpData mkp = spec.mkp_path.empty()
                          ? synthetic_mkp(spec.n, spec.mkp_constraints, SplitMix64(spec.seed).next())
                          : read_mkp_file(spec.mkp_path);
  return gen_qbmkp(mkp, spec.m2, spec.leader_share, spec.integer_domain, spec.seed);
}

}  // namespace bdc
