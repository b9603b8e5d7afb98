// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "bdc/relaxations.hpp"

namespace bdc::mip {

namespace {

constexpr std::int64_t kOaKey = std::int64_t{1} << 40;
constexpr std::int64_t kCutKey = std::int64_t{1} << 41;

struct LpWarm : WarmStart {
  LpBasis basis;
  std::vector<std::int64_t> keys;
};

Vec cone_slack(const SocBlock& k, const Vec& z) {
  Vec s = k.T.multiply(z);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= k.t[i];
  return s;
}

double soc_gap(const Vec& s) {
  double t = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) t += s[i] * s[i];
  return std::sqrt(t) - s[0];
}

// s_0 - w's_1 >= 0 as a row in z.
Row soc_row(const SocBlock& k, const Vec& w) {
  const std::size_t n = k.T.cols();
  Row r;
  r.b = k.t[0];
  Vec a(k.T.row(0), k.T.row(0) + n);
  for (std::size_t i = 1; i < k.T.rows(); ++i) {
    if (w[i - 1] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) a[j] -= w[i - 1] * k.T(i, j);
    r.b -= w[i - 1] * k.t[i];
  }
  for (std::size_t j = 0; j < n; ++j) r.a.add(static_cast<int>(j), a[j]);
  return r;
}

}  // namespace

LpRelaxation::LpRelaxation(Vec c, Matrix G, Vec b, std::vector<SocBlock> cones)
    : c_(std::move(c)), g_(std::move(G)), b_(std::move(b)), cones_(std::move(cones)) {
  if (g_.rows() != b_.size() || (g_.rows() > 0 && g_.cols() != c_.size()))
    throw std::invalid_argument("LpRelaxation: inconsistent row data");
  if (g_.rows() == 0) g_ = Matrix(0, c_.size());
  for (const auto& k : cones_) {
    if (k.T.rows() == 0 || k.T.rows() != k.t.size() || k.T.cols() != c_.size())
      throw std::invalid_argument("LpRelaxation: inconsistent cone block");
    const std::size_t d = k.T.rows();
    oa_.push_back(soc_row(k, Vec(d - 1, 0.0)));
    for (std::size_t i = 1; i < d; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vec w(d - 1, 0.0);
        w[i - 1] = sgn;
        oa_.push_back(soc_row(k, w));
      }
    }
  }
}

double LpRelaxation::objective(const Vec& z) const { return dot(c_, z); }

double LpRelaxation::cone_violation(const Vec& z) const {
  double v = 0.0;
  for (const auto& k : cones_) v = std::max(v, soc_gap(cone_slack(k, z)));
  return v;
}

bool LpRelaxation::feasible(const Vec& z) const {
  if (g_.rows() > 0) {
    Vec gz = g_.multiply(z);
    for (std::size_t i = 0; i < gz.size(); ++i)
      if (gz[i] < b_[i] - feas_tol) return false;
  }
  return cone_violation(z) <= cone_tol;
}

RelaxResult LpRelaxation::solve(const Vec& lb, const Vec& ub, const std::vector<ActiveRow>& rows,
                                const WarmStart* warm) {
  const std::size_t n = c_.size();
  const auto* prev = dynamic_cast<const LpWarm*>(warm);
  LpBasis basis;
  std::vector<std::int64_t> basis_keys;
  if (prev) {
    basis = prev->basis;
    basis_keys = prev->keys;
  }
  for (int round = 0;; ++round) {
    LpProblem p;
    p.c = c_;
    p.l = lb;
    p.u = ub;
    const std::size_t m = g_.rows() + oa_.size() + rows.size();
    p.G = Matrix(m, n);
    p.b.resize(m);
    std::vector<std::int64_t> keys(m);
    std::size_t r = 0;
    for (std::size_t i = 0; i < g_.rows(); ++i, ++r) {
      std::copy(g_.row(i), g_.row(i) + n, p.G.row(r));
      p.b[r] = b_[i];
      keys[r] = static_cast<std::int64_t>(i);
    }
    for (std::size_t k = 0; k < oa_.size(); ++k, ++r) {
      for (const auto& [j, v] : oa_[k].a.entries) p.G(r, static_cast<std::size_t>(j)) = v;
      p.b[r] = oa_[k].b;
      keys[r] = kOaKey + static_cast<std::int64_t>(k);
    }
    for (const auto& ar : rows) {
      for (const auto& [j, v] : ar.row->a.entries) p.G(r, static_cast<std::size_t>(j)) = v;
      p.b[r] = ar.row->b;
      keys[r] = kCutKey + ar.id;
      ++r;
    }

    LpBasis start;
    if (!basis.empty() && basis.status.size() == n + basis_keys.size()) {
      std::unordered_map<std::int64_t, VarStatus> slack;
      for (std::size_t i = 0; i < basis_keys.size(); ++i) slack[basis_keys[i]] = basis.status[n + i];
      start.status.assign(basis.status.begin(), basis.status.begin() + static_cast<long>(n));
      for (std::size_t i = 0; i < m; ++i) {
        auto it = slack.find(keys[i]);
        start.status.push_back(it == slack.end() ? VarStatus::kBasic : it->second);
      }
    }
    const LpOutcome out = lp_solve(p, {}, start.empty() ? nullptr : &start);
    ++lp_solves_;
    RelaxResult res;
    if (out.status == LpStatus::kInfeasible) {
      res.status = RelaxStatus::kInfeasible;
      return res;
    }
    if (out.status != LpStatus::kOptimal) {
      res.status = RelaxStatus::kFailed;
      return res;
    }
    basis = out.basis;
    basis_keys = keys;
    bool added = false;
    if (round < max_oa_rounds) {
      for (const auto& k : cones_) {
        Vec s = cone_slack(k, out.z);
        if (soc_gap(s) <= cone_tol) continue;
        double nrm = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i) nrm += s[i] * s[i];
        nrm = std::sqrt(nrm);
        Vec w(s.begin() + 1, s.end());
        for (auto& v : w) v /= nrm;
        oa_.push_back(soc_row(k, w));
        added = true;
      }
    }
    if (!added) {
      res.status = RelaxStatus::kOptimal;
      res.z = out.z;
      res.bound = out.objective;
      auto w = std::make_shared<LpWarm>();
      w->basis = out.basis;
      w->keys = std::move(keys);
      res.warm = std::move(w);
      return res;
    }
  }
}

}  // namespace bdc::mip
