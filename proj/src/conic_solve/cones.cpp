// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdc/conic_solve.hpp"
#include "bdc/kernels.hpp"

namespace bdc::cone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tail_norm(const double* u, std::size_t k) {
  return k > 1 ? std::sqrt(kernels::sumsq(u + 1, k - 1)) : 0.0;
}

// u0^2 - ||u1||^2 factored to limit cancellation.
double soc_residual(const double* u, std::size_t k) {
  const double t = tail_norm(u, k);
  return (u[0] - t) * (u[0] + t);
}

double soc_step(const double* u, const double* d, std::size_t k) {
  // Smallest positive root of (u0 + a d0)^2 - ||u1 + a d1||^2.
  const double qa = d[0] * d[0] - (k > 1 ? kernels::sumsq(d + 1, k - 1) : 0.0);
  const double qb = 2.0 * (u[0] * d[0] - (k > 1 ? kernels::dot(u + 1, d + 1, k - 1) : 0.0));
  const double qc = std::max(soc_residual(u, k), 0.0);
  if (qc == 0.0) return 0.0;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (std::fabs(qa) <= 1e-300) return qb < 0.0 ? -qc / qb : kInf;
  if (disc < 0.0) return kInf;
  if (qa < 0.0 || qb < 0.0) return 2.0 * qc / (-qb + std::sqrt(disc));
  return kInf;
}

}  // namespace

double violation(const std::vector<ConeBlock>& cones, const Vec& u) {
  double v = 0.0;
  std::size_t r = 0;
  for (const auto& b : cones) {
    if (b.type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < b.dim; ++i) v = std::max(v, -u[r + i]);
    } else {
      v = std::max(v, tail_norm(&u[r], b.dim) - u[r]);
    }
    r += b.dim;
  }
  return v;
}

Vec project_soc(const Vec& u) {
  const std::size_t k = u.size();
  const double t = tail_norm(u.data(), k);
  if (t <= u[0]) return u;
  if (t <= -u[0]) return Vec(k, 0.0);
  const double a = 0.5 * (u[0] + t);
  Vec out(k);
  out[0] = a;
  for (std::size_t i = 1; i < k; ++i) out[i] = a * u[i] / t;
  return out;
}

Vec project(const std::vector<ConeBlock>& cones, const Vec& u) {
  Vec out = u;
  std::size_t r = 0;
  for (const auto& b : cones) {
    if (b.type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < b.dim; ++i) out[r + i] = std::max(0.0, u[r + i]);
    } else {
      Vec blk(u.begin() + static_cast<long>(r), u.begin() + static_cast<long>(r + b.dim));
      Vec p = project_soc(blk);
      std::copy(p.begin(), p.end(), out.begin() + static_cast<long>(r));
    }
    r += b.dim;
  }
  return out;
}

double max_step(const std::vector<ConeBlock>& cones, const Vec& u, const Vec& d) {
  double a = kInf;
  std::size_t r = 0;
  for (const auto& b : cones) {
    if (b.type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < b.dim; ++i)
        if (d[r + i] < 0.0) a = std::min(a, -u[r + i] / d[r + i]);
    } else {
      a = std::min(a, soc_step(&u[r], &d[r], b.dim));
    }
    r += b.dim;
  }
  return a;
}

std::vector<Scaling> nt_scaling(const std::vector<ConeBlock>& cones, const Vec& s, const Vec& z) {
  std::vector<Scaling> out;
  out.reserve(cones.size());
  std::size_t r = 0;
  for (const auto& b : cones) {
    Scaling sc;
    sc.type = b.type;
    if (b.type == ConeType::kNonneg) {
      sc.w.resize(b.dim);
      for (std::size_t i = 0; i < b.dim; ++i) sc.w[i] = std::sqrt(s[r + i] / z[r + i]);
    } else {
      const std::size_t k = b.dim;
      const double sn = std::sqrt(std::max(soc_residual(&s[r], k), 1e-300));
      const double zn = std::sqrt(std::max(soc_residual(&z[r], k), 1e-300));
      Vec sb(k), zb(k);
      for (std::size_t i = 0; i < k; ++i) {
        sb[i] = s[r + i] / sn;
        zb[i] = z[r + i] / zn;
      }
      const double gamma = std::sqrt(std::max((1.0 + kernels::dot(sb.data(), zb.data(), k)) / 2.0, 1e-300));
      Vec wb(k);
      wb[0] = (sb[0] + zb[0]) / (2.0 * gamma);
      for (std::size_t i = 1; i < k; ++i) wb[i] = (sb[i] - zb[i]) / (2.0 * gamma);
      sc.w.resize(k);
      const double den = std::sqrt(2.0 * (wb[0] + 1.0));
      sc.w[0] = (wb[0] + 1.0) / den;
      for (std::size_t i = 1; i < k; ++i) sc.w[i] = wb[i] / den;
      sc.beta = std::sqrt(sn / zn);
    }
    out.push_back(std::move(sc));
    r += b.dim;
  }
  return out;
}

namespace {

// W u = beta (2 v v'u - J u)
void soc_w(const Scaling& sc, const double* u, double* out, std::size_t k) {
  const double vu = kernels::dot(sc.w.data(), u, k);
  out[0] = sc.beta * (2.0 * sc.w[0] * vu - u[0]);
  for (std::size_t i = 1; i < k; ++i) out[i] = sc.beta * (2.0 * sc.w[i] * vu + u[i]);
}

// W^{-1} u = (1/beta) (2 J v (v'J u) - J u)
void soc_winv(const Scaling& sc, const double* u, double* out, std::size_t k) {
  double vju = sc.w[0] * u[0];
  for (std::size_t i = 1; i < k; ++i) vju -= sc.w[i] * u[i];
  out[0] = (2.0 * sc.w[0] * vju - u[0]) / sc.beta;
  for (std::size_t i = 1; i < k; ++i) out[i] = (-2.0 * sc.w[i] * vju + u[i]) / sc.beta;
}

}  // namespace

Vec apply_w(const std::vector<ConeBlock>& cones, const std::vector<Scaling>& sc, const Vec& u) {
  Vec out(u.size());
  std::size_t r = 0;
  for (std::size_t b = 0; b < cones.size(); ++b) {
    const std::size_t k = cones[b].dim;
    if (cones[b].type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < k; ++i) out[r + i] = sc[b].w[i] * u[r + i];
    } else {
      soc_w(sc[b], &u[r], &out[r], k);
    }
    r += k;
  }
  return out;
}

Vec apply_winv(const std::vector<ConeBlock>& cones, const std::vector<Scaling>& sc, const Vec& u) {
  Vec out(u.size());
  std::size_t r = 0;
  for (std::size_t b = 0; b < cones.size(); ++b) {
    const std::size_t k = cones[b].dim;
    if (cones[b].type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < k; ++i) out[r + i] = u[r + i] / sc[b].w[i];
    } else {
      soc_winv(sc[b], &u[r], &out[r], k);
    }
    r += k;
  }
  return out;
}

Vec jordan(const std::vector<ConeBlock>& cones, const Vec& a, const Vec& b) {
  Vec out(a.size());
  std::size_t r = 0;
  for (const auto& blk : cones) {
    const std::size_t k = blk.dim;
    if (blk.type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < k; ++i) out[r + i] = a[r + i] * b[r + i];
    } else {
      out[r] = kernels::dot(&a[r], &b[r], k);
      for (std::size_t i = 1; i < k; ++i) out[r + i] = a[r] * b[r + i] + b[r] * a[r + i];
    }
    r += k;
  }
  return out;
}

Vec jordan_div(const std::vector<ConeBlock>& cones, const Vec& l, const Vec& rhs) {
  Vec out(l.size());
  std::size_t r = 0;
  for (const auto& blk : cones) {
    const std::size_t k = blk.dim;
    if (blk.type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < k; ++i) out[r + i] = rhs[r + i] / l[r + i];
    } else {
      const double l0 = l[r];
      const double det = soc_residual(&l[r], k);
      const double l1r1 = k > 1 ? kernels::dot(&l[r + 1], &rhs[r + 1], k - 1) : 0.0;
      const double u0 = (l0 * rhs[r] - l1r1) / det;
      out[r] = u0;
      for (std::size_t i = 1; i < k; ++i) out[r + i] = (rhs[r + i] - u0 * l[r + i]) / l0;
    }
    r += k;
  }
  return out;
}

Vec identity(const std::vector<ConeBlock>& cones) {
  std::size_t m = 0;
  for (const auto& b : cones) m += b.dim;
  Vec e(m, 0.0);
  std::size_t r = 0;
  for (const auto& b : cones) {
    if (b.type == ConeType::kNonneg) {
      for (std::size_t i = 0; i < b.dim; ++i) e[r + i] = 1.0;
    } else {
      e[r] = 1.0;
    }
    r += b.dim;
  }
  return e;
}

std::size_t degree(const std::vector<ConeBlock>& cones) {
  std::size_t d = 0;
  for (const auto& b : cones) d += b.type == ConeType::kNonneg ? b.dim : 1;
  return d;
}

}  // namespace bdc::cone
