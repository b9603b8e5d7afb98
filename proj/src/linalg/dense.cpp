// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include "bdc/dense.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "bdc/kernels.hpp"

namespace bdc {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::append_row(const Vec& r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw std::invalid_argument("Matrix::append_row: width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

void Matrix::resize(std::size_t rows, std::size_t cols) {
  std::vector<double> next(rows * cols, 0.0);
  for (std::size_t i = 0; i < std::min(rows, rows_); ++i)
    for (std::size_t j = 0; j < std::min(cols, cols_); ++j) next[i * cols + j] = (*this)(i, j);
  rows_ = rows;
  cols_ = cols;
  data_ = std::move(next);
}

Vec Matrix::multiply(const Vec& x) const {
  assert(x.size() == cols_);
  Vec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = kernels::dot(row(i), x.data(), cols_);
  return out;
}

Vec Matrix::multiply_transpose(const Vec& y) const {
  assert(y.size() == rows_);
  Vec out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    if (y[i] != 0.0) kernels::axpy(y[i], row(i), out.data(), cols_);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec SparseMatrix::multiply(const Vec& x) const {
  Vec out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i].dot(x.data());
  return out;
}

Vec SparseMatrix::multiply_transpose(const Vec& y) const {
  Vec out(cols, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (y[i] == 0.0) continue;
    for (const auto& [j, v] : rows[i].entries) out[j] += v * y[i];
  }
  return out;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
  SparseMatrix s;
  s.cols = static_cast<int>(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto& r = s.add_row();
    for (std::size_t j = 0; j < m.cols(); ++j) r.add(static_cast<int>(j), m(i, j));
  }
  return s;
}

bool LuFactor::factor(const Matrix& a, double pivot_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("LuFactor: matrix not square");
  n_ = a.rows();
  lu_ = a;
  perm_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
  double scale = 0.0;
  for (std::size_t i = 0; i < n_; ++i) scale = std::max(scale, kernels::max_abs(lu_.row(i), n_));
  const double tol = pivot_tol * std::max(scale, 1.0);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    double best = std::fabs(lu_(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      double v = std::fabs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best <= tol) return false;
    if (p != k) {
      std::swap_ranges(lu_.row(k), lu_.row(k) + n_, lu_.row(p));
      std::swap(perm_[k], perm_[p]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n_; ++i) {
      double l = lu_(i, k) * inv;
      lu_(i, k) = l;
      if (l != 0.0) kernels::axpy(-l, lu_.row(k) + k + 1, lu_.row(i) + k + 1, n_ - k - 1);
    }
  }
  return true;
}

void LuFactor::solve(Vec& b) const {
  Vec x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i) x[i] -= kernels::dot(lu_.row(i), x.data(), i);
  for (std::size_t i = n_; i-- > 0;) {
    x[i] -= kernels::dot(lu_.row(i) + i + 1, x.data() + i + 1, n_ - i - 1);
    x[i] /= lu_(i, i);
  }
  b = std::move(x);
}

void LuFactor::solve_transpose(Vec& b) const {
  // A' = U' L' P, so solve U' w = b, L' v = w, x = P' v.
  Vec w = b;
  for (std::size_t i = 0; i < n_; ++i) {
    w[i] /= lu_(i, i);
    if (w[i] != 0.0) kernels::axpy(-w[i], lu_.row(i) + i + 1, w.data() + i + 1, n_ - i - 1);
  }
  for (std::size_t i = n_; i-- > 0;) {
    if (w[i] != 0.0) kernels::axpy(-w[i], lu_.row(i), w.data(), i);
  }
  for (std::size_t i = 0; i < n_; ++i) b[perm_[i]] = w[i];
}

void LdltFactor::factor(const Matrix& k, std::size_t num_positive, double eps, double delta) {
  if (k.rows() != k.cols()) throw std::invalid_argument("LdltFactor: matrix not square");
  n_ = k.rows();
  regularized_ = 0;
  // Row-major lower triangle; l_(i, j) for j < i holds L, d_ holds D.
  l_ = Matrix(n_, n_);
  d_.assign(n_, 0.0);
  Vec work(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    // work[t] = L(j,t) * D(t) for t < j
    for (std::size_t t = 0; t < j; ++t) work[t] = l_(j, t) * d_[t];
    double dj = k(j, j) - kernels::dot(l_.row(j), work.data(), j);
    const double sign = j < num_positive ? 1.0 : -1.0;
    if (dj * sign <= eps) {
      dj = sign * delta;
      ++regularized_;
    }
    d_[j] = dj;
    const double inv = 1.0 / dj;
    for (std::size_t i = j + 1; i < n_; ++i) {
      double v = k(i, j) - kernels::dot(l_.row(i), work.data(), j);
      l_(i, j) = v * inv;
    }
  }
}

void LdltFactor::solve(Vec& b) const {
  for (std::size_t i = 0; i < n_; ++i) b[i] -= kernels::dot(l_.row(i), b.data(), i);
  for (std::size_t i = 0; i < n_; ++i) b[i] /= d_[i];
  for (std::size_t i = n_; i-- > 0;) {
    if (b[i] != 0.0) kernels::axpy(-b[i], l_.row(i), b.data(), i);
  }
}

double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  return kernels::dot(a.data(), b.data(), a.size());
}
double norm2(const Vec& a) { return std::sqrt(kernels::sumsq(a.data(), a.size())); }
double norm_inf(const Vec& a) { return kernels::max_abs(a.data(), a.size()); }
void axpy(double alpha, const Vec& x, Vec& y) {
  assert(x.size() == y.size());
  kernels::axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace bdc
