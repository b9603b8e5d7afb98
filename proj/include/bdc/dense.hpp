// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace bdc {

using Vec = std::vector<double>;

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  Vec row_vec(std::size_t i) const { return Vec(row(i), row(i) + cols_); }

  void append_row(const Vec& r);
  // Resizes to rows x cols keeping the overlapping block.
  void resize(std::size_t rows, std::size_t cols);

  Vec multiply(const Vec& x) const;             // A x
  Vec multiply_transpose(const Vec& y) const;   // A' y
  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Compressed sparse rows; each row keeps (column, value) pairs.
struct SparseRow {
  std::vector<std::pair<int, double>> entries;
  void add(int col, double v) {
    if (v != 0.0) entries.emplace_back(col, v);
  }
  double dot(const double* x) const {
    double s = 0.0;
    for (const auto& [j, v] : entries) s += v * x[j];
    return s;
  }
};

struct SparseMatrix {
  int cols = 0;
  std::vector<SparseRow> rows;

  int num_rows() const { return static_cast<int>(rows.size()); }
  SparseRow& add_row() { return rows.emplace_back(); }
  Vec multiply(const Vec& x) const;
  Vec multiply_transpose(const Vec& y) const;
  static SparseMatrix from_dense(const Matrix& m);
};

// LU factorization with partial pivoting (PA = LU).
class LuFactor {
 public:
  // Returns false when a pivot falls below pivot_tol * max|A|.
  bool factor(const Matrix& a, double pivot_tol = 1e-12);
  void solve(Vec& b) const;            // A x = b, in place
  void solve_transpose(Vec& b) const;  // A' x = b, in place
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

// LDL' factorization without pivoting for quasi-definite matrices: the first
// num_positive pivots are expected positive, the rest negative. Pivots with the
// wrong sign or magnitude below eps are replaced by +/- delta (dynamic
// regularization).
class LdltFactor {
 public:
  void factor(const Matrix& k, std::size_t num_positive, double eps = 1e-13,
              double delta = 7e-8);
  void solve(Vec& b) const;
  std::size_t regularized_pivots() const { return regularized_; }

 private:
  std::size_t n_ = 0;
  Matrix l_;
  Vec d_;
  std::size_t regularized_ = 0;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
void axpy(double alpha, const Vec& x, Vec& y);

}  // namespace bdc
