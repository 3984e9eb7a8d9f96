#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "tenfold/error.hpp"

namespace tenfold {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return dim_; }

  cplx& operator()(int row, int col) { return data_[index(row, col)]; }
  const cplx& operator()(int row, int col) const { return data_[index(row, col)]; }

  const std::vector<cplx>& data() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  /// Largest absolute entry.
  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  /// Squared Frobenius norm; equals Tr(X^2) for hermitian X.
  double frobenius2() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
  }

  bool is_real() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) { return z.imag() == 0.0; });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& other) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx factor) {
    for (auto& z : data_) z *= factor;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx f, ComplexMatrix a) { return a *= f; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim_;
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  /// Copy `block` into this matrix with its (0,0) entry at (row, col).
  void set_block(int row, int col, const ComplexMatrix& block) {
    for (int i = 0; i < block.dim(); ++i)
      for (int j = 0; j < block.dim(); ++j) (*this)(row + i, col + j) = block(i, j);
  }

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * dim_ + col;
  }

  int dim_ = 0;
  std::vector<cplx> data_;
};

/// Solves A X = B by Gaussian elimination with partial pivoting.
inline ComplexMatrix solve(ComplexMatrix a, ComplexMatrix b) {
  const int n = a.dim();
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) == 0.0) throw Error(ErrorCode::InvalidParams, "singular matrix in solve");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(b(col, j), b(pivot, j));
      }
    }
    const cplx inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) * inv;
      if (f == cplx{}) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      for (int j = 0; j < n; ++j) b(r, j) -= f * b(col, j);
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    for (int j = 0; j < n; ++j) {
      cplx acc = b(r, j);
      for (int k = r + 1; k < n; ++k) acc -= a(r, k) * b(k, j);
      b(r, j) = acc / a(r, r);
    }
  }
  return b;
}

}  // namespace tenfold
