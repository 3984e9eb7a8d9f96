#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "tenfold/error.hpp"
#include "tenfold/matrix.hpp"

namespace tenfold {

namespace detail {

// Householder reduction of a real symmetric matrix (row-major, destroyed) to
// tridiagonal form: diagonal in d, subdiagonal in e[1..n-1], e[0] = 0.
inline void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) at(j, k) -= (f * e[k] + g * at(i, k));
        }
      }
    } else {
      e[i] = at(i, l);
    }
  }
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

// Implicit-shift QL on a symmetric tridiagonal matrix. Eigenvalues replace d.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, int n) {
  constexpr int kMaxSweepsPerValue = 60;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  if (n > 0) e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweepsPerValue) {
          throw Error(ErrorCode::NoConvergence, "implicit QL did not converge for eigenvalue " + std::to_string(l));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Eigenvalues of a real symmetric matrix (row-major), nonincreasing.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  std::vector<double> d, e;
  detail::tridiagonalize(a, n, d, e);
  detail::tridiagonal_ql(d, e, n);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

/// Eigenvalues of a hermitian matrix, nonincreasing. Complex input goes
/// through the real embedding [[Re, -Im], [Im, Re]], whose spectrum is the
/// hermitian spectrum with every value doubled.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& x) {
  const int n = x.dim();
  if (x.is_real()) {
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = x(i, j).real();
    return symmetric_eigenvalues(std::move(a), n);
  }
  const int m = 2 * n;
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx z = x(i, j);
      at(i, j) = z.real();
      at(n + i, n + j) = z.real();
      at(i, n + j) = -z.imag();
      at(n + i, j) = z.imag();
    }
  const std::vector<double> doubled = symmetric_eigenvalues(std::move(a), m);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
  return out;
}

}  // namespace tenfold
