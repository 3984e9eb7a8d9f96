#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tenfold/ensembles.hpp"
#include "tenfold/error.hpp"
#include "tenfold/matrix.hpp"
#include "tenfold/rng.hpp"

namespace tenfold {

/// A complex matrix tagged with the class shape it is meant to belong to.
/// Values produced by build, the sampler, and stabilizer_conjugate lie in
/// the class space; arbitrary candidates can be wrapped for validation.
struct StructuredMatrix {
  ClassShape shape;
  ComplexMatrix entries;

  ClassLabel label() const { return shape.label; }
  int dim() const { return entries.dim(); }

  /// max(1, largest absolute entry); the unit for all structural tolerances.
  double scale() const { return std::max(1.0, entries.max_abs()); }
};

/// One free real coordinate: the component of a single upper-block entry it
/// writes, and whether it sits on the diagonal of a (skew)symmetric or
/// hermitian block (those carry twice the variance).
struct Slot {
  int row;
  int col;
  bool imag;
  bool diagonal;
};

namespace detail {

inline void add_hermitian(std::vector<Slot>& out, int r0, int c0, int n) {
  for (int i = 0; i < n; ++i) out.push_back({r0 + i, c0 + i, false, true});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.push_back({r0 + i, c0 + j, false, false});
      out.push_back({r0 + i, c0 + j, true, false});
    }
}

inline void add_real_symmetric(std::vector<Slot>& out, int r0, int c0, int n) {
  for (int i = 0; i < n; ++i) out.push_back({r0 + i, c0 + i, false, true});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({r0 + i, c0 + j, false, false});
}

inline void add_complex_symmetric(std::vector<Slot>& out, int r0, int c0, int n) {
  for (int i = 0; i < n; ++i) {
    out.push_back({r0 + i, c0 + i, false, true});
    out.push_back({r0 + i, c0 + i, true, true});
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.push_back({r0 + i, c0 + j, false, false});
      out.push_back({r0 + i, c0 + j, true, false});
    }
}

inline void add_complex_skew(std::vector<Slot>& out, int r0, int c0, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.push_back({r0 + i, c0 + j, false, false});
      out.push_back({r0 + i, c0 + j, true, false});
    }
}

// Entries i*y with y real, strictly above the diagonal of a skew block.
inline void add_imaginary_skew(std::vector<Slot>& out, int r0, int c0, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({r0 + i, c0 + j, true, false});
}

inline void add_rect(std::vector<Slot>& out, int r0, int c0, int rows, int cols, bool re, bool im) {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (re) out.push_back({r0 + i, c0 + j, false, false});
      if (im) out.push_back({r0 + i, c0 + j, true, false});
    }
}

}  // namespace detail

/// The free coordinates of a class space, in parameter order.
inline std::vector<Slot> coordinate_slots(const ClassShape& shape) {
  std::vector<Slot> out;
  const int n = shape.n;
  const int s = shape.s.value_or(0);
  const int t = shape.t();
  switch (shape.label) {
    case ClassLabel::A: detail::add_hermitian(out, 0, 0, n); break;
    case ClassLabel::AI: detail::add_real_symmetric(out, 0, 0, n); break;
    case ClassLabel::AII:
      detail::add_hermitian(out, 0, 0, n);
      detail::add_complex_skew(out, 0, n, n);
      break;
    case ClassLabel::AIII: detail::add_rect(out, 0, s, s, t, true, true); break;
    case ClassLabel::BDI: detail::add_rect(out, 0, s, s, t, false, true); break;
    case ClassLabel::CII:
      detail::add_rect(out, 0, 2 * s, s, t, true, true);      // U
      detail::add_rect(out, 0, 2 * s + t, s, t, true, true);  // V
      break;
    case ClassLabel::B:
    case ClassLabel::D: detail::add_imaginary_skew(out, 0, 0, shape.ambient_dim()); break;
    case ClassLabel::DIII_even:
    case ClassLabel::DIII_odd:
      detail::add_imaginary_skew(out, 0, 0, n);
      detail::add_imaginary_skew(out, 0, n, n);
      break;
    case ClassLabel::C:
      detail::add_hermitian(out, 0, 0, n);
      detail::add_complex_symmetric(out, 0, n, n);
      break;
    case ClassLabel::CI:
      detail::add_real_symmetric(out, 0, 0, n);
      detail::add_real_symmetric(out, 0, n, n);
      break;
  }
  return out;
}

/// Number of independent real parameters of the class space.
inline int free_dim(const ClassShape& shape) {
  return static_cast<int>(coordinate_slots(shape).size());
}

namespace detail {

// Fills the rest of the upper triangle from the primary coordinates using
// the block relations of each class, then mirrors to a hermitian matrix.
inline void complete(const ClassShape& shape, ComplexMatrix& x) {
  const int n = shape.n;
  switch (shape.label) {
    case ClassLabel::AII:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x(i, n + j) = -x(j, n + i);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x(n + i, n + j) = std::conj(x(i, j));
      break;
    case ClassLabel::CII: {
      const int s = *shape.s;
      const int t = shape.t();
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) {
          x(s + i, 2 * s + j) = -std::conj(x(i, 2 * s + t + j));
          x(s + i, 2 * s + t + j) = std::conj(x(i, 2 * s + j));
        }
      break;
    }
    case ClassLabel::DIII_even:
    case ClassLabel::DIII_odd:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x(i, n + j) = -x(j, n + i);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) x(n + i, n + j) = -x(i, j);
      break;
    case ClassLabel::C:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x(i, n + j) = x(j, n + i);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x(n + i, n + j) = -std::conj(x(i, j));
      break;
    case ClassLabel::CI:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x(i, n + j) = x(j, n + i);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x(n + i, n + j) = -x(i, j);
      break;
    default: break;
  }
  const int d = x.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) x(i, j) = std::conj(x(j, i));
}

}  // namespace detail

/// The unique class-space matrix with the given free coordinates. Linear and
/// injective; extract is its left inverse.
inline StructuredMatrix build(const ClassShape& shape, std::span<const double> params) {
  const std::vector<Slot> slots = coordinate_slots(shape);
  if (params.size() != slots.size()) {
    throw Error(ErrorCode::WrongParamCount, "expected " + std::to_string(slots.size()) +
                                                " parameters, got " + std::to_string(params.size()));
  }
  ComplexMatrix x(shape.ambient_dim());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Slot& sl = slots[k];
    cplx& z = x(sl.row, sl.col);
    z = sl.imag ? cplx(z.real(), params[k]) : cplx(params[k], z.imag());
  }
  detail::complete(shape, x);
  return StructuredMatrix{shape, std::move(x)};
}

struct Violation {
  std::string constraint;
  double residual;
};

namespace detail {

class Checker {
 public:
  Checker(const ComplexMatrix& x, double tol) : x_(x), tol_(tol) {}

  template <typename Residual>
  void check(const std::string& name, Residual&& residual) {
    const double r = residual();
    if (!(r <= tol_)) out_.push_back({name, r});
  }

  // max |x(r0+i, c0+j) - f(i, j)| over a rows x cols block
  template <typename Expected>
  double block_residual(int r0, int c0, int rows, int cols, Expected&& expected) const {
    double m = 0.0;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m = std::max(m, std::abs(x_(r0 + i, c0 + j) - expected(i, j)));
    return m;
  }

  double zero_block(int r0, int c0, int rows, int cols) const {
    return block_residual(r0, c0, rows, cols, [](int, int) { return cplx{}; });
  }

  double max_imag() const {
    double m = 0.0;
    for (const auto& z : x_.data()) m = std::max(m, std::abs(z.imag()));
    return m;
  }
  double max_real() const {
    double m = 0.0;
    for (const auto& z : x_.data()) m = std::max(m, std::abs(z.real()));
    return m;
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  const ComplexMatrix& x_;
  double tol_;
  std::vector<Violation> out_;
};

}  // namespace detail

/// Structural check of a candidate against its class space. Each violation
/// names the failed constraint and its residual; tolerance is 1e-12 * scale.
inline std::vector<Violation> validate(const StructuredMatrix& m) {
  const ClassShape& shape = m.shape;
  const ComplexMatrix& x = m.entries;
  const int d = shape.ambient_dim();
  if (x.dim() != d) {
    return {{"ambient dimension " + std::to_string(d), std::abs(static_cast<double>(x.dim() - d))}};
  }
  detail::Checker c(x, 1e-12 * m.scale());
  const int n = shape.n;
  c.check("hermitian", [&] {
    double r = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) r = std::max(r, std::abs(x(i, j) - std::conj(x(j, i))));
    return r;
  });
  auto x1 = [&](int i, int j) { return x(i, j); };
  auto x2 = [&](int i, int j) { return x(i, n + j); };
  switch (shape.label) {
    case ClassLabel::A: break;
    case ClassLabel::AI: c.check("real-valued", [&] { return c.max_imag(); }); break;
    case ClassLabel::AII:
      c.check("X2 skew symmetric", [&] { return c.block_residual(0, n, n, n, [&](int i, int j) { return -x2(j, i); }); });
      c.check("block (2,1) = -conj(X2)", [&] {
        return c.block_residual(n, 0, n, n, [&](int i, int j) { return -std::conj(x2(i, j)); });
      });
      c.check("block (2,2) = conj(X1)", [&] {
        return c.block_residual(n, n, n, n, [&](int i, int j) { return std::conj(x1(i, j)); });
      });
      break;
    case ClassLabel::AIII:
    case ClassLabel::BDI: {
      const int s = *shape.s;
      const int t = shape.t();
      c.check("diagonal blocks zero", [&] { return std::max(c.zero_block(0, 0, s, s), c.zero_block(s, s, t, t)); });
      if (shape.label == ClassLabel::BDI) {
        c.check("off-diagonal block purely imaginary", [&] {
          double r = 0.0;
          for (int i = 0; i < s; ++i)
            for (int j = 0; j < t; ++j) r = std::max(r, std::abs(x(i, s + j).real()));
          return r;
        });
      }
      break;
    }
    case ClassLabel::CII: {
      const int s = *shape.s;
      const int t = shape.t();
      c.check("diagonal blocks zero",
              [&] { return std::max(c.zero_block(0, 0, 2 * s, 2 * s), c.zero_block(2 * s, 2 * s, 2 * t, 2 * t)); });
      c.check("quaternionic block (2,1) = -conj(V)", [&] {
        return c.block_residual(s, 2 * s, s, t, [&](int i, int j) { return -std::conj(x(i, 2 * s + t + j)); });
      });
      c.check("quaternionic block (2,2) = conj(U)", [&] {
        return c.block_residual(s, 2 * s + t, s, t, [&](int i, int j) { return std::conj(x(i, 2 * s + j)); });
      });
      break;
    }
    case ClassLabel::B:
    case ClassLabel::D:
      c.check("purely imaginary", [&] { return c.max_real(); });
      c.check("skew symmetric", [&] { return c.block_residual(0, 0, d, d, [&](int i, int j) { return -x(j, i); }); });
      break;
    case ClassLabel::DIII_even:
    case ClassLabel::DIII_odd:
      c.check("purely imaginary", [&] { return c.max_real(); });
      c.check("X1 skew symmetric", [&] { return c.block_residual(0, 0, n, n, [&](int i, int j) { return -x1(j, i); }); });
      c.check("X2 skew symmetric", [&] { return c.block_residual(0, n, n, n, [&](int i, int j) { return -x2(j, i); }); });
      c.check("block (2,1) = X2", [&] { return c.block_residual(n, 0, n, n, x2); });
      c.check("block (2,2) = -X1", [&] { return c.block_residual(n, n, n, n, [&](int i, int j) { return -x1(i, j); }); });
      break;
    case ClassLabel::C:
      c.check("X2 symmetric", [&] { return c.block_residual(0, n, n, n, [&](int i, int j) { return x2(j, i); }); });
      c.check("block (2,1) = conj(X2)", [&] {
        return c.block_residual(n, 0, n, n, [&](int i, int j) { return std::conj(x2(i, j)); });
      });
      c.check("block (2,2) = -conj(X1)", [&] {
        return c.block_residual(n, n, n, n, [&](int i, int j) { return -std::conj(x1(i, j)); });
      });
      break;
    case ClassLabel::CI:
      c.check("real-valued", [&] { return c.max_imag(); });
      c.check("X2 symmetric", [&] { return c.block_residual(0, n, n, n, [&](int i, int j) { return x2(j, i); }); });
      c.check("block (2,1) = X2", [&] { return c.block_residual(n, 0, n, n, x2); });
      c.check("block (2,2) = -X1", [&] { return c.block_residual(n, n, n, n, [&](int i, int j) { return -x1(i, j); }); });
      break;
  }
  return c.take();
}

inline std::string describe(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.constraint + " (residual " + std::to_string(v.residual) + ")";
  }
  return out;
}

inline void require_valid(const StructuredMatrix& m) {
  const auto violations = validate(m);
  if (!violations.empty()) {
    throw Error(ErrorCode::StructureViolation,
                "matrix is not in class " + std::string(label_name(m.label())) + ": " + describe(violations));
  }
}

/// Reads the free coordinates back out of a valid matrix.
inline std::vector<double> extract(const StructuredMatrix& m) {
  require_valid(m);
  const std::vector<Slot> slots = coordinate_slots(m.shape);
  std::vector<double> out;
  out.reserve(slots.size());
  for (const Slot& sl : slots) {
    const cplx z = m.entries(sl.row, sl.col);
    out.push_back(sl.imag ? z.imag() : z.real());
  }
  return out;
}

namespace detail {

inline ComplexMatrix random_real_skew(int k, GaussianStream& g) {
  ComplexMatrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double v = g.standard();
      m(i, j) = v;
      m(j, i) = -v;
    }
  return m;
}

inline ComplexMatrix random_real_symmetric(int k, GaussianStream& g) {
  ComplexMatrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double v = g.standard();
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// i * (random element of the given class space): an element of the Lie
// algebra of the full group for classes of the form i*g.
inline ComplexMatrix random_algebra_from(const ClassShape& shape, GaussianStream& g) {
  std::vector<double> p(static_cast<std::size_t>(free_dim(shape)));
  for (double& v : p) v = g.standard();
  return cplx(0.0, 1.0) * build(shape, p).entries;
}

// [[P, Q], [-Q, P]] with P real skew and Q real symmetric: u(n) acting on
// R^{2n} through u_R + i u_I -> [[u_R, u_I], [-u_I, u_R]].
inline ComplexMatrix random_unitary_embedding_algebra(int n, GaussianStream& g) {
  const ComplexMatrix p = random_real_skew(n, g);
  const ComplexMatrix q = random_real_symmetric(n, g);
  ComplexMatrix out(2 * n);
  out.set_block(0, 0, p);
  out.set_block(n, n, p);
  out.set_block(0, n, q);
  out.set_block(n, 0, cplx(-1.0) * q);
  return out;
}

inline ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.dim() + b.dim());
  out.set_block(0, 0, a);
  out.set_block(a.dim(), a.dim(), b);
  return out;
}

// A skew-hermitian element of the stabilizer algebra of the class space.
inline ComplexMatrix stabilizer_algebra_element(const ClassShape& shape, GaussianStream& g) {
  const int n = shape.n;
  switch (shape.label) {
    case ClassLabel::A: return random_algebra_from(make_shape(ClassLabel::A, n), g);
    case ClassLabel::AI: return random_real_skew(n, g);
    case ClassLabel::AII: return random_algebra_from(make_shape(ClassLabel::C, n), g);
    case ClassLabel::AIII:
      return block_diag(random_algebra_from(make_shape(ClassLabel::A, *shape.s), g),
                        random_algebra_from(make_shape(ClassLabel::A, shape.t()), g));
    case ClassLabel::BDI: return block_diag(random_real_skew(*shape.s, g), random_real_skew(shape.t(), g));
    case ClassLabel::CII:
      return block_diag(random_algebra_from(make_shape(ClassLabel::C, *shape.s), g),
                        random_algebra_from(make_shape(ClassLabel::C, shape.t()), g));
    case ClassLabel::B:
    case ClassLabel::D: return random_real_skew(shape.ambient_dim(), g);
    case ClassLabel::C: return random_algebra_from(make_shape(ClassLabel::C, n), g);
    case ClassLabel::CI:
    case ClassLabel::DIII_even:
    case ClassLabel::DIII_odd: return random_unitary_embedding_algebra(n, g);
  }
  throw Error(ErrorCode::UnsupportedClass, "no stabilizer embedding for " + std::string(label_name(shape.label)));
}

}  // namespace detail

/// A pseudo-random element k of the stabilizer group of the class space:
/// the Cayley transform (I - S)^{-1}(I + S) of a seeded Gaussian element S
/// of the stabilizer Lie algebra. Not Haar distributed.
inline ComplexMatrix stabilizer_element(const ClassShape& shape, std::uint64_t seed) {
  GaussianStream g(mix_seed(seed, 0x5AB1));
  ComplexMatrix s = detail::stabilizer_algebra_element(shape, g);
  s *= 0.5;
  const ComplexMatrix id = ComplexMatrix::identity(s.dim());
  return solve(id - s, id + s);
}

/// k X k^* for a given group element k.
inline StructuredMatrix conjugate(const StructuredMatrix& m, const ComplexMatrix& k) {
  return StructuredMatrix{m.shape, k * m.entries * k.adjoint()};
}

inline StructuredMatrix stabilizer_conjugate(const StructuredMatrix& m, std::uint64_t seed) {
  require_valid(m);
  return conjugate(m, stabilizer_element(m.shape, seed));
}

}  // namespace tenfold
