#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tenfold/eigen_solver.hpp"
#include "tenfold/ensembles.hpp"
#include "tenfold/error.hpp"
#include "tenfold/structure.hpp"

namespace tenfold {

/// Two eigenvalues are one (collapsed) value when they differ by at most
/// kCollapseTol * max(1, |a|, |b|).
inline constexpr double kCollapseTol = 1e-8;
/// An eigenvalue counts as positive above kPositiveTol * scale.
inline constexpr double kPositiveTol = 1e-8;

struct Spectrum {
  std::vector<double> full;     // d(n) values with multiplicity, nonincreasing
  std::vector<double> reduced;  // p(n) values, nonincreasing
};

/// Uniform point-mass measure. Atoms are kept sorted ascending.
struct EmpiricalMeasure {
  std::vector<double> atoms;

  double weight() const { return 1.0 / static_cast<double>(atoms.size()); }
  std::size_t size() const { return atoms.size(); }
};

inline EmpiricalMeasure empirical_measure(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "empirical measure needs at least one value");
  EmpiricalMeasure out{{values.begin(), values.end()}};
  for (double v : out.atoms)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParams, "empirical measure atoms must be finite");
  std::sort(out.atoms.begin(), out.atoms.end());
  return out;
}

/// All eigenvalues of the hermitian matrix, nonincreasing.
inline std::vector<double> eigenvalues(const StructuredMatrix& m) {
  require_valid(m);
  return hermitian_eigenvalues(m.entries);
}

/// Eigenvalues of the classes whose eigenspaces are two-dimensional.
inline bool doubled_class(ClassLabel label) {
  return label == ClassLabel::AII || label == ClassLabel::CII || label == ClassLabel::DIII_even ||
         label == ClassLabel::DIII_odd;
}

namespace detail {

inline bool coincide(double a, double b) {
  return std::abs(a - b) <= kCollapseTol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::string describe_gaps(const std::vector<double>& gaps) {
  std::string out;
  for (double g : gaps) {
    if (!out.empty()) out += ", ";
    out += std::to_string(g);
  }
  return out;
}

// Collapses consecutive equal pairs of a sorted list; each pair is replaced
// by its mean.
inline std::vector<double> collapse_pairs(const std::vector<double>& values, ClassLabel label) {
  std::vector<double> gaps;
  std::vector<double> out;
  if (values.size() % 2 != 0) {
    throw DegenerateSpectrumError(
        "class " + std::string(label_name(label)) + " expects paired eigenvalues, got an odd count " +
            std::to_string(values.size()),
        {});
  }
  for (std::size_t k = 0; k + 1 < values.size(); k += 2) {
    if (!coincide(values[k], values[k + 1])) gaps.push_back(values[k] - values[k + 1]);
    out.push_back(0.5 * (values[k] + values[k + 1]));
  }
  if (!gaps.empty()) {
    throw DegenerateSpectrumError("class " + std::string(label_name(label)) +
                                      " eigenvalues failed to pair; gaps: " + describe_gaps(gaps),
                                  gaps);
  }
  return out;
}

}  // namespace detail

/// Reduced spectrum from an already computed full spectrum.
inline std::vector<double> reduce(const std::vector<double>& full, const ClassShape& shape, double scale) {
  const ClassSpec spec = shape.spec();
  const int p = shape.reduced_count();
  std::vector<double> kept;
  if (spec.gamma == 1) {
    kept = full;
  } else {
    const double threshold = kPositiveTol * scale;
    for (double v : full)
      if (v > threshold) kept.push_back(v);
  }
  std::vector<double> out = doubled_class(shape.label) ? detail::collapse_pairs(kept, shape.label) : kept;
  if (static_cast<int>(out.size()) != p) {
    std::vector<double> gaps;
    for (std::size_t k = 0; k + 1 < out.size(); ++k) gaps.push_back(out[k] - out[k + 1]);
    throw DegenerateSpectrumError("class " + std::string(label_name(shape.label)) + " produced " +
                                      std::to_string(out.size()) + " reduced eigenvalues, expected " +
                                      std::to_string(p),
                                  gaps);
  }
  return out;
}

/// The p(n) eigenvalues that enter the joint density: positive eigenvalues
/// without multiplicity for the +-paired classes, all eigenvalues without
/// multiplicity for A, AI, AII.
inline std::vector<double> reduced_spectrum(const StructuredMatrix& m) {
  return reduce(eigenvalues(m), m.shape, m.scale());
}

inline std::vector<double> reduced_spectrum(const StructuredMatrix& m, const EnsembleSpec& ensemble) {
  if (!(m.shape == ensemble.shape)) {
    throw Error(ErrorCode::StructureViolation, "matrix shape does not match the ensemble");
  }
  return reduced_spectrum(m);
}

inline Spectrum spectrum(const StructuredMatrix& m) {
  Spectrum out;
  out.full = eigenvalues(m);
  out.reduced = reduce(out.full, m.shape, m.scale());
  return out;
}

/// max_i |lambda_(i) + lambda_(d+1-i)| for a nonincreasing list.
inline double pairing_residual(std::span<const double> full) {
  double r = 0.0;
  const std::size_t d = full.size();
  for (std::size_t i = 0; i < d; ++i) r = std::max(r, std::abs(full[i] + full[d - 1 - i]));
  return r;
}

/// Number of eigenvalues with |lambda| <= tol.
inline int count_near_zero(std::span<const double> full, double tol) {
  return static_cast<int>(std::count_if(full.begin(), full.end(), [&](double v) { return std::abs(v) <= tol; }));
}

}  // namespace tenfold
