#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "tenfold/ensembles.hpp"
#include "tenfold/error.hpp"

namespace tenfold {

/// Weight functions of the eigenvalue densities, all of the form
///   log w(x) = power * log x - x^2 / (psi * sigma2).
/// Wigner-Dyson: power 0, psi 4, for every n.
/// Chiral: power alpha(n)/n at finite n, beta * (1 - 2 kappa) in the limit.
/// BdG: power alpha/n at finite n, 0 in the limit.
struct WeightSpec {
  Family family = Family::WignerDyson;
  double sigma2 = 1.0;
  double psi = 4.0;
  int alpha = 0;
  int n = 1;
  double beta = 1.0;
  double kappa = 1.0;

  /// Exponent of the x^power factor.
  double power(bool at_limit) const {
    switch (family) {
      case Family::WignerDyson: return 0.0;
      case Family::Chiral: return at_limit ? beta * (1.0 - 2.0 * kappa) : static_cast<double>(alpha) / n;
      case Family::BdG: return at_limit ? 0.0 : static_cast<double>(alpha) / n;
    }
    return 0.0;
  }

  /// Coefficient q in the -q x^2 part of log w.
  double quadratic() const { return 1.0 / (psi * sigma2); }

  /// True when the support is [0, inf) rather than the real line.
  bool half_line() const { return family != Family::WignerDyson; }
};

inline WeightSpec wigner_dyson_weight(double sigma2) {
  return WeightSpec{Family::WignerDyson, sigma2, 4.0, 0, 1, 1.0, 1.0};
}

inline WeightSpec chiral_weight(double sigma2, int alpha, int n, double beta, double kappa) {
  return WeightSpec{Family::Chiral, sigma2, 2.0, alpha, n, beta, kappa};
}

inline WeightSpec bdg_weight(double sigma2, double psi, int alpha, int n) {
  return WeightSpec{Family::BdG, sigma2, psi, alpha, n, 2.0, 1.0};
}

/// The weight w_n (and its limit w) of an ensemble. Uses sigma2_weight so
/// that raw ensembles get the weight matching their actual variance.
inline WeightSpec weight_for(const EnsembleSpec& ensemble) {
  const ClassSpec spec = ensemble.spec();
  WeightSpec w;
  w.family = spec.family;
  w.sigma2 = ensemble.sigma2_weight();
  w.psi = spec.psi;
  w.alpha = ensemble.shape.alpha().value_or(0);
  w.n = ensemble.n();
  w.beta = spec.beta;
  w.kappa = ensemble.kappa;
  return w;
}

/// log w_n(x) (or log w(x) with at_limit). Returns -inf on a zero of w.
inline double log_weight(const WeightSpec& weight, double x, bool at_limit) {
  if (weight.half_line() && x < 0.0) {
    throw Error(ErrorCode::OutOfSupport, "weight is supported on [0, inf), got x=" + std::to_string(x));
  }
  const double power = weight.power(at_limit);
  double value = -weight.quadratic() * x * x;
  if (power != 0.0) value += x == 0.0 ? -std::numeric_limits<double>::infinity() : power * std::log(std::abs(x));
  return value;
}

inline double weight_eval(const WeightSpec& weight, double x, bool at_limit) {
  return std::exp(log_weight(weight, x, at_limit));
}

/// Log of the unnormalized joint density of the reduced eigenvalues:
///   beta * sum_{i<j} log|x_i^gamma - x_j^gamma| + n * sum_j log w_n(x_j).
/// -inf when two values coincide or a value sits on a zero of w_n.
inline double joint_log_density(const EnsembleSpec& ensemble, std::span<const double> xs) {
  const ClassSpec spec = ensemble.spec();
  const int p = ensemble.reduced_count();
  if (static_cast<int>(xs.size()) != p) {
    throw Error(ErrorCode::WrongLength,
                "expected " + std::to_string(p) + " eigenvalues, got " + std::to_string(xs.size()));
  }
  const WeightSpec weight = weight_for(ensemble);
  for (double x : xs) {
    if (!std::isfinite(x)) throw Error(ErrorCode::OutOfSupport, "eigenvalues must be finite");
    if (spec.gamma == 2 && x < 0.0) {
      throw Error(ErrorCode::OutOfSupport, "eigenvalues must be nonnegative for this class, got " + std::to_string(x));
    }
  }
  constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
  double vandermonde = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const double diff = spec.gamma == 1 ? xs[i] - xs[j] : xs[i] * xs[i] - xs[j] * xs[j];
      if (diff == 0.0) return kMinusInf;
      vandermonde += std::log(std::abs(diff));
    }
  }
  double field = 0.0;
  for (double x : xs) {
    const double lw = log_weight(weight, x, false);
    if (lw == kMinusInf) return kMinusInf;
    field += lw;
  }
  return spec.beta * vandermonde + ensemble.n() * field;
}

}  // namespace tenfold
