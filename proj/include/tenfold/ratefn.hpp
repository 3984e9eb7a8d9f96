#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tenfold/densities.hpp"
#include "tenfold/ensembles.hpp"
#include "tenfold/equilibrium.hpp"
#include "tenfold/error.hpp"
#include "tenfold/spectra.hpp"

namespace tenfold {

inline constexpr int kDefaultCalibrationCells = 4096;

/// Probability measure with a piecewise-constant density on m equal cells
/// of [lo, hi].
struct GridMeasure {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> masses;

  int cells() const { return static_cast<int>(masses.size()); }
  double width() const { return (hi - lo) / static_cast<double>(masses.size()); }
  double edge(int k) const { return k == cells() ? hi : lo + width() * k; }

  /// Distribution function (linear inside each cell).
  double cdf(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double h = width();
    const int k = std::min(cells() - 1, static_cast<int>((x - lo) / h));
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += masses[i];
    return acc + masses[k] * (x - edge(k)) / h;
  }
};

namespace detail {

inline void normalize(std::vector<double>& masses) {
  double total = 0.0;
  for (double& v : masses) {
    v = std::max(v, 0.0);
    total += v;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidParams, "grid measure has no mass");
  for (double& v : masses) v /= total;
}

}  // namespace detail

/// Grid measure whose cell masses are increments of the given cdf.
inline GridMeasure grid_from_cdf(double lo, double hi, int m, const std::function<double(double)>& cdf) {
  if (m < 1 || !(hi > lo)) throw Error(ErrorCode::InvalidParams, "grid needs m >= 1 and lo < hi");
  GridMeasure g{lo, hi, std::vector<double>(static_cast<std::size_t>(m))};
  double prev = cdf(lo);
  for (int k = 0; k < m; ++k) {
    const double next = cdf(g.edge(k + 1));
    g.masses[k] = next - prev;
    prev = next;
  }
  detail::normalize(g.masses);
  return g;
}

inline GridMeasure grid_from_curve(const DensityCurve& curve, int m) {
  if (m < 16) throw Error(ErrorCode::InvalidParams, "grid_from_curve needs m >= 16, got " + std::to_string(m));
  return grid_from_cdf(curve.lo(), curve.hi(), m, [&](double x) { return curve.cdf(x); });
}

/// Histogram of the values on m cells of [lo, hi]; hi itself lands in the
/// last cell.
inline GridMeasure grid_from_samples(std::span<const double> values, double lo, double hi, int m) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "grid_from_samples needs at least one value");
  if (m < 1 || !(hi > lo)) throw Error(ErrorCode::InvalidParams, "grid needs m >= 1 and lo < hi");
  GridMeasure g{lo, hi, std::vector<double>(static_cast<std::size_t>(m), 0.0)};
  const double h = g.width();
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      throw Error(ErrorCode::OutOfRange, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                             std::to_string(hi) + "]");
    }
    const int k = std::min(m - 1, static_cast<int>((v - lo) / h));
    g.masses[k] += 1.0;
  }
  for (double& v : g.masses) v /= static_cast<double>(values.size());
  return g;
}

namespace detail {

// f(v) = v^2 log|v| / 2 with f(0) = 0.
inline double half_sq_log(double v) { return v == 0.0 ? 0.0 : 0.5 * v * v * std::log(std::abs(v)); }

// Second difference f(v+1) - 2 f(v) + f(v-1), which equals
// int_0^1 int_0^1 log|v + u - w| du dw + 3/2. Past v = 20 the Euler-Maclaurin
// tail is used to avoid cancellation.
inline double log_kernel_cell(double v) {
  v = std::abs(v);
  if (v >= 20.0) {
    const double r = 1.0 / (v * v);
    return std::log(v) + 1.5 - r * (1.0 / 12.0 + r * (1.0 / 60.0 + r / 168.0));
  }
  return half_sq_log(v + 1.0) - 2.0 * half_sq_log(v) + half_sq_log(v - 1.0);
}

}  // namespace detail

/// Logarithmic energy  -int int log|x^gamma - y^gamma| dmu(x) dmu(y)  of a
/// grid measure, integrating the kernel exactly over every pair of cells.
/// For gamma = 2 the kernel splits as log|x - y| + log(x + y).
inline double log_energy(const GridMeasure& mu, int gamma) {
  if (gamma != 1 && gamma != 2) throw Error(ErrorCode::UnsupportedGamma, "gamma must be 1 or 2");
  if (gamma == 2 && mu.lo < 0.0) {
    throw Error(ErrorCode::OutOfSupport, "gamma = 2 energy needs support in [0, inf)");
  }
  const int m = mu.cells();
  const double h = mu.width();
  const std::vector<double>& w = mu.masses;

  // Difference kernel depends on |i - j| only.
  double diff = 0.0;
  for (int k = 0; k < m; ++k) {
    double corr = 0.0;
    for (int i = 0; i + k < m; ++i) corr += w[i] * w[i + k];
    if (k > 0) corr *= 2.0;
    diff += corr * detail::log_kernel_cell(k);
  }
  double energy = -(std::log(h) - 1.5 + diff);
  if (gamma == 1) return energy;

  // Sum kernel depends on i + j only.
  const double offset = 2.0 * mu.lo / h + 1.0;
  double sum = 0.0;
  for (int k = 0; k <= 2 * (m - 1); ++k) {
    double conv = 0.0;
    for (int i = std::max(0, k - (m - 1)); i <= std::min(k, m - 1); ++i) conv += w[i] * w[k - i];
    sum += conv * detail::log_kernel_cell(offset + k);
  }
  energy -= std::log(h) - 1.5 + sum;
  return energy;
}

namespace detail {

inline double xlogx_minus_x(double x) { return x == 0.0 ? 0.0 : x * std::log(x) - x; }

}  // namespace detail

/// int log w dmu, with w the limit weight. Each cell is integrated exactly
/// (x^2 and log x both have closed-form antiderivatives). Mass on a zero of
/// w, i.e. on the negative axis for a half-line weight, diverges.
inline double field_term(const GridMeasure& mu, const WeightSpec& weight, bool at_limit = true) {
  const double q = weight.quadratic();
  const double power = weight.power(at_limit);
  const double h = mu.width();
  double total = 0.0;
  for (int k = 0; k < mu.cells(); ++k) {
    const double mass = mu.masses[k];
    if (mass == 0.0) continue;
    const double x0 = mu.edge(k);
    const double x1 = mu.edge(k + 1);
    if (weight.half_line() && x0 < 0.0) {
      throw Error(ErrorCode::DivergentField, "measure charges the negative axis where the weight vanishes");
    }
    double cell = -q * (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
    if (power != 0.0) cell += power * (detail::xlogx_minus_x(x1) - detail::xlogx_minus_x(x0));
    total += mass * cell / h;
  }
  return total;
}

/// int log w dL for a point-mass measure.
inline double field_term(const EmpiricalMeasure& mu, const WeightSpec& weight, bool at_limit = true) {
  double total = 0.0;
  for (double x : mu.atoms) {
    if (weight.half_line() && x < 0.0) {
      throw Error(ErrorCode::DivergentField, "atom on the negative axis where the weight vanishes");
    }
    const double lw = log_weight(weight, x, at_limit);
    if (std::isinf(lw)) throw Error(ErrorCode::DivergentField, "atom on a zero of the weight");
    total += lw;
  }
  return total * mu.weight();
}

/// I(mu) = (beta/2) kappa^2 E_gamma(mu) - kappa int log w dmu - c.
struct RateFunctional {
  double beta = 1.0;
  int gamma = 1;
  double kappa = 1.0;
  WeightSpec weight;
  std::optional<double> c;

  double constant() const { return c.value_or(0.0); }
};

inline RateFunctional rate_functional_for(const EnsembleSpec& ensemble) {
  const ClassSpec spec = ensemble.spec();
  return RateFunctional{static_cast<double>(spec.beta), spec.gamma, ensemble.kappa, weight_for(ensemble), std::nullopt};
}

struct RateTerms {
  double energy = 0.0;
  double field = 0.0;
  double c = 0.0;
  double rate = 0.0;
};

inline RateTerms rate_terms(const GridMeasure& mu, const RateFunctional& f) {
  RateTerms t;
  t.energy = log_energy(mu, f.gamma);
  t.field = field_term(mu, f.weight, true);
  t.c = f.constant();
  t.rate = 0.5 * f.beta * f.kappa * f.kappa * t.energy - f.kappa * t.field - t.c;
  return t;
}

inline double rate(const GridMeasure& mu, const RateFunctional& f) { return rate_terms(mu, f).rate; }

/// Atoms have infinite energy, so the rate of a point-mass measure is +inf.
inline double rate(const EmpiricalMeasure&, const RateFunctional&) {
  return std::numeric_limits<double>::infinity();
}

/// Sets c so that the rate of the reference curve (on an m-cell grid) is 0.
inline RateFunctional calibrate(RateFunctional f, const DensityCurve& reference, int m = kDefaultCalibrationCells) {
  f.c.reset();
  f.c = rate(grid_from_curve(reference, m), f);
  return f;
}

}  // namespace tenfold
