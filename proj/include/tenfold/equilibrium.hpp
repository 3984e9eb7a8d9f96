#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "tenfold/ensembles.hpp"
#include "tenfold/error.hpp"
#include "tenfold/quadrature.hpp"

namespace tenfold {

inline constexpr int kDefaultCurveNodes = 2048;

/// A probability density on [lo, hi] with an analytic pdf and a cached
/// cumulative table.
///
/// Integration runs in the variable theta of x = lo + (hi - lo) sin^2(theta),
/// theta in [0, pi/2]. Square-root behaviour at either endpoint, including
/// the x^{-1/2} edge of the hard-edge Laguerre minimizer, becomes smooth in
/// theta, so Gauss-Legendre panels on a uniform theta grid reach full double
/// precision. The cdf is normalized by the computed mass; mass() reports the
/// raw integral of the pdf.
class DensityCurve {
 public:
  DensityCurve(double lo, double hi, std::function<double(double)> pdf, std::string descriptor,
               int nodes = kDefaultCurveNodes)
      : lo_(lo), hi_(hi), pdf_(std::move(pdf)), descriptor_(std::move(descriptor)) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw Error(ErrorCode::InvalidParams, "density support must be a finite interval with lo < hi");
    }
    if (nodes < 2) throw Error(ErrorCode::InvalidParams, "density grid needs at least 2 nodes");
    step_ = (std::numbers::pi / 2) / (nodes - 1);
    theta_.resize(nodes);
    cumulative_.assign(nodes, 0.0);
    for (int k = 0; k < nodes; ++k) theta_[k] = k * step_;
    theta_.back() = std::numbers::pi / 2;
    for (int k = 1; k < nodes; ++k) cumulative_[k] = cumulative_[k - 1] + integrate_theta(theta_[k - 1], theta_[k]);
    mass_ = cumulative_.back();
  }

  /// A curve whose cumulative mass is known in closed form (or through another
  /// curve), e.g. the image of a curve under a monotone map. `cumulative`
  /// returns the mass of [lo, x]; its value at hi is taken as the mass.
  static DensityCurve with_cumulative(double lo, double hi, std::function<double(double)> pdf,
                                      std::function<double(double)> cumulative, std::string descriptor,
                                      int nodes = kDefaultCurveNodes) {
    DensityCurve c(lo, hi, std::move(pdf), std::move(descriptor), 2);
    c.exact_ = std::move(cumulative);
    c.step_ = (std::numbers::pi / 2) / (nodes - 1);
    c.theta_.resize(nodes);
    c.cumulative_.assign(nodes, 0.0);
    for (int k = 0; k < nodes; ++k) c.theta_[k] = k * c.step_;
    c.theta_.back() = std::numbers::pi / 2;
    for (int k = 1; k < nodes; ++k) c.cumulative_[k] = std::max(c.cumulative_[k - 1], c.exact_(c.x_of(c.theta_[k])));
    c.mass_ = c.cumulative_.back();
    return c;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::string& descriptor() const { return descriptor_; }
  double mass() const { return mass_; }
  int nodes() const { return static_cast<int>(theta_.size()); }

  double pdf(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    return pdf_(x);
  }

  double cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return unnormalized_cdf_theta(theta_of(x)) / mass_;
  }

  /// Generalized inverse of the cdf: bracketed Newton iteration in theta,
  /// started from linear interpolation of the cached table.
  double quantile(double q) const {
    if (!(q > 0.0)) return lo_;
    if (q >= 1.0) return hi_;
    const double target = q * mass_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin(), 1), theta_.size() - 1);
    double left = theta_[k - 1];
    double right = theta_[k];
    const double span = cumulative_[k] - cumulative_[k - 1];
    double theta = span > 0.0 ? left + (right - left) * (target - cumulative_[k - 1]) / span : 0.5 * (left + right);
    for (int iter = 0; iter < 100; ++iter) {
      const double f = cumulative_from(k - 1, theta) - target;
      if (f == 0.0) break;
      if (f > 0.0) right = theta; else left = theta;
      const double slope = integrand(theta);
      double next = slope > 0.0 ? theta - f / slope : 0.5 * (left + right);
      if (!(next > left && next < right)) next = 0.5 * (left + right);
      if (std::abs(next - theta) <= 1e-16 * std::max(1.0, theta)) {
        theta = next;
        break;
      }
      theta = next;
    }
    return x_of(theta);
  }

  /// Node positions in x and their cdf values (the cached table).
  double node_x(int k) const { return x_of(theta_[k]); }
  double node_cdf(int k) const { return cumulative_[k] / mass_; }

 private:
  double x_of(double theta) const {
    const double s = std::sin(theta);
    return lo_ + (hi_ - lo_) * s * s;
  }
  double theta_of(double x) const {
    const double u = std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0);
    return std::asin(std::sqrt(u));
  }
  // pdf(x(theta)) dx/dtheta
  double integrand(double theta) const {
    if (theta <= 0.0 || theta >= std::numbers::pi / 2) return 0.0;
    const double v = pdf_(x_of(theta));
    return v * (hi_ - lo_) * std::sin(2.0 * theta);
  }
  double integrate_theta(double a, double b) const {
    return gauss_legendre(a, b, [this](double t) { return integrand(t); });
  }
  // Mass of [lo, x(theta)], given a node k with theta_[k] <= theta.
  double cumulative_from(std::size_t k, double theta) const {
    if (exact_) return exact_(x_of(theta));
    return cumulative_[k] + integrate_theta(theta_[k], theta);
  }
  double unnormalized_cdf_theta(double theta) const {
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(theta / step_), theta_.size() - 2);
    return cumulative_from(k, theta);
  }

  double lo_;
  double hi_;
  std::function<double(double)> pdf_;
  std::function<double(double)> exact_;
  std::string descriptor_;
  double step_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> cumulative_;
  double mass_ = 0.0;
};

inline double quantile(const DensityCurve& curve, double q) { return curve.quantile(q); }

namespace detail {
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
inline bool allowed_beta(double beta) { return beta == 1.0 || beta == 2.0 || beta == 4.0; }
}  // namespace detail

/// Semicircle of radius 2 sqrt(sigma2 beta).
inline DensityCurve semicircle(double sigma2, double beta, int nodes = kDefaultCurveNodes) {
  if (!(sigma2 > 0.0) || !detail::allowed_beta(beta)) {
    throw Error(ErrorCode::InvalidParams, "semicircle needs sigma2 > 0 and beta in {1,2,4}");
  }
  const double r2 = 4.0 * sigma2 * beta;
  const double r = std::sqrt(r2);
  const double norm = 1.0 / (2.0 * std::numbers::pi * sigma2 * beta);
  return DensityCurve(
      -r, r, [=](double x) { return norm * std::sqrt(std::max(0.0, r2 - x * x)); },
      "semicircle(sigma2=" + detail::fmt(sigma2) + ",beta=" + detail::fmt(beta) + ")", nodes);
}

/// Endpoints a, b of the Laguerre-weight minimizer for weight x^s e^{-lambda x}.
inline std::pair<double, double> laguerre_endpoints(double s, double lambda) {
  if (!(s >= 0.0) || !(lambda > 0.0)) throw Error(ErrorCode::InvalidParams, "Laguerre minimizer needs s >= 0, lambda > 0");
  const double root = std::sqrt(2.0 * s + 1.0);
  return {(s + 1.0 - root) / lambda, (s + 1.0 + root) / lambda};
}

/// Minimizer of the log energy in the Laguerre field x^s e^{-lambda x}:
/// density (lambda / (pi x)) sqrt((x - a)(b - x)) on [a, b].
inline DensityCurve laguerre_minimizer(double s, double lambda, int nodes = kDefaultCurveNodes) {
  const auto [a, b] = laguerre_endpoints(s, lambda);
  const double c = lambda / std::numbers::pi;
  return DensityCurve(
      a, b,
      [=](double x) {
        if (x <= 0.0) return std::numeric_limits<double>::infinity();
        return c * std::sqrt(std::max(0.0, (x - a) * (b - x))) / x;
      },
      "laguerre(s=" + detail::fmt(s) + ",lambda=" + detail::fmt(lambda) + ")", nodes);
}

/// Law of X^r for X distributed as `curve`. Integer r handles signed
/// supports (both branches for even r); fractional r needs lo >= 0. The cdf
/// is the base cdf carried through the map, which stays exact where the new
/// density has a |y|^(1/r - 1) singularity.
inline DensityCurve pushforward_power(const DensityCurve& curve, double r, int nodes = kDefaultCurveNodes) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidParams, "pushforward exponent must be positive");
  if (r == 1.0) return curve;
  const bool integer = std::floor(r) == r;
  const double lo = curve.lo();
  const double hi = curve.hi();
  if (!integer && lo < 0.0) {
    throw Error(ErrorCode::UnsupportedTransform, "fractional power of a curve with negative support");
  }
  auto base = std::make_shared<const DensityCurve>(curve);
  const std::string desc = "pushforward(" + curve.descriptor() + ",r=" + detail::fmt(r) + ")";
  const double inv = 1.0 / r;
  const double mass = curve.mass();
  auto F = [base, mass](double x) { return base->cdf(x) * mass; };
  auto root = [inv](double y) { return std::copysign(std::pow(std::abs(y), inv), y); };
  const bool even = integer && std::lround(r) % 2 == 0;
  if (lo >= 0.0 || !even) {
    // Increasing map.
    auto image = [r](double x) { return std::copysign(std::pow(std::abs(x), r), x); };
    return DensityCurve::with_cumulative(
        image(lo), image(hi),
        [=](double y) {
          if (y == 0.0) return inv == 1.0 ? base->pdf(0.0) : std::numeric_limits<double>::infinity();
          return base->pdf(root(y)) * inv * std::pow(std::abs(y), inv - 1.0);
        },
        [=](double y) { return F(root(y)); }, desc, nodes);
  }
  const double top = std::pow(std::max(std::abs(lo), std::abs(hi)), r);
  const double bottom = hi >= 0.0 ? 0.0 : std::pow(-hi, r);
  return DensityCurve::with_cumulative(
      bottom, top,
      [=](double y) {
        if (y <= 0.0) return std::numeric_limits<double>::infinity();
        const double x = std::pow(y, inv);
        return (base->pdf(x) + base->pdf(-x)) * inv * std::pow(y, inv - 1.0);
      },
      [=](double y) {
        const double t = std::pow(std::max(y, 0.0), inv);
        return F(t) - F(-t);
      },
      desc, nodes);
}

/// Squared-scale endpoints a, b of the chiral equilibrium measure.
inline std::pair<double, double> chiral_endpoints(double sigma2, double beta, double kappa) {
  if (!(sigma2 > 0.0) || !(beta > 0.0) || !(kappa > 0.0) || kappa > 0.5) {
    throw Error(ErrorCode::InvalidParams, "chiral equilibrium needs sigma2 > 0, beta > 0, 0 < kappa <= 1/2");
  }
  const double root = std::sqrt(kappa * (1.0 - kappa));
  const double scale = 2.0 * sigma2 * beta;
  return {scale * (0.5 - root), scale * (0.5 + root)};
}

/// Chiral equilibrium: density sqrt((x^2 - a)(b - x^2)) / (sigma2 beta kappa pi x)
/// on [sqrt a, sqrt b].
inline DensityCurve chiral_equilibrium(double sigma2, double beta, double kappa, int nodes = kDefaultCurveNodes) {
  const auto [a, b] = chiral_endpoints(sigma2, beta, kappa);
  const double c = 1.0 / (sigma2 * beta * kappa * std::numbers::pi);
  return DensityCurve(
      std::sqrt(a), std::sqrt(b),
      [=](double x) {
        const double x2 = x * x;
        const double root = std::sqrt(std::max(0.0, (x2 - a) * (b - x2)));
        if (x <= 0.0) return a == 0.0 ? c * std::sqrt(b) : 0.0;
        return c * root / x;
      },
      "chiral(sigma2=" + detail::fmt(sigma2) + ",beta=" + detail::fmt(beta) + ",kappa=" + detail::fmt(kappa) + ")",
      nodes);
}

/// Quarter circle of the given radius: density 4 sqrt(R^2 - x^2) / (pi R^2).
inline DensityCurve quarter_circle(double radius, int nodes = kDefaultCurveNodes) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidParams, "quarter circle radius must be positive");
  const double r2 = radius * radius;
  const double c = 4.0 / (std::numbers::pi * r2);
  return DensityCurve(
      0.0, radius, [=](double x) { return c * std::sqrt(std::max(0.0, r2 - x * x)); },
      "quarter_circle(radius=" + detail::fmt(radius) + ")", nodes);
}

/// BdG equilibrium: quarter circle of radius sqrt(2 psi sigma2 beta kappa).
inline DensityCurve bdg_equilibrium(double psi, double sigma2, double beta, double kappa,
                                    int nodes = kDefaultCurveNodes) {
  if (!(psi > 0.0) || !(sigma2 > 0.0) || !(beta > 0.0) || !(kappa > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "BdG equilibrium needs positive psi, sigma2, beta, kappa");
  }
  return quarter_circle(std::sqrt(2.0 * psi * sigma2 * beta * kappa), nodes);
}

/// Limit measure of an ensemble, with kappa = p(n)/n at the ensemble's n.
inline DensityCurve equilibrium_for(const EnsembleSpec& ensemble, int nodes = kDefaultCurveNodes) {
  const ClassSpec spec = ensemble.spec();
  const double sigma2 = ensemble.sigma2_weight();
  switch (spec.family) {
    case Family::WignerDyson: return semicircle(sigma2, spec.beta, nodes);
    case Family::Chiral: return chiral_equilibrium(sigma2, spec.beta, ensemble.kappa, nodes);
    case Family::BdG: return bdg_equilibrium(spec.psi, sigma2, spec.beta, ensemble.kappa, nodes);
  }
  throw Error(ErrorCode::InvalidParams, "unknown family");
}

}  // namespace tenfold
