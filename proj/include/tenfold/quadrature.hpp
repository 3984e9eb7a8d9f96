#pragma once

#include <array>
#include <cstddef>

namespace tenfold {

// 10-point Gauss-Legendre rule on [-1, 1]: positive nodes and their weights.
inline constexpr std::array<double, 5> kGaussNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

/// Integral of f over [a, b] by one 10-point Gauss-Legendre panel.
template <class F>
double gauss_legendre(double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
    const double dx = half * kGaussNodes[k];
    sum += kGaussWeights[k] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

/// Nodes and weights of the rule mapped to [a, b], for callers that need
/// the points themselves.
template <class F>
void gauss_legendre_points(double a, double b, F&& visit) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
    const double dx = half * kGaussNodes[k];
    visit(mid - dx, kGaussWeights[k] * half);
    visit(mid + dx, kGaussWeights[k] * half);
  }
}

}  // namespace tenfold
