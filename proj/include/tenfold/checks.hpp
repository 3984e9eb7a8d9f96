#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tenfold/ensembles.hpp"
#include "tenfold/parallel.hpp"
#include "tenfold/rng.hpp"
#include "tenfold/sampler.hpp"
#include "tenfold/spectra.hpp"
#include "tenfold/structure.hpp"

namespace tenfold {

// Tolerances of the structural suite.
inline constexpr double kTraceTol = 1e-9;          // relative to Tr X^2
inline constexpr double kFactorizationTol = 1e-10;  // relative
inline constexpr double kPairingTol = 1e-9;         // relative to scale
inline constexpr double kZeroModeTol = 1e-9;        // relative to scale

/// Worst residuals over the samples of one (class, n, s) case.
struct StructuralCase {
  ClassLabel label{};
  int n = 0;
  std::optional<int> s;
  int samples = 0;
  double trace = 0.0;          // |Tr X^2/phi - sum lambda^2/psi| / Tr X^2
  double factorization = 0.0;  // relative gap between the two log densities
  double pairing = 0.0;        // pairing residual / scale, gamma = 2 only
  int near_zero_min = 0;       // count of |lambda| <= tol * scale
  int near_zero_max = 0;
  int collapse_failures = 0;
  int violations = 0;
  std::string first_error;

  /// Expected near-zero eigenvalues: |s - t| for AIII and BDI, 2|s - t| for
  /// CII, one for B, a Kramers pair for DIII at odd n.
  int expected_zero_modes() const {
    const ClassSpec spec = class_spec(label);
    const int gap = std::abs(n - 2 * s.value_or(0));
    if (label == ClassLabel::CII) return 2 * gap;
    if (spec.chiral()) return gap;
    if (label == ClassLabel::DIII_odd) return 2;
    return label == ClassLabel::B ? 1 : 0;
  }

  bool passed() const {
    return violations == 0 && collapse_failures == 0 && trace <= kTraceTol && factorization <= kFactorizationTol &&
           pairing <= kPairingTol && near_zero_min == expected_zero_modes() &&
           near_zero_max == expected_zero_modes();
  }
};

/// The chiral s values swept for one n: 1, floor(n/4), floor(n/2), deduplicated
/// and restricted to valid shapes.
inline std::vector<std::optional<int>> sweep_s_values(ClassLabel label, int n) {
  if (!class_spec(label).chiral()) return {std::nullopt};
  std::vector<std::optional<int>> out;
  for (int s : {1, n / 4, n / 2}) {
    if (s < 1 || s > n - s) continue;
    if (std::find(out.begin(), out.end(), std::optional<int>(s)) == out.end()) out.push_back(s);
  }
  return out;
}

/// The n actually swept for a requested n: DIII labels move to the next n of
/// their parity (so DIII_odd at n = 2 runs at n = 3).
inline int sweep_n(ClassLabel label, int n) {
  if (label == ClassLabel::DIII_even && n % 2 == 1) return n + 1;
  if (label == ClassLabel::DIII_odd && (n % 2 == 0 || n == 1)) return n % 2 == 0 ? n + 1 : 3;
  return n;
}

inline StructuralCase structural_case(const EnsembleSpec& ensemble, int samples, std::uint64_t seed, int threads = 1) {
  require_reps(samples);
  const ClassSpec spec = ensemble.spec();
  const std::vector<double> variances = parameter_variances(ensemble);
  struct One {
    double trace = 0.0, factorization = 0.0, pairing = 0.0;
    int zeros = 0;
    bool collapse_failed = false;
    bool violated = false;
    std::string error;
  };
  std::vector<One> results(static_cast<std::size_t>(samples));
  parallel_for(results.size(), threads, [&](std::size_t r) {
    One& o = results[r];
    const StructuredMatrix m = sample_one(ensemble, seed, r);
    if (!validate(m).empty()) {
      o.violated = true;
      o.error = describe(validate(m));
      return;
    }
    const double scale = m.scale();
    const std::vector<double> full = hermitian_eigenvalues(m.entries);
    o.zeros = count_near_zero(full, kZeroModeTol * scale);
    if (spec.gamma == 2) o.pairing = pairing_residual(full) / scale;
    std::vector<double> reduced;
    try {
      reduced = reduce(full, m.shape, scale);
    } catch (const Error& e) {
      o.collapse_failed = true;
      o.error = e.what();
      return;
    }
    const double tr = m.entries.frobenius2();
    double sum_sq = 0.0;
    for (double v : reduced) sum_sq += v * v;
    o.trace = tr > 0.0 ? std::abs(tr / spec.phi - sum_sq / spec.psi) / tr : 0.0;
    const double dens = log_density_unnormalized(m, ensemble);
    const std::vector<double> params = extract(m);
    double gauss = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) gauss -= params[k] * params[k] / (2.0 * variances[k]);
    o.factorization = std::abs(dens - gauss) / std::max(std::abs(gauss), 1e-300);
  });
  StructuralCase out;
  out.label = ensemble.label();
  out.n = ensemble.n();
  out.s = ensemble.s();
  out.samples = samples;
  out.near_zero_min = std::numeric_limits<int>::max();
  out.near_zero_max = 0;
  for (const One& o : results) {
    if (o.violated) ++out.violations;
    if (o.collapse_failed) ++out.collapse_failures;
    if (out.first_error.empty()) out.first_error = o.error;
    if (o.violated) continue;
    out.trace = std::max(out.trace, o.trace);
    out.factorization = std::max(out.factorization, o.factorization);
    out.pairing = std::max(out.pairing, o.pairing);
    out.near_zero_min = std::min(out.near_zero_min, o.zeros);
    out.near_zero_max = std::max(out.near_zero_max, o.zeros);
  }
  if (out.near_zero_min == std::numeric_limits<int>::max()) out.near_zero_min = 0;
  return out;
}

/// Structural suite over labels x n_list x chiral s values. The case seed is
/// mixed from the master seed, the label index, n and s.
inline std::vector<StructuralCase> structural_suite(const std::vector<ClassLabel>& labels, const std::vector<int>& n_list,
                                                    int samples, std::uint64_t seed, double sigma2 = 1.0,
                                                    int threads = 1) {
  std::vector<StructuralCase> out;
  for (ClassLabel label : labels) {
    for (int requested : n_list) {
      const int n = sweep_n(label, requested);
      for (const auto& s : sweep_s_values(label, n)) {
        const EnsembleSpec ensemble = make_ensemble(label, n, s, sigma2);
        const std::uint64_t case_seed =
            mix_seed(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(label)), n), s.value_or(0));
        out.push_back(structural_case(ensemble, samples, case_seed, threads));
      }
    }
  }
  return out;
}

}  // namespace tenfold
