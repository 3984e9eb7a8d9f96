#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tenfold/densities.hpp"
#include "tenfold/ensembles.hpp"
#include "tenfold/equilibrium.hpp"
#include "tenfold/error.hpp"
#include "tenfold/parallel.hpp"
#include "tenfold/quadrature.hpp"
#include "tenfold/rng.hpp"
#include "tenfold/sampler.hpp"
#include "tenfold/spectra.hpp"

namespace tenfold {

/// sup |F_emp - F| over the atoms (both one-sided limits, ties grouped) and
/// the support endpoints.
inline double ks_distance(const EmpiricalMeasure& emp, const DensityCurve& curve) {
  const std::vector<double>& xs = emp.atoms;
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = curve.cdf(xs[i]);
    d = std::max({d, std::abs(static_cast<double>(i) / n - f), std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  for (double edge : {curve.lo(), curve.hi()}) {
    const auto below = std::upper_bound(xs.begin(), xs.end(), edge) - xs.begin();
    d = std::max(d, std::abs(static_cast<double>(below) / n - curve.cdf(edge)));
  }
  return std::min(d, 1.0);
}

/// Label and ensemble at one n, with DIII resolved by parity and chiral s
/// taken from the fraction (at least 1).
inline EnsembleSpec experiment_ensemble(const std::string& label, int n, double s_fraction, double sigma2) {
  const auto [resolved, size] = resolve_label(label, n);
  std::optional<int> s;
  if (class_spec(resolved).family == Family::Chiral) s = std::max(1, static_cast<int>(std::floor(s_fraction * size)));
  return make_ensemble(resolved, size, s, sigma2);
}

/// Raises DegenerateSpectrum unless a +-paired class really is paired.
inline void check_pairing(const Spectrum& sp, const ClassShape& shape, double scale) {
  if (shape.spec().gamma != 2) return;
  const double residual = pairing_residual(sp.full);
  if (residual > 1e-9 * scale) {
    throw DegenerateSpectrumError("class " + std::string(label_name(shape.label)) +
                                      " spectrum is not symmetric; residual " + std::to_string(residual),
                                  {residual});
  }
  for (double v : sp.reduced)
    if (!(v > 0.0)) throw DegenerateSpectrumError("reduced spectrum has a nonpositive value", {v});
}

/// Reduced spectra of reps fresh samples, in replicate order.
inline std::vector<std::vector<double>> sample_spectra(const EnsembleSpec& ensemble, std::uint64_t seed, int reps,
                                                       int threads) {
  require_reps(reps);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(reps));
  parallel_for(out.size(), threads, [&](std::size_t r) {
    const StructuredMatrix m = sample_one(ensemble, seed, r);
    const Spectrum sp = spectrum(m);
    check_pairing(sp, m.shape, m.scale());
    out[r] = sp.reduced;
  });
  return out;
}

struct ConvergenceRow {
  int n = 0;
  std::optional<int> s;
  int reps = 0;
  double ks = 0.0;
  double wall_time = 0.0;
};

struct ConvergenceReport {
  std::string label;
  double sigma2 = 1.0;
  double s_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<ConvergenceRow> rows;
};

namespace detail {
inline void require_increasing(const std::vector<int>& n_list) {
  if (n_list.empty()) throw Error(ErrorCode::InvalidParams, "n list is empty");
  for (std::size_t k = 1; k < n_list.size(); ++k)
    if (n_list[k] <= n_list[k - 1]) throw Error(ErrorCode::InvalidParams, "n list must be strictly increasing");
}
}  // namespace detail

/// KS distance between the pooled reduced spectra and the limit measure at
/// kappa = p(n)/n, for each n. Replicates at n use master seed mix_seed(seed, n).
inline ConvergenceReport convergence_experiment(const std::string& label, double sigma2, const std::vector<int>& n_list,
                                                double s_fraction, int reps, std::uint64_t seed, int threads = 1) {
  require_reps(reps);
  detail::require_increasing(n_list);
  ConvergenceReport report{label, sigma2, s_fraction, seed, {}};
  for (int n : n_list) {
    const auto start = std::chrono::steady_clock::now();
    const EnsembleSpec ensemble = experiment_ensemble(label, n, s_fraction, sigma2);
    std::vector<double> pooled;
    for (const auto& values : sample_spectra(ensemble, mix_seed(seed, static_cast<std::uint64_t>(n)), reps, threads))
      pooled.insert(pooled.end(), values.begin(), values.end());
    const double ks = ks_distance(empirical_measure(pooled), equilibrium_for(ensemble));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back({ensemble.n(), ensemble.s(), reps, ks, secs});
  }
  return report;
}

struct DecayRow {
  int n = 0;
  int reps = 0;
  int hit_count = 0;
  double p_hat = 0.0;
  std::optional<double> estimate;  // -log(p_hat) / n^2 when p_hat > 0
  bool censored = false;
};

struct DecayReport {
  std::string label;
  double sigma2 = 1.0;
  double delta = 0.0;
  double s_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<DecayRow> rows;
};

/// Frequency of KS(L_n, mu*) > delta over reps samples at each n.
inline DecayReport decay_experiment(const std::string& label, double sigma2, double delta,
                                    const std::vector<int>& n_list, int reps, std::uint64_t seed,
                                    double s_fraction = 0.25, int threads = 1) {
  require_reps(reps);
  detail::require_increasing(n_list);
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidParams, "delta must be positive");
  DecayReport report{label, sigma2, delta, s_fraction, seed, {}};
  for (int n : n_list) {
    const EnsembleSpec ensemble = experiment_ensemble(label, n, s_fraction, sigma2);
    const DensityCurve limit = equilibrium_for(ensemble);
    const auto spectra = sample_spectra(ensemble, mix_seed(seed, static_cast<std::uint64_t>(n)), reps, threads);
    int hits = 0;
    for (const auto& values : spectra)
      if (ks_distance(empirical_measure(values), limit) > delta) ++hits;
    DecayRow row{ensemble.n(), reps, hits, static_cast<double>(hits) / reps, std::nullopt, hits == 0};
    if (hits > 0) row.estimate = -std::log(row.p_hat) / (static_cast<double>(row.n) * row.n);
    report.rows.push_back(row);
  }
  return report;
}

struct OracleReport {
  std::string label;
  int n = 0;
  std::optional<int> s;
  double sigma2 = 1.0;
  bool raw = false;
  int bins = 0;
  double lo = 0.0;
  double hi = 0.0;
  int reps = 0;
  int inside = 0;  // samples that fell in the box
  std::uint64_t seed = 0;
  double discrepancy = 0.0;
};

/// Bin probabilities of the ordered pair x1 >= x2 under the joint density,
/// normalized over the box. Bins straddling the diagonal use the Duffy map
/// x1 = a + L u, x2 = a + L u v, which leaves a smooth integrand.
inline std::vector<double> model_bin_probabilities(const EnsembleSpec& ensemble, int bins, double lo, double hi) {
  const double L = (hi - lo) / bins;
  struct Node {
    int bin;
    double log_value;
    double weight;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < bins; ++i) {       // x1 bin
    for (int j = 0; j <= i; ++j) {       // x2 bin
      const int b = i * bins + j;
      const double a1 = lo + L * i;
      const double a2 = lo + L * j;
      if (i != j) {
        gauss_legendre_points(a1, a1 + L, [&](double x1, double w1) {
          gauss_legendre_points(a2, a2 + L, [&](double x2, double w2) {
            const double xs[2] = {x1, x2};
            nodes.push_back({b, joint_log_density(ensemble, xs), w1 * w2});
          });
        });
      } else {
        gauss_legendre_points(0.0, 1.0, [&](double u, double wu) {
          gauss_legendre_points(0.0, 1.0, [&](double v, double wv) {
            const double xs[2] = {a1 + L * u, a1 + L * u * v};
            nodes.push_back({b, joint_log_density(ensemble, xs), wu * wv * L * L * u});
          });
        });
      }
    }
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const Node& nd : nodes) top = std::max(top, nd.log_value);
  std::vector<double> probs(static_cast<std::size_t>(bins) * bins, 0.0);
  double total = 0.0;
  for (const Node& nd : nodes) {
    const double v = nd.weight * std::exp(nd.log_value - top);
    probs[nd.bin] += v;
    total += v;
  }
  for (double& p : probs) p /= total;
  return probs;
}

/// Sup over bins of |empirical - model| bin probability for the two reduced
/// eigenvalues of a p = 2 ensemble, both sides normalized over [lo, hi]^2.
inline OracleReport density_oracle(const EnsembleSpec& ensemble, int bins, double lo, double hi, int reps,
                                   std::uint64_t seed, int threads = 1) {
  require_reps(reps);
  if (ensemble.reduced_count() != 2) {
    throw Error(ErrorCode::InvalidParams, "density oracle needs p(n) = 2, got " +
                                              std::to_string(ensemble.reduced_count()));
  }
  if (bins < 1 || !(hi > lo)) throw Error(ErrorCode::InvalidParams, "oracle box needs bins >= 1 and lo < hi");
  if (ensemble.spec().gamma == 2 && lo < 0.0) {
    throw Error(ErrorCode::OutOfSupport, "box must lie in [0, inf) for this class");
  }
  const auto spectra = sample_spectra(ensemble, seed, reps, threads);
  std::vector<double> counts(static_cast<std::size_t>(bins) * bins, 0.0);
  const double L = (hi - lo) / bins;
  int inside = 0;
  for (const auto& values : spectra) {
    const double x1 = values[0];
    const double x2 = values[1];
    if (!(x1 >= lo && x1 < hi && x2 >= lo && x2 < hi)) continue;
    const int i = std::min(bins - 1, static_cast<int>((x1 - lo) / L));
    const int j = std::min(i, static_cast<int>((x2 - lo) / L));
    counts[static_cast<std::size_t>(i) * bins + j] += 1.0;
    ++inside;
  }
  const std::vector<double> model = model_bin_probabilities(ensemble, bins, lo, hi);
  double sup = inside == 0 ? 1.0 : 0.0;
  if (inside > 0)
    for (std::size_t b = 0; b < counts.size(); ++b) sup = std::max(sup, std::abs(counts[b] / inside - model[b]));
  OracleReport out;
  out.label = std::string(label_name(ensemble.label()));
  out.n = ensemble.n();
  out.s = ensemble.s();
  out.sigma2 = ensemble.sigma2;
  out.raw = ensemble.raw;
  out.bins = bins;
  out.lo = lo;
  out.hi = hi;
  out.reps = reps;
  out.inside = inside;
  out.seed = seed;
  out.discrepancy = sup;
  return out;
}

}  // namespace tenfold
