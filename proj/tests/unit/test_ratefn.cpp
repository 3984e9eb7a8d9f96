#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tenfold/equilibrium.hpp"
#include "tenfold/experiments.hpp"
#include "tenfold/quadrature.hpp"
#include "tenfold/ratefn.hpp"
#include "tenfold/sampler.hpp"

using namespace tenfold;

namespace {

GridMeasure shifted(const DensityCurve& c, double by, int m) {
  return grid_from_cdf(c.lo() + by, c.hi() + by, m, [&](double x) { return c.cdf(x - by); });
}

GridMeasure dilated(const DensityCurve& c, double factor, int m) {
  return grid_from_cdf(c.lo() * factor, c.hi() * factor, m, [&](double x) { return c.cdf(x / factor); });
}

GridMeasure mixed(const DensityCurve& c, double t, double ulo, double uhi, int m) {
  const double lo = std::min(c.lo(), ulo), hi = std::max(c.hi(), uhi);
  return grid_from_cdf(lo, hi, m, [&](double x) {
    const double u = std::clamp((x - ulo) / (uhi - ulo), 0.0, 1.0);
    return (1 - t) * c.cdf(std::clamp(x, c.lo(), c.hi())) + t * u;
  });
}

RateFunctional wigner_dyson(double sigma2) {
  return rate_functional_for(make_ensemble(ClassLabel::AI, 16, std::nullopt, sigma2));
}

}  // namespace

TEST(RateFn, GridFromCurveIsSymmetricAndNormalized) {
  const GridMeasure g = grid_from_curve(semicircle(0.5, 1), 256);
  double total = 0.0;
  for (int k = 0; k < g.cells(); ++k) {
    total += g.masses[k];
    EXPECT_NEAR(g.masses[k], g.masses[g.cells() - 1 - k], 1e-10);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_THROW(grid_from_curve(semicircle(0.5, 1), 8), Error);
}

TEST(RateFn, QuarterCircleMean) {
  const DensityCurve qc = quarter_circle(2.0 * std::sqrt(2.0));
  const GridMeasure g = grid_from_curve(qc, 256);
  double mean = 0.0;
  for (int k = 0; k < g.cells(); ++k) mean += g.masses[k] * 0.5 * (g.edge(k) + g.edge(k + 1));
  // Quadrature oracle for int x pdf, plus the closed form 4R / (3 pi).
  double oracle = 0.0;
  const int panels = 2000;
  for (int k = 0; k < panels; ++k) {
    const double a = qc.hi() * k / panels, b = qc.hi() * (k + 1) / panels;
    oracle += gauss_legendre(a, b, [&](double x) { return x * qc.pdf(x); });
  }
  EXPECT_NEAR(oracle, 4.0 * qc.hi() / (3.0 * std::numbers::pi), 1e-6);
  EXPECT_NEAR(mean, oracle, 1e-4);
}

TEST(RateFn, GridFromSamples) {
  const std::vector<double> same(10, 0.3);
  const GridMeasure one = grid_from_samples(same, 0.0, 1.0, 16);
  int charged = 0;
  for (double v : one.masses) charged += v > 0.0;
  EXPECT_EQ(charged, 1);

  std::vector<double> uniform;
  for (int k = 0; k < 1600; ++k) uniform.push_back((k + 0.5) / 1600.0);
  for (double v : grid_from_samples(uniform, 0.0, 1.0, 16).masses) EXPECT_NEAR(v, 1.0 / 16, 1e-12);

  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code_of([&] { grid_from_samples(same, 0.5, 1.0, 16); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([&] { grid_from_samples(std::vector<double>{}, 0.0, 1.0, 16); }), ErrorCode::EmptyInput);
}

TEST(RateFn, ClassASamplesGridIsCloseToSemicircle) {
  const EnsembleSpec e = make_ensemble(ClassLabel::A, 200, std::nullopt, 1.0);
  std::vector<double> pooled;
  for (const auto& v : sample_spectra(e, 4, 50, 4)) pooled.insert(pooled.end(), v.begin(), v.end());
  const DensityCurve sc = equilibrium_for(e);
  const double edge = *std::max_element(pooled.begin(), pooled.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  const double r = std::max(sc.hi(), std::abs(edge)) * 1.01;
  const GridMeasure g = grid_from_samples(pooled, -r, r, 512);
  double ks = 0.0;
  for (int k = 0; k <= g.cells(); ++k) ks = std::max(ks, std::abs(g.cdf(g.edge(k)) - sc.cdf(std::clamp(g.edge(k), sc.lo(), sc.hi()))));
  EXPECT_LT(ks, 0.05);
}

TEST(RateFn, EnergyGrowsAsSupportShrinks) {
  double prev = -1e300;
  for (int m : {16, 32, 64, 128, 256}) {
    GridMeasure g{0.0, 1.0, std::vector<double>(m, 0.0)};
    g.masses[m / 2] = 1.0;
    const double v = log_energy(g, 1);
    EXPECT_GT(v, prev);
    // A uniform cell of width h has energy log(1/h) + 3/2.
    EXPECT_NEAR(v, std::log(static_cast<double>(m)) + 1.5, 1e-9);
    prev = v;
  }
}

TEST(RateFn, SemicircleEnergyOracles) {
  EXPECT_NEAR(log_energy(grid_from_curve(semicircle(1.0, 1), 2048), 1), 0.25, 2e-3);
  EXPECT_NEAR(log_energy(grid_from_curve(semicircle(0.5, 1), 2048), 1), 0.25 + 0.5 * std::log(2.0), 2e-3);
  for (double r : {0.5, 3.0}) {
    const double s2 = r * r / 4.0;
    EXPECT_NEAR(log_energy(grid_from_curve(semicircle(s2, 1), 2048), 1), 0.25 - std::log(r / 2.0), 2e-3);
  }
}

TEST(RateFn, EnergyErrors) {
  const GridMeasure g = grid_from_curve(semicircle(1.0, 1), 64);
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code_of([&] { log_energy(g, 3); }), ErrorCode::UnsupportedGamma);
  EXPECT_EQ(code_of([&] { log_energy(g, 2); }), ErrorCode::OutOfSupport);
}

// log|x^2 - y^2| = log|x - y| + log(x + y), and E_2(mu) = E_1(mu o sqrt) in law.
TEST(RateFn, GammaTwoMatchesSquaredPushforward) {
  const DensityCurve qc = quarter_circle(1.5);
  const double e2 = log_energy(grid_from_curve(qc, 2048), 2);
  const double e1 = log_energy(grid_from_curve(pushforward_power(qc, 2.0), 2048), 1);
  EXPECT_NEAR(e2, e1, 5e-3);

  const DensityCurve ch = chiral_equilibrium(1.0, 2.0, 0.25);
  EXPECT_NEAR(log_energy(grid_from_curve(ch, 2048), 2),
              log_energy(grid_from_curve(pushforward_power(ch, 2.0), 2048), 1), 5e-3);
}

TEST(RateFn, FieldTermExamples) {
  const GridMeasure g = grid_from_curve(semicircle(0.5, 1), 2048);
  EXPECT_NEAR(field_term(g, wigner_dyson_weight(0.5)), -0.25, 1e-4);

  WeightSpec flat = wigner_dyson_weight(1.0);
  flat.sigma2 = std::numeric_limits<double>::infinity();
  EXPECT_EQ(field_term(g, flat), 0.0);

  const double zero[1] = {0.0};
  try {
    field_term(empirical_measure(zero), chiral_weight(1.0, 1, 4, 2.0, 0.25));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivergentField);
  }
  EXPECT_THROW(field_term(g, bdg_weight(1.0, 2.0, 0, 4)), Error);
}

TEST(RateFn, CalibrationConstantForGoe) {
  const RateFunctional f = calibrate(wigner_dyson(0.5), semicircle(0.5, 1));
  ASSERT_TRUE(f.c.has_value());
  EXPECT_NEAR(*f.c, 0.375 + 0.25 * std::log(2.0), 5e-3);
  EXPECT_NEAR(*f.c, 0.548287, 5e-3);
  const RateFunctional twice = calibrate(f, semicircle(0.5, 1));
  EXPECT_DOUBLE_EQ(*twice.c, *f.c);
}

TEST(RateFn, MinimizerForWignerDyson) {
  const DensityCurve sc = semicircle(0.5, 1);
  const RateFunctional f = calibrate(wigner_dyson(0.5), sc);
  const double at_star = rate(grid_from_curve(sc, 2048), f);
  EXPECT_NEAR(at_star, 0.0, 2e-3);
  EXPECT_GT(rate(shifted(sc, 0.5, 2048), f), 0.01);
  const double mix = rate(mixed(sc, 0.2, -1.0, 1.0, 2048), f);
  EXPECT_GT(mix, at_star);
}

TEST(RateFn, MinimizerForBdgC) {
  const EnsembleSpec c = make_ensemble(ClassLabel::C, 16, std::nullopt, 1.0);
  const DensityCurve qc = equilibrium_for(c);
  const RateFunctional f = calibrate(rate_functional_for(c), qc);
  EXPECT_NEAR(rate(grid_from_curve(qc, 2048), f), 0.0, 2e-3);
  EXPECT_GT(rate(dilated(qc, 1.2, 2048), f), 0.0);
}

TEST(RateFn, NonNegativeOnPerturbationFamilies) {
  struct Case {
    EnsembleSpec e;
    double ulo, uhi;
  };
  const Case cases[] = {
      {make_ensemble(ClassLabel::AI, 16, std::nullopt, 0.5), -1.0, 1.0},
      {make_ensemble(ClassLabel::AIII, 100, 25, 1.0), 0.0, 1.0},
      {make_ensemble(ClassLabel::D, 16, std::nullopt, 1.0), 0.0, 1.0},
  };
  for (const Case& cs : cases) {
    const DensityCurve star = equilibrium_for(cs.e);
    const RateFunctional f = calibrate(rate_functional_for(cs.e), star);
    std::vector<GridMeasure> family;
    for (double by : {0.05, 0.1, 0.2, 0.3, 0.5, 0.8}) family.push_back(shifted(star, by, 1024));
    for (double fac : {0.8, 0.9, 0.95, 1.05, 1.1, 1.2, 1.4}) family.push_back(dilated(star, fac, 1024));
    for (double t : {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) family.push_back(mixed(star, t, cs.ulo, cs.uhi, 1024));
    ASSERT_EQ(family.size(), 20u);
    for (const GridMeasure& g : family) EXPECT_GE(rate(g, f), -2e-3) << label_name(cs.e.shape.label);
  }
}

TEST(RateFn, GridRefinementConverges) {
  const DensityCurve sc = semicircle(1.0, 1);
  const RateFunctional f = wigner_dyson(1.0);
  const double r512 = rate(grid_from_curve(sc, 512), f);
  const double r1024 = rate(grid_from_curve(sc, 1024), f);
  const double r2048 = rate(grid_from_curve(sc, 2048), f);
  EXPECT_LT(std::abs(r1024 - r2048), 0.5 * std::abs(r512 - r1024));
}

TEST(RateFn, GridAndSampleConstructionsAgree) {
  const DensityCurve sc = semicircle(0.5, 1);
  const RateFunctional f = calibrate(wigner_dyson(0.5), sc);
  const int count = 100000;
  std::vector<double> points;
  points.reserve(count);
  for (int j = 0; j < count; ++j) points.push_back(sc.quantile((j + 0.5) / count));
  const double a = rate(grid_from_curve(sc, 512), f);
  const double b = rate(grid_from_samples(points, sc.lo(), sc.hi(), 512), f);
  EXPECT_NEAR(a, b, 5e-3);
}

TEST(RateFn, AtomsHaveInfiniteRate) {
  const double xs[2] = {0.1, 0.2};
  EXPECT_EQ(rate(empirical_measure(xs), wigner_dyson(1.0)), std::numeric_limits<double>::infinity());
}
