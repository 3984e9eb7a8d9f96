#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "tenfold/io.hpp"

using namespace tenfold;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tenfold_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, DoublesRoundTripExactly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(rng) * std::pow(10.0, (k % 40) - 20);
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::parse_double(io::format_double(0.1)), 0.1);
  EXPECT_THROW(io::parse_double("1.5x"), Error);
  EXPECT_THROW(io::parse_int("7.0"), Error);
  EXPECT_THROW(io::parse_u64("-3"), Error);
}

TEST(Io, SpectraCsvRoundTrip) {
  const SampleBatch b = sample(make_ensemble(ClassLabel::BDI, 7, 3, 0.3), 99, 4);
  const auto rows = io::spectrum_rows(b);
  EXPECT_EQ(rows.size(), 4u * 3u);
  const std::string text = io::spectra_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), "class,n,s,sigma2,seed,rep,index,value");
  EXPECT_EQ(io::parse_spectra_csv(text), rows);

  const SampleBatch a = sample(make_ensemble(ClassLabel::AI, 2, std::nullopt, 0.5), 1, 3);
  const auto ai_rows = io::spectrum_rows(a);
  EXPECT_EQ(ai_rows.size(), 6u);
  EXPECT_FALSE(ai_rows[0].s.has_value());
  EXPECT_EQ(io::parse_spectra_csv(io::spectra_csv(ai_rows)), ai_rows);
}

TEST(Io, CsvReaderRejectsMalformedInput) {
  EXPECT_THROW(io::parse_spectra_csv("class,n\nA,2\n"), Error);
  EXPECT_THROW(io::parse_spectra_csv("class,n,s,sigma2,seed,rep,index,value\nA,2,,1,1,0,0\n"), Error);
  EXPECT_THROW(io::parse_spectra_csv(""), Error);
  // CRLF line endings and blank lines are tolerated.
  const auto rows = io::parse_spectra_csv("class,n,s,sigma2,seed,rep,index,value\r\n\r\nA,2,,1,5,0,1,0.25\r\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].value, 0.25);
}

TEST(Io, GridCsvRoundTrip) {
  const GridMeasure g = grid_from_curve(chiral_equilibrium(1.0, 2.0, 0.25), 300);
  const GridMeasure back = io::parse_grid_csv(io::grid_csv(g));
  EXPECT_EQ(back.lo, g.lo);
  EXPECT_EQ(back.hi, g.hi);
  EXPECT_EQ(back.masses, g.masses);
  EXPECT_THROW(io::parse_grid_csv("cell_lo,cell_hi,mass\n0,1,0.5\n1,2,0.2\n"), Error);
  EXPECT_THROW(io::parse_grid_csv("cell_lo,cell_hi,mass\n0,1,0.5\n1.5,2.5,0.5\n"), Error);
  EXPECT_THROW(io::parse_grid_csv("cell_lo,cell_hi,mass\n"), Error);
}

TEST(Io, CurveCsvRoundTrip) {
  const DensityCurve c = semicircle(0.5, 1);
  const auto rows = io::parse_curve_csv(io::curve_csv(c, 101));
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows.front().x, c.lo());
  EXPECT_EQ(rows.back().x, c.hi());
  for (const auto& r : rows) {
    EXPECT_EQ(r.pdf, c.pdf(r.x));
    EXPECT_EQ(r.cdf, c.cdf(r.x));
  }
}

TEST(Io, MatrixJsonRoundTrip) {
  for (ClassLabel label : {ClassLabel::A, ClassLabel::CII, ClassLabel::DIII_odd, ClassLabel::B}) {
    std::optional<int> s;
    if (class_spec(label).chiral()) s = 1;
    const int n = label == ClassLabel::DIII_odd ? 3 : 4;
    const StructuredMatrix m = sample_one(make_ensemble(label, n, s, 1.0), 5, 0);
    const io::json j = io::matrix_json(m);
    EXPECT_EQ(j.at("label"), std::string(label_name(label)));
    const StructuredMatrix back = io::matrix_from_json(io::json::parse(io::dump(j)));
    EXPECT_TRUE(back.shape == m.shape);
    EXPECT_EQ(back.entries.data(), m.entries.data());
  }
  io::json bad = io::matrix_json(sample_one(make_ensemble(ClassLabel::A, 2, std::nullopt, 1.0), 1, 0));
  bad["dim"] = 3;
  EXPECT_THROW(io::matrix_from_json(bad), Error);
  bad.erase("entries");
  EXPECT_THROW(io::matrix_from_json(bad), Error);
}

TEST(Io, ReportJsonRoundTrips) {
  const ConvergenceReport c = convergence_experiment("AIII", 1.0, {8, 16}, 0.25, 3, 4);
  const ConvergenceReport c2 = io::convergence_from_json(io::json::parse(io::dump(io::convergence_json(c, true))));
  ASSERT_EQ(c2.rows.size(), 2u);
  EXPECT_EQ(c2.label, "AIII");
  EXPECT_EQ(c2.rows[1].s, c.rows[1].s);
  EXPECT_EQ(c2.rows[1].ks, c.rows[1].ks);
  EXPECT_EQ(c2.rows[1].wall_time, c.rows[1].wall_time);
  EXPECT_FALSE(io::convergence_json(c, false)["rows"][0].contains("wall_time"));

  const DecayReport d = decay_experiment("A", 1.0, 0.1, {6, 12}, 200, 4);
  const io::json dj = io::decay_json(d);
  EXPECT_EQ(io::dump(io::decay_json(io::decay_from_json(io::json::parse(io::dump(dj))))), io::dump(dj));

  const OracleReport o =
      density_oracle(make_ensemble(ClassLabel::C, 2, std::nullopt, 1.0, true), 10, 0.0, 4.0, 500, 4);
  const io::json oj = io::oracle_json(o);
  EXPECT_EQ(io::dump(io::oracle_json(io::oracle_from_json(io::json::parse(io::dump(oj))))), io::dump(oj));
}

TEST(Io, NonFiniteNumbersBecomeNull) {
  EXPECT_TRUE(io::number(-std::numeric_limits<double>::infinity()).is_null());
  EXPECT_TRUE(io::number(std::nan("")).is_null());
  EXPECT_EQ(io::number(1.5), 1.5);
}

TEST(Io, AtomicWriteReplacesTarget) {
  const fs::path p = scratch("atomic.txt");
  io::write_atomic(p, "first\n");
  io::write_atomic(p, "second\n");
  EXPECT_EQ(io::read_file(p), "second\n");
  EXPECT_FALSE(fs::exists(fs::path(p.string() + ".tmp")));
  EXPECT_THROW(io::write_atomic(scratch("missing_dir") / "x" / "y.txt", "z"), Error);
  EXPECT_THROW(io::read_file(scratch("does_not_exist.txt")), Error);
}
