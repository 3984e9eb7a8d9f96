#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tenfold/tenfold.hpp"

namespace tenfold::cli {

using io::json;

/// A bad flag value; the CLI exits with status 2 and names the flag.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string flag, const std::string& message)
      : std::runtime_error(flag + ": " + message), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

/// Parsed command line, validated before dispatch.
struct RunConfig {
  std::string subcommand;
  std::string label;
  int n = 0;
  std::vector<int> n_list;
  std::optional<int> s;
  double sigma2 = 1.0;
  bool raw_sigma2 = false;
  std::uint64_t seed = 0;
  int reps = 1;
  int grid = kDefaultCurveNodes;
  int calibration_grid = kDefaultCalibrationCells;
  std::string out;
  std::string format;
  std::optional<int> threads;
  std::string emit_matrix;
  int hist_cells = 0;
  std::vector<double> xs;
  std::string measure;
  bool calibrate = false;
  double s_fraction = 0.25;
  double delta = 0.08;
  bool timings = false;
  int bins = 40;
  std::optional<double> lo;
  std::optional<double> hi;
};

namespace detail {

inline std::optional<std::string> flag_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "--class";
    case ErrorCode::MissingS:
    case ErrorCode::UnexpectedS:
    case ErrorCode::InvalidS: return "--s";
    case ErrorCode::InvalidN:
    case ErrorCode::ParityMismatch: return "--n";
    case ErrorCode::NonPositiveSigma: return "--sigma2";
    case ErrorCode::InvalidReps: return "--reps";
    default: return std::nullopt;
  }
}

// Runs f, turning construction errors that stem from one flag into usage errors.
template <typename F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (auto flag = flag_for(e.code())) throw UsageError(*flag, e.what());
    throw;
  }
}

inline EnsembleSpec ensemble_from(const RunConfig& cfg, int n) {
  return as_usage([&] {
    const auto [label, size] = resolve_label(cfg.label, n);
    return make_ensemble(label, size, cfg.s, cfg.sigma2, cfg.raw_sigma2);
  });
}

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : "|") + f;
  throw UsageError("--format", "expected one of " + list + " for " + cfg.subcommand + ", got '" + cfg.format + "'");
}

inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    io::write_atomic(cfg.out, content);
  }
}

inline std::string text_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (width.size() <= k) width.push_back(0);
      width[k] = std::max(width[k], r[k].size());
    }
  std::ostringstream ss;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      ss << std::left << std::setw(static_cast<int>(width[k]) + (k + 1 < r.size() ? 2 : 0)) << r[k];
    }
    ss << '\n';
  }
  std::string text = ss.str();
  // strip trailing padding
  std::string cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    cleaned += line + '\n';
  }
  return cleaned;
}

// ---- subcommands ------------------------------------------------------------

inline int cmd_classes(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"text", "csv", "json"});
  std::vector<std::vector<std::string>> rows = {{"class", "family", "d", "p", "alpha", "beta", "gamma", "phi", "psi"}};
  json arr = json::array();
  for (const ClassSpec& c : class_catalog()) {
    rows.push_back({std::string(label_name(c.label)), std::string(family_name(c.family)), c.ambient_formula(),
                    c.reduced_formula(), c.alpha_formula(), std::to_string(c.beta), std::to_string(c.gamma),
                    std::to_string(c.phi), std::to_string(c.psi)});
    arr.push_back(json{{"class", label_name(c.label)},
                       {"family", family_name(c.family)},
                       {"d", c.ambient_formula()},
                       {"p", c.reduced_formula()},
                       {"alpha", c.alpha_formula()},
                       {"beta", c.beta},
                       {"gamma", c.gamma},
                       {"phi", c.phi},
                       {"psi", c.psi}});
  }
  if (cfg.format == "json") {
    emit(cfg, io::dump(arr), out);
  } else if (cfg.format == "csv") {
    std::string text;
    for (const auto& r : rows) text += io::join_row(r);
    emit(cfg, text, out);
  } else {
    emit(cfg, text_table(rows), out);
  }
  return 0;
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  const EnsembleSpec ensemble = ensemble_from(cfg, cfg.n);
  as_usage([&] { require_reps(cfg.reps); return 0; });
  const SampleBatch batch = sample(ensemble, cfg.seed, cfg.reps, resolve_threads(cfg.threads));
  if (!cfg.emit_matrix.empty()) {
    json doc;
    if (batch.reps == 1) {
      doc = io::matrix_json(batch.matrices.front());
    } else {
      doc = json::array();
      for (const StructuredMatrix& m : batch.matrices) doc.push_back(io::matrix_json(m));
    }
    io::write_atomic(cfg.emit_matrix, io::dump(doc));
  }
  const std::vector<io::SpectrumRow> rows = io::spectrum_rows(batch);
  if (cfg.hist_cells > 0) {
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r.value);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn;
    double hi = *mx;
    if (!(hi > lo)) hi = lo + 1.0;
    emit(cfg, io::grid_csv(grid_from_samples(values, lo, hi, cfg.hist_cells)), out);
    return 0;
  }
  if (!cfg.emit_matrix.empty() && cfg.out.empty()) return 0;
  require_format(cfg, {"csv", "json"});
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"class", r.label}, {"n", r.n}, {"s", io::optional_int(r.s)}, {"sigma2", r.sigma2},
                         {"seed", r.seed}, {"rep", r.rep}, {"index", r.index}, {"value", r.value}});
    }
    emit(cfg, io::dump(arr), out);
  } else {
    emit(cfg, io::spectra_csv(rows), out);
  }
  return 0;
}

inline int cmd_density(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "text"});
  const EnsembleSpec ensemble = ensemble_from(cfg, cfg.n);
  double value = 0.0;
  try {
    value = joint_log_density(ensemble, cfg.xs);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::WrongLength || e.code() == ErrorCode::OutOfSupport) throw UsageError("--xs", e.what());
    throw;
  }
  if (cfg.format == "text") {
    emit(cfg, (std::isfinite(value) ? io::format_double(value) : std::string("-inf")) + "\n", out);
  } else {
    emit(cfg,
         io::dump(json{{"class", label_name(ensemble.label())},
                       {"n", ensemble.n()},
                       {"s", io::optional_int(ensemble.s())},
                       {"sigma2", ensemble.sigma2},
                       {"raw", ensemble.raw},
                       {"log_density", io::number(value)}}),
         out);
  }
  return 0;
}

inline int cmd_equilibrium(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"csv", "json"});
  if (cfg.grid < 2) throw UsageError("--grid", "needs at least 2 nodes");
  const EnsembleSpec ensemble = ensemble_from(cfg, cfg.n);
  const DensityCurve curve = equilibrium_for(ensemble, cfg.grid);
  if (cfg.format == "json") {
    json pts = json::array();
    for (const auto& r : io::parse_curve_csv(io::curve_csv(curve, cfg.grid)))
      pts.push_back(json{{"x", r.x}, {"pdf", io::number(r.pdf)}, {"cdf", r.cdf}});
    emit(cfg,
         io::dump(json{{"descriptor", curve.descriptor()},
                       {"lo", curve.lo()},
                       {"hi", curve.hi()},
                       {"mass", curve.mass()},
                       {"points", pts}}),
         out);
  } else {
    emit(cfg, io::curve_csv(curve, cfg.grid), out);
  }
  return 0;
}

inline int cmd_rate(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "text"});
  if (cfg.grid < 16) throw UsageError("--grid", "needs at least 16 cells");
  if (cfg.calibration_grid < 16) throw UsageError("--calibration-grid", "needs at least 16 cells");
  const EnsembleSpec ensemble = ensemble_from(cfg, cfg.n);
  RateFunctional f = rate_functional_for(ensemble);
  const DensityCurve limit = equilibrium_for(ensemble);
  if (cfg.calibrate) f = calibrate(f, limit, cfg.calibration_grid);
  const GridMeasure mu =
      cfg.measure.empty() ? grid_from_curve(limit, cfg.grid) : io::parse_grid_csv(io::read_file(cfg.measure));
  const RateTerms t = rate_terms(mu, f);
  if (cfg.format == "text") {
    emit(cfg,
         "energy " + io::format_double(t.energy) + "\nfield " + io::format_double(t.field) + "\nc " +
             io::format_double(t.c) + "\nrate " + io::format_double(t.rate) + "\n",
         out);
  } else {
    emit(cfg, io::dump(io::rate_json(t, f)), out);
  }
  return 0;
}

inline void require_n_list(const RunConfig& cfg) {
  if (cfg.n_list.empty()) throw UsageError("--n", "needs at least one value");
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
    if (cfg.n_list[k] < 1) throw UsageError("--n", "values must be positive");
    if (k > 0 && cfg.n_list[k] <= cfg.n_list[k - 1]) throw UsageError("--n", "values must be strictly increasing");
  }
  // Validate the shape at every n before any sampling starts.
  for (int n : cfg.n_list) {
    as_usage([&] {
      if (cfg.s) throw UsageError("--s", "experiments take --s-frac, not --s");
      experiment_ensemble(cfg.label, n, cfg.s_fraction, cfg.sigma2);
      return 0;
    });
  }
  as_usage([&] { require_reps(cfg.reps); return 0; });
}

inline int cmd_ks(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "text"});
  require_n_list(cfg);
  const ConvergenceReport r = convergence_experiment(cfg.label, cfg.sigma2, cfg.n_list, cfg.s_fraction, cfg.reps,
                                                     cfg.seed, resolve_threads(cfg.threads));
  if (cfg.format == "text") {
    std::vector<std::vector<std::string>> rows = {{"n", "s", "reps", "ks_distance"}};
    for (const auto& row : r.rows)
      rows.push_back({std::to_string(row.n), row.s ? std::to_string(*row.s) : "-", std::to_string(row.reps),
                      io::format_double(row.ks)});
    emit(cfg, text_table(rows), out);
  } else {
    emit(cfg, io::dump(io::convergence_json(r, cfg.timings)), out);
  }
  return 0;
}

inline int cmd_ldp(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "text"});
  require_n_list(cfg);
  if (!(cfg.delta > 0.0)) throw UsageError("--delta", "must be positive");
  const DecayReport r = decay_experiment(cfg.label, cfg.sigma2, cfg.delta, cfg.n_list, cfg.reps, cfg.seed,
                                         cfg.s_fraction, resolve_threads(cfg.threads));
  if (cfg.format == "text") {
    std::vector<std::vector<std::string>> rows = {{"n", "reps", "hit_count", "p_hat", "estimate"}};
    for (const auto& row : r.rows)
      rows.push_back({std::to_string(row.n), std::to_string(row.reps), std::to_string(row.hit_count),
                      io::format_double(row.p_hat), row.estimate ? io::format_double(*row.estimate) : "censored"});
    emit(cfg, text_table(rows), out);
  } else {
    emit(cfg, io::dump(io::decay_json(r)), out);
  }
  return 0;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "text"});
  const EnsembleSpec ensemble = ensemble_from(cfg, cfg.n);
  as_usage([&] { require_reps(cfg.reps); return 0; });
  if (ensemble.reduced_count() != 2) throw UsageError("--n", "the oracle needs exactly two reduced eigenvalues");
  if (cfg.bins < 1) throw UsageError("--bins", "must be positive");
  const bool half = ensemble.spec().gamma == 2;
  const double lo = cfg.lo.value_or(half ? 0.0 : -4.0);
  const double hi = cfg.hi.value_or(4.0);
  if (!(hi > lo)) throw UsageError("--hi", "box needs lo < hi");
  if (half && lo < 0.0) throw UsageError("--lo", "box must lie in [0, inf) for this class");
  const OracleReport r = density_oracle(ensemble, cfg.bins, lo, hi, cfg.reps, cfg.seed, resolve_threads(cfg.threads));
  if (cfg.format == "text") {
    emit(cfg, "discrepancy " + io::format_double(r.discrepancy) + "\n", out);
  } else {
    emit(cfg, io::dump(io::oracle_json(r)), out);
  }
  return 0;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"text", "json"});
  std::vector<ClassLabel> labels;
  if (cfg.label.empty()) {
    labels.assign(kAllLabels.begin(), kAllLabels.end());
  } else {
    labels.push_back(as_usage([&] { return parse_label(cfg.label); }));
  }
  std::vector<int> n_list = cfg.n_list.empty() ? std::vector<int>{2, 4, 8, 16} : cfg.n_list;
  for (int n : n_list)
    if (n < 1) throw UsageError("--n", "values must be positive");
  if (!(cfg.sigma2 > 0.0)) throw UsageError("--sigma2", "must be positive");
  as_usage([&] { require_reps(cfg.reps); return 0; });
  const auto cases = structural_suite(labels, n_list, cfg.reps, cfg.seed, cfg.sigma2, resolve_threads(cfg.threads));
  bool ok = true;
  std::vector<std::vector<std::string>> rows = {
      {"class", "n", "s", "samples", "trace", "factorization", "pairing", "zero_modes", "status"}};
  json arr = json::array();
  for (const auto& c : cases) {
    ok = ok && c.passed();
    const std::string zeros = std::to_string(c.near_zero_min) + "/" + std::to_string(c.expected_zero_modes());
    rows.push_back({std::string(label_name(c.label)), std::to_string(c.n), c.s ? std::to_string(*c.s) : "-",
                    std::to_string(c.samples), io::format_double(c.trace), io::format_double(c.factorization),
                    io::format_double(c.pairing), zeros, c.passed() ? "ok" : "FAIL"});
    arr.push_back(json{{"class", label_name(c.label)},
                       {"n", c.n},
                       {"s", io::optional_int(c.s)},
                       {"samples", c.samples},
                       {"trace", c.trace},
                       {"factorization", c.factorization},
                       {"pairing", c.pairing},
                       {"near_zero_min", c.near_zero_min},
                       {"near_zero_max", c.near_zero_max},
                       {"expected_zero_modes", c.expected_zero_modes()},
                       {"collapse_failures", c.collapse_failures},
                       {"violations", c.violations},
                       {"passed", c.passed()}});
  }
  emit(cfg, cfg.format == "json" ? io::dump(json{{"passed", ok}, {"cases", arr}}) : text_table(rows), out);
  return ok ? 0 : 1;
}

}  // namespace detail

/// Entry point of the `tenfold` binary. Returns the process exit status:
/// 0 on success, 1 on runtime errors, 2 on usage errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Gaussian ensembles of the ten symmetry classes: sampling, spectra, limit measures, rate functional"};
  app.name("tenfold");
  app.require_subcommand(1, 1);
  RunConfig cfg;

  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "worker threads (default: TENFOLD_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  };
  const auto add_out = [&](CLI::App* sub, const std::string& format) {
    cfg.format = format;
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "output format")->capture_default_str();
  };
  const auto add_class = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--class", cfg.label, "symmetry class label (B/D and DIII resolve parity from --n)");
    if (required) opt->required();
  };
  const auto add_ensemble = [&](CLI::App* sub) {
    add_class(sub);
    sub->add_option("--n", cfg.n, "size parameter n (matrix size for B/D)")->required();
    sub->add_option("--s", cfg.s, "chiral block size s");
    sub->add_option("--sigma2", cfg.sigma2, "variance parameter sigma^2")->capture_default_str();
    sub->add_flag("--raw-sigma2", cfg.raw_sigma2, "use sigma^2 as the parameter variance (no 1/n scaling)");
  };
  const auto add_experiment = [&](CLI::App* sub) {
    add_class(sub);
    sub->add_option("--n", cfg.n_list, "comma-separated increasing sizes")->required()->delimiter(',');
    sub->add_option("--s", cfg.s, "not accepted; use --s-frac");
    sub->add_option("--s-frac", cfg.s_fraction, "chiral s = max(1, floor(frac * n))")->capture_default_str();
    sub->add_option("--sigma2", cfg.sigma2, "variance parameter sigma^2")->capture_default_str();
    sub->add_option("--reps", cfg.reps, "replicates per n")->required();
    sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    add_threads(sub);
  };

  auto* classes = app.add_subcommand("classes", "print the class table");
  add_out(classes, "text");

  auto* sample_cmd = app.add_subcommand("sample", "draw matrices and write reduced spectra");
  add_ensemble(sample_cmd);
  sample_cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  sample_cmd->add_option("--reps", cfg.reps, "number of matrices")->capture_default_str();
  sample_cmd->add_option("--emit-matrix", cfg.emit_matrix, "also write the matrices as JSON to this file");
  sample_cmd->add_option("--hist", cfg.hist_cells, "write a grid CSV histogram with this many cells instead");
  add_threads(sample_cmd);
  add_out(sample_cmd, "csv");

  auto* density = app.add_subcommand("density", "log joint density of reduced eigenvalues");
  add_ensemble(density);
  density->add_option("--xs", cfg.xs, "comma-separated eigenvalues")->required()->delimiter(',');
  add_out(density, "json");

  auto* equilibrium = app.add_subcommand("equilibrium", "limit measure as x,pdf,cdf");
  add_ensemble(equilibrium);
  equilibrium->add_option("--grid", cfg.grid, "number of nodes")->capture_default_str();
  add_out(equilibrium, "csv");

  auto* rate_cmd = app.add_subcommand("rate", "rate functional of a grid measure");
  add_ensemble(rate_cmd);
  rate_cmd->add_option("--measure", cfg.measure, "grid CSV (cell_lo,cell_hi,mass); default: the limit measure");
  rate_cmd->add_flag("--calibrate", cfg.calibrate, "set c so that the limit measure has rate 0");
  rate_cmd->add_option("--grid", cfg.grid, "cells when gridding the limit measure")->capture_default_str();
  rate_cmd->add_option("--calibration-grid", cfg.calibration_grid, "cells used for calibration")
      ->capture_default_str();
  add_out(rate_cmd, "json");

  auto* ks = app.add_subcommand("ks", "KS distance to the limit measure across n");
  add_experiment(ks);
  ks->add_flag("--timings", cfg.timings, "include wall times in the report");
  add_out(ks, "json");

  auto* ldp = app.add_subcommand("ldp", "frequency of KS deviations across n");
  add_experiment(ldp);
  ldp->add_option("--delta", cfg.delta, "KS radius")->capture_default_str();
  add_out(ldp, "json");

  auto* oracle = app.add_subcommand("oracle", "binned two-eigenvalue law against the joint density");
  add_ensemble(oracle);
  oracle->add_option("--reps", cfg.reps, "samples")->required();
  oracle->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  oracle->add_option("--bins", cfg.bins, "bins per axis")->capture_default_str();
  oracle->add_option("--lo", cfg.lo, "box lower edge (default -4, or 0 on the half line)");
  oracle->add_option("--hi", cfg.hi, "box upper edge (default 4)");
  add_threads(oracle);
  add_out(oracle, "json");

  auto* check = app.add_subcommand("check", "structural and trace-identity checks on fresh samples");
  add_class(check, false);
  check->add_option("--n", cfg.n_list, "comma-separated sizes (default 2,4,8,16)")->delimiter(',');
  check->add_option("--sigma2", cfg.sigma2, "variance parameter sigma^2")->capture_default_str();
  check->add_option("--reps", cfg.reps, "samples per case (default 50)");
  check->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  add_threads(check);
  add_out(check, "text");

  // add_out assigns per-subcommand defaults; restore them once the subcommand is known.
  const std::vector<std::pair<CLI::App*, std::string>> defaults = {
      {classes, "text"}, {sample_cmd, "csv"}, {density, "json"}, {equilibrium, "csv"}, {rate_cmd, "json"},
      {ks, "json"},      {ldp, "json"},       {oracle, "json"},  {check, "text"}};
  cfg.format.clear();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [sub, fmt] : defaults) {
    if (sub->parsed()) {
      cfg.subcommand = sub->get_name();
      if (sub->count("--format") == 0) cfg.format = fmt;
    }
  }
  if (check->parsed() && check->count("--reps") == 0) cfg.reps = 50;

  try {
    if (cfg.threads && *cfg.threads < 1) throw UsageError("--threads", "must be positive");
    if (cfg.subcommand == "classes") return detail::cmd_classes(cfg, out);
    if (cfg.subcommand == "sample") return detail::cmd_sample(cfg, out);
    if (cfg.subcommand == "density") return detail::cmd_density(cfg, out);
    if (cfg.subcommand == "equilibrium") return detail::cmd_equilibrium(cfg, out);
    if (cfg.subcommand == "rate") return detail::cmd_rate(cfg, out);
    if (cfg.subcommand == "ks") return detail::cmd_ks(cfg, out);
    if (cfg.subcommand == "ldp") return detail::cmd_ldp(cfg, out);
    if (cfg.subcommand == "oracle") return detail::cmd_oracle(cfg, out);
    if (cfg.subcommand == "check") return detail::cmd_check(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "unknown subcommand\n";
  return 2;
}

}  // namespace tenfold::cli
