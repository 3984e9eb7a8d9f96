#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "tenfold/ensembles.hpp"
#include "tenfold/equilibrium.hpp"
#include "tenfold/error.hpp"
#include "tenfold/experiments.hpp"
#include "tenfold/ratefn.hpp"
#include "tenfold/sampler.hpp"
#include "tenfold/spectra.hpp"
#include "tenfold/structure.hpp"

namespace tenfold::io {

using json = nlohmann::ordered_json;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline long long parse_int(std::string_view text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

/// Writes to a sibling temp file, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Rows of a CSV with the expected header; blank lines are skipped.
inline std::vector<std::vector<std::string>> read_csv(const std::string& text, const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (!seen_header) {
      if (fields != header) throw Error(ErrorCode::ParseError, "unexpected CSV header: " + line);
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) throw Error(ErrorCode::ParseError, "wrong field count in: " + line);
    rows.push_back(std::move(fields));
  }
  if (!seen_header) throw Error(ErrorCode::ParseError, "CSV has no header");
  return rows;
}

inline std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += fields[k];
  }
  out += '\n';
  return out;
}

// ---- spectra CSV ---------------------------------------------------------

struct SpectrumRow {
  std::string label;
  int n = 0;
  std::optional<int> s;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  int rep = 0;
  int index = 0;
  double value = 0.0;

  bool operator==(const SpectrumRow&) const = default;
};

inline const std::vector<std::string>& spectra_header() {
  static const std::vector<std::string> h = {"class", "n", "s", "sigma2", "seed", "rep", "index", "value"};
  return h;
}

inline std::string spectra_csv(const std::vector<SpectrumRow>& rows) {
  std::string out = join_row(spectra_header());
  for (const SpectrumRow& r : rows) {
    out += join_row({r.label, std::to_string(r.n), r.s ? std::to_string(*r.s) : "", format_double(r.sigma2),
                     std::to_string(r.seed), std::to_string(r.rep), std::to_string(r.index), format_double(r.value)});
  }
  return out;
}

inline std::vector<SpectrumRow> parse_spectra_csv(const std::string& text) {
  std::vector<SpectrumRow> out;
  for (const auto& f : read_csv(text, spectra_header())) {
    SpectrumRow r;
    r.label = f[0];
    r.n = static_cast<int>(parse_int(f[1]));
    if (!f[2].empty()) r.s = static_cast<int>(parse_int(f[2]));
    r.sigma2 = parse_double(f[3]);
    r.seed = parse_u64(f[4]);
    r.rep = static_cast<int>(parse_int(f[5]));
    r.index = static_cast<int>(parse_int(f[6]));
    r.value = parse_double(f[7]);
    out.push_back(std::move(r));
  }
  return out;
}

/// Rows for the reduced spectra of a batch, one per eigenvalue.
inline std::vector<SpectrumRow> spectrum_rows(const SampleBatch& batch) {
  std::vector<SpectrumRow> rows;
  const EnsembleSpec& e = batch.ensemble;
  for (int r = 0; r < batch.reps; ++r) {
    const std::vector<double> values = reduced_spectrum(batch.matrices[r]);
    for (std::size_t k = 0; k < values.size(); ++k) {
      rows.push_back({std::string(label_name(e.label())), e.n(), e.s(), e.sigma2, batch.master_seed, r,
                      static_cast<int>(k), values[k]});
    }
  }
  return rows;
}

// ---- grid measures and curves --------------------------------------------

inline std::string grid_csv(const GridMeasure& g) {
  std::string out = "cell_lo,cell_hi,mass\n";
  for (int k = 0; k < g.cells(); ++k)
    out += join_row({format_double(g.edge(k)), format_double(g.edge(k + 1)), format_double(g.masses[k])});
  return out;
}

/// Reads a grid CSV. Cells must be contiguous and of equal width.
inline GridMeasure parse_grid_csv(const std::string& text) {
  const auto rows = read_csv(text, {"cell_lo", "cell_hi", "mass"});
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "grid CSV has no cells");
  GridMeasure g;
  g.lo = parse_double(rows.front()[0]);
  g.hi = parse_double(rows.back()[1]);
  double total = 0.0;
  for (const auto& r : rows) {
    const double m = parse_double(r[2]);
    if (!(m >= 0.0)) throw Error(ErrorCode::ParseError, "negative cell mass");
    g.masses.push_back(m);
    total += m;
  }
  const double h = g.width();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double a = parse_double(rows[k][0]);
    const double b = parse_double(rows[k][1]);
    const double tol = 1e-9 * std::max({1.0, std::abs(g.lo), std::abs(g.hi)});
    if (std::abs(a - g.edge(static_cast<int>(k))) > tol || std::abs(b - a - h) > tol) {
      throw Error(ErrorCode::ParseError, "grid cells must be contiguous with equal width");
    }
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::ParseError, "grid masses must sum to 1");
  return g;
}

/// x, pdf, cdf on `points` nodes uniform in x.
inline std::string curve_csv(const DensityCurve& curve, int points) {
  std::string out = "x,pdf,cdf\n";
  for (int k = 0; k < points; ++k) {
    const double x = k + 1 == points ? curve.hi() : curve.lo() + (curve.hi() - curve.lo()) * k / (points - 1);
    out += join_row({format_double(x), format_double(curve.pdf(x)), format_double(curve.cdf(x))});
  }
  return out;
}

struct CurveRow {
  double x, pdf, cdf;
};

inline std::vector<CurveRow> parse_curve_csv(const std::string& text) {
  std::vector<CurveRow> out;
  for (const auto& f : read_csv(text, {"x", "pdf", "cdf"}))
    out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
  return out;
}

// ---- JSON ------------------------------------------------------------------

/// Finite doubles as numbers; infinities and NaN as null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

inline json matrix_json(const StructuredMatrix& m) {
  json entries = json::array();
  const int d = m.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) entries.push_back(json::array({m.entries(i, j).real(), m.entries(i, j).imag()}));
  return json{{"label", label_name(m.label())}, {"n", m.shape.n}, {"s", optional_int(m.shape.s)}, {"dim", d},
              {"entries", entries}};
}

inline StructuredMatrix matrix_from_json(const json& j) {
  try {
    const ClassLabel label = parse_label(j.at("label").get<std::string>());
    std::optional<int> s;
    if (!j.at("s").is_null()) s = j.at("s").get<int>();
    const ClassShape shape = make_shape(label, j.at("n").get<int>(), s);
    const int d = j.at("dim").get<int>();
    if (d != shape.ambient_dim()) throw Error(ErrorCode::ParseError, "dim does not match the class shape");
    const json& entries = j.at("entries");
    if (entries.size() != static_cast<std::size_t>(d) * d) throw Error(ErrorCode::ParseError, "wrong entry count");
    StructuredMatrix m{shape, ComplexMatrix(d)};
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const json& z = entries[static_cast<std::size_t>(i) * d + k];
        m.entries(i, k) = cplx(z.at(0).get<double>(), z.at(1).get<double>());
      }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("matrix JSON: ") + e.what());
  }
}

inline json convergence_json(const ConvergenceReport& r, bool timings) {
  json rows = json::array();
  for (const ConvergenceRow& row : r.rows) {
    json o{{"n", row.n}, {"s", optional_int(row.s)}, {"reps", row.reps}, {"ks_distance", row.ks}};
    if (timings) o["wall_time"] = row.wall_time;
    rows.push_back(o);
  }
  return json{{"class", r.label}, {"sigma2", r.sigma2}, {"s_fraction", r.s_fraction}, {"seed", r.seed},
              {"rows", rows}};
}

inline ConvergenceReport convergence_from_json(const json& j) {
  ConvergenceReport r;
  r.label = j.at("class").get<std::string>();
  r.sigma2 = j.at("sigma2").get<double>();
  r.s_fraction = j.at("s_fraction").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const json& o : j.at("rows")) {
    ConvergenceRow row;
    row.n = o.at("n").get<int>();
    if (!o.at("s").is_null()) row.s = o.at("s").get<int>();
    row.reps = o.at("reps").get<int>();
    row.ks = o.at("ks_distance").get<double>();
    if (o.contains("wall_time")) row.wall_time = o.at("wall_time").get<double>();
    r.rows.push_back(row);
  }
  return r;
}

inline json decay_json(const DecayReport& r) {
  json rows = json::array();
  for (const DecayRow& row : r.rows) {
    rows.push_back(json{{"n", row.n},
                        {"reps", row.reps},
                        {"hit_count", row.hit_count},
                        {"p_hat", row.p_hat},
                        {"estimate", row.estimate ? json(*row.estimate) : json(nullptr)},
                        {"censored", row.censored}});
  }
  return json{{"class", r.label}, {"sigma2", r.sigma2},  {"delta", r.delta},
              {"s_fraction", r.s_fraction}, {"seed", r.seed}, {"rows", rows}};
}

inline DecayReport decay_from_json(const json& j) {
  DecayReport r;
  r.label = j.at("class").get<std::string>();
  r.sigma2 = j.at("sigma2").get<double>();
  r.delta = j.at("delta").get<double>();
  r.s_fraction = j.at("s_fraction").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const json& o : j.at("rows")) {
    DecayRow row;
    row.n = o.at("n").get<int>();
    row.reps = o.at("reps").get<int>();
    row.hit_count = o.at("hit_count").get<int>();
    row.p_hat = o.at("p_hat").get<double>();
    if (!o.at("estimate").is_null()) row.estimate = o.at("estimate").get<double>();
    row.censored = o.at("censored").get<bool>();
    r.rows.push_back(row);
  }
  return r;
}

inline json oracle_json(const OracleReport& r) {
  return json{{"class", r.label},   {"n", r.n},       {"s", optional_int(r.s)}, {"sigma2", r.sigma2},
              {"raw", r.raw},       {"bins", r.bins}, {"lo", r.lo},             {"hi", r.hi},
              {"reps", r.reps},     {"inside", r.inside}, {"seed", r.seed},     {"discrepancy", r.discrepancy}};
}

inline OracleReport oracle_from_json(const json& j) {
  OracleReport r;
  r.label = j.at("class").get<std::string>();
  r.n = j.at("n").get<int>();
  if (!j.at("s").is_null()) r.s = j.at("s").get<int>();
  r.sigma2 = j.at("sigma2").get<double>();
  r.raw = j.at("raw").get<bool>();
  r.bins = j.at("bins").get<int>();
  r.lo = j.at("lo").get<double>();
  r.hi = j.at("hi").get<double>();
  r.reps = j.at("reps").get<int>();
  r.inside = j.at("inside").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.discrepancy = j.at("discrepancy").get<double>();
  return r;
}

inline json rate_json(const RateTerms& t, const RateFunctional& f) {
  return json{{"energy", number(t.energy)}, {"field", number(t.field)}, {"c", number(t.c)},
              {"rate", number(t.rate)},     {"kappa", f.kappa},         {"beta", f.beta},
              {"gamma", f.gamma}};
}

/// JSON text ending in a newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tenfold::io
