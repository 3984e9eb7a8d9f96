#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tenfold/error.hpp"

namespace tenfold {

/// The twelve catalog labels. B/D is split by matrix parity and DIII by the
/// parity of n, since their zero-eigenvalue exponents differ.
enum class ClassLabel { A, AI, AII, AIII, B, D, BDI, DIII_even, DIII_odd, C, CI, CII };

enum class Family { WignerDyson, Chiral, BdG };

inline constexpr std::array<ClassLabel, 12> kAllLabels = {
    ClassLabel::A,   ClassLabel::AI,        ClassLabel::AII,      ClassLabel::AIII,
    ClassLabel::B,   ClassLabel::D,         ClassLabel::BDI,      ClassLabel::DIII_even,
    ClassLabel::DIII_odd, ClassLabel::C,    ClassLabel::CI,       ClassLabel::CII};

inline std::string_view label_name(ClassLabel label) {
  switch (label) {
    case ClassLabel::A: return "A";
    case ClassLabel::AI: return "AI";
    case ClassLabel::AII: return "AII";
    case ClassLabel::AIII: return "AIII";
    case ClassLabel::B: return "B";
    case ClassLabel::D: return "D";
    case ClassLabel::BDI: return "BDI";
    case ClassLabel::DIII_even: return "DIII_even";
    case ClassLabel::DIII_odd: return "DIII_odd";
    case ClassLabel::C: return "C";
    case ClassLabel::CI: return "CI";
    case ClassLabel::CII: return "CII";
  }
  return "?";
}

inline std::string_view family_name(Family family) {
  switch (family) {
    case Family::WignerDyson: return "WignerDyson";
    case Family::Chiral: return "Chiral";
    case Family::BdG: return "BdG";
  }
  return "?";
}

namespace detail {
inline std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}
}  // namespace detail

/// Case-insensitive inverse of label_name.
inline ClassLabel parse_label(std::string_view text) {
  const std::string wanted = detail::upper(text);
  for (ClassLabel label : kAllLabels) {
    if (detail::upper(label_name(label)) == wanted) return label;
  }
  throw Error(ErrorCode::UnknownLabel, "unknown symmetry class '" + std::string(text) + "'");
}

/// Like parse_label, but also accepts the merged names "B/D" and "DIII".
/// "DIII" picks the parity of n. "B/D" reads n as the matrix size: odd sizes
/// 2k+1 map to (B, k), even sizes 2k to (D, k). Returns the label and the
/// (possibly rewritten) n.
inline std::pair<ClassLabel, int> resolve_label(std::string_view text, int n) {
  const std::string wanted = detail::upper(text);
  if (wanted == "DIII") {
    return {n % 2 == 0 ? ClassLabel::DIII_even : ClassLabel::DIII_odd, n};
  }
  if (wanted == "B/D" || wanted == "BD") {
    if (n < 2) throw Error(ErrorCode::InvalidN, "B/D needs a matrix size of at least 2");
    return n % 2 == 1 ? std::pair{ClassLabel::B, (n - 1) / 2} : std::pair{ClassLabel::D, n / 2};
  }
  return {parse_label(text), n};
}

/// Catalog record for one symmetry class. The n- and s-dependent entries of
/// the joint-density table are exposed as member functions; t = n - s.
struct ClassSpec {
  ClassLabel label;
  Family family;
  int beta;
  int gamma;
  int phi;
  int psi;

  bool chiral() const { return family == Family::Chiral; }

  /// Side length of the ambient complex matrix.
  int ambient_dim(int n) const {
    switch (label) {
      case ClassLabel::A:
      case ClassLabel::AI:
      case ClassLabel::AIII:
      case ClassLabel::BDI: return n;
      case ClassLabel::B: return 2 * n + 1;
      default: return 2 * n;
    }
  }

  /// Number of eigenvalues entering the joint density.
  int reduced_count(int n, std::optional<int> s = std::nullopt) const {
    if (chiral()) {
      const int sv = s.value_or(0);
      return std::min(sv, n - sv);
    }
    if (label == ClassLabel::DIII_even || label == ClassLabel::DIII_odd) return n / 2;
    return n;
  }

  /// Exponent of the prod x_i^alpha factor; empty for Wigner-Dyson classes.
  std::optional<int> alpha(int n, std::optional<int> s = std::nullopt) const {
    const int gap = chiral() ? std::abs(2 * s.value_or(0) - n) : 0;
    switch (label) {
      case ClassLabel::BDI: return gap;
      case ClassLabel::AIII: return 2 * gap + 1;
      case ClassLabel::CII: return 4 * gap + 3;
      case ClassLabel::B: return 2;
      case ClassLabel::D: return 0;
      case ClassLabel::C: return 2;
      case ClassLabel::CI: return 1;
      case ClassLabel::DIII_even: return 1;
      case ClassLabel::DIII_odd: return 5;
      default: return std::nullopt;
    }
  }

  /// Human-readable forms of d, p, alpha used by the `classes` table.
  std::string ambient_formula() const {
    switch (label) {
      case ClassLabel::A:
      case ClassLabel::AI:
      case ClassLabel::AIII:
      case ClassLabel::BDI: return "n";
      case ClassLabel::B: return "2n+1";
      default: return "2n";
    }
  }
  std::string reduced_formula() const {
    if (chiral()) return "min(s,t)";
    if (label == ClassLabel::DIII_even || label == ClassLabel::DIII_odd) return "floor(n/2)";
    return "n";
  }
  std::string alpha_formula() const {
    switch (label) {
      case ClassLabel::BDI: return "|s-t|";
      case ClassLabel::AIII: return "2|s-t|+1";
      case ClassLabel::CII: return "4|s-t|+3";
      default: {
        const auto a = alpha(2);
        return a ? std::to_string(*a) : "-";
      }
    }
  }
};

/// (phi, psi): Tr X^2 / phi appears in the Gaussian density and equals the
/// sum of squared reduced eigenvalues over psi. B and D share one column.
inline std::pair<int, int> gauss_constants(ClassLabel label) {
  switch (label) {
    case ClassLabel::A: return {4, 4};
    case ClassLabel::AI: return {4, 4};
    case ClassLabel::AII: return {8, 4};
    case ClassLabel::AIII: return {4, 2};
    case ClassLabel::B:
    case ClassLabel::D: return {4, 2};
    case ClassLabel::BDI: return {4, 2};
    case ClassLabel::DIII_even:
    case ClassLabel::DIII_odd: return {8, 2};
    case ClassLabel::C: return {8, 4};
    case ClassLabel::CI: return {8, 4};
    case ClassLabel::CII: return {8, 2};
  }
  return {0, 0};
}

inline ClassSpec class_spec(ClassLabel label) {
  Family family = Family::BdG;
  int beta = 2;
  switch (label) {
    case ClassLabel::A: family = Family::WignerDyson; beta = 2; break;
    case ClassLabel::AI: family = Family::WignerDyson; beta = 1; break;
    case ClassLabel::AII: family = Family::WignerDyson; beta = 4; break;
    case ClassLabel::BDI: family = Family::Chiral; beta = 1; break;
    case ClassLabel::AIII: family = Family::Chiral; beta = 2; break;
    case ClassLabel::CII: family = Family::Chiral; beta = 4; break;
    case ClassLabel::B:
    case ClassLabel::D:
    case ClassLabel::C: beta = 2; break;
    case ClassLabel::CI: beta = 1; break;
    case ClassLabel::DIII_even:
    case ClassLabel::DIII_odd: beta = 4; break;
  }
  const auto [phi, psi] = gauss_constants(label);
  const int gamma = family == Family::WignerDyson ? 1 : 2;
  return ClassSpec{label, family, beta, gamma, phi, psi};
}

inline std::vector<ClassSpec> class_catalog() {
  std::vector<ClassSpec> out;
  out.reserve(kAllLabels.size());
  for (ClassLabel label : kAllLabels) out.push_back(class_spec(label));
  return out;
}

/// An admissible (label, n, s) triple. Everything that builds matrices takes
/// one of these; construct it through make_shape.
struct ClassShape {
  ClassLabel label;
  int n;
  std::optional<int> s;

  ClassSpec spec() const { return class_spec(label); }
  int t() const { return n - s.value_or(0); }
  int ambient_dim() const { return spec().ambient_dim(n); }
  int reduced_count() const { return spec().reduced_count(n, s); }
  std::optional<int> alpha() const { return spec().alpha(n, s); }

  friend bool operator==(const ClassShape&, const ClassShape&) = default;
};

inline ClassShape make_shape(ClassLabel label, int n, std::optional<int> s = std::nullopt) {
  const ClassSpec spec = class_spec(label);
  if (n < 1) throw Error(ErrorCode::InvalidN, "n must be at least 1, got " + std::to_string(n));
  if (spec.chiral()) {
    if (!s) {
      throw Error(ErrorCode::MissingS,
                  "class " + std::string(label_name(label)) + " is chiral and needs s");
    }
    if (*s < 1 || *s > n - *s) {
      throw Error(ErrorCode::InvalidS, "need 1 <= s <= n - s, got s=" + std::to_string(*s) +
                                           " with n=" + std::to_string(n));
    }
  } else if (s) {
    throw Error(ErrorCode::UnexpectedS,
                "class " + std::string(label_name(label)) + " is not chiral and takes no s");
  }
  if (label == ClassLabel::DIII_even && n % 2 != 0) {
    throw Error(ErrorCode::ParityMismatch, "DIII_even needs an even n");
  }
  if (label == ClassLabel::DIII_odd && n % 2 == 0) {
    throw Error(ErrorCode::ParityMismatch, "DIII_odd needs an odd n");
  }
  if (spec.reduced_count(n, s) < 1) {
    throw Error(ErrorCode::InvalidN, "n=" + std::to_string(n) + " leaves no reduced eigenvalues for " +
                                         std::string(label_name(label)));
  }
  return ClassShape{label, n, s};
}

/// A Gaussian ensemble GE(sigma2 / n) for one shape. With raw set the 1/n
/// scaling is disabled and the effective variance is sigma2 itself.
struct EnsembleSpec {
  ClassShape shape;
  double sigma2 = 1.0;
  double kappa = 1.0;
  bool raw = false;

  ClassSpec spec() const { return shape.spec(); }
  ClassLabel label() const { return shape.label; }
  int n() const { return shape.n; }
  std::optional<int> s() const { return shape.s; }
  int ambient_dim() const { return shape.ambient_dim(); }
  int reduced_count() const { return shape.reduced_count(); }

  /// Variance unit of the free parameters.
  double sigma2_eff() const { return raw ? sigma2 : sigma2 / shape.n; }

  /// The sigma^2 that the weight functions and limit measures see, i.e. the
  /// value s2 for which this ensemble is GE(s2 / n).
  double sigma2_weight() const { return sigma2_eff() * shape.n; }
};

inline EnsembleSpec make_ensemble(ClassLabel label, int n, std::optional<int> s, double sigma2,
                                  bool raw = false) {
  ClassShape shape = make_shape(label, n, s);
  if (!(sigma2 > 0.0)) {
    throw Error(ErrorCode::NonPositiveSigma, "sigma2 must be positive, got " + std::to_string(sigma2));
  }
  const double kappa = static_cast<double>(shape.reduced_count()) / n;
  return EnsembleSpec{shape, sigma2, kappa, raw};
}

}  // namespace tenfold
