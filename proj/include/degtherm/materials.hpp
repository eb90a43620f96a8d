#pragma once

#include "degtherm/common.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace degtherm {

// Resistivity laws rho(s), s > 0 the temperature.

/// rho(s) = a + b s^p.
struct PowerLaw {
  double a = 1.0, b = 1.0, p = 2.0;
  bool operator==(const PowerLaw&) const = default;
};
/// rho(s) = sigma0 exp(q / s) s.
struct Semiconductor {
  double sigma0 = 1.0, q = 1.0;
  bool operator==(const Semiconductor&) const = default;
};
/// rho(s) = rho0 + A (s / Theta)^n J_n(Theta / s) with the Bloch-Gruneisen integral J_n.
struct BlochGruneisen {
  double rho0 = 0.0, A = 1.0, theta = 100.0, n = 5.0;
  bool operator==(const BlochGruneisen&) const = default;
};

class ResistivityModel {
 public:
  using Variant = std::variant<PowerLaw, Semiconductor, BlochGruneisen>;

  ResistivityModel() : model_(PowerLaw{}) {}
  ResistivityModel(Variant v);  // validates parameters

  double rho(double s) const;
  double sigma(double s) const { return 1.0 / rho(s); }
  /// Exponent of the two-sided power-law envelope C1 + C2 s^p <= rho <= C3 + C4 s^p.
  double growth_exponent() const;

  std::string name() const;
  std::map<std::string, double> parameters() const;
  const Variant& variant() const { return model_; }
  bool operator==(const ResistivityModel&) const = default;

 private:
  Variant model_;
};

// Thermal conductivity laws kappa(s).

struct ConstantKappa {
  double kappa0 = 1.0;
  bool operator==(const ConstantKappa&) const = default;
};
/// kappa(s) = L s sigma(s), with sigma from the paired resistivity model.
struct WiedemannFranz {
  double lorentz = 2.44e-8;
  bool operator==(const WiedemannFranz&) const = default;
};
/// Monotone cubic (Fritsch-Carlson) interpolation of positive samples, held
/// constant outside the table.
struct SmoothTable {
  std::vector<double> s;
  std::vector<double> kappa;
  bool operator==(const SmoothTable&) const = default;
};

class ConductivityModel {
 public:
  using Variant = std::variant<ConstantKappa, WiedemannFranz, SmoothTable>;

  ConductivityModel() : model_(ConstantKappa{}) {}
  ConductivityModel(Variant v);

  double kappa(double s, const ResistivityModel& resistivity) const;
  bool is_constant() const { return std::holds_alternative<ConstantKappa>(model_); }

  std::string name() const;
  std::map<std::string, double> parameters() const;
  const Variant& variant() const { return model_; }
  bool operator==(const ConductivityModel&) const = default;

 private:
  Variant model_;
  std::vector<double> slopes_;  // table tangents
};

struct Materials {
  ResistivityModel resistivity;
  ConductivityModel conductivity;

  double rho(double s) const { return resistivity.rho(s); }
  double sigma(double s) const { return resistivity.sigma(s); }
  double kappa(double s) const { return conductivity.kappa(s, resistivity); }
  bool operator==(const Materials&) const = default;
};

/// Integral over [0, x] of s^n / ((e^s - 1)(1 - e^{-s})), adaptive Simpson to
/// absolute tolerance abs_tol. The integrand is continued by its limit at 0.
double bg_integral(double x, double n, double abs_tol = 1e-10);
double bg_integrand(double s, double n);

struct ValidityReport {
  bool valid = false;
  bool h1 = false;
  bool h2 = false;
  double r = 0.0;
  double s_max = 0.0;
  double p = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double slack = 0.0;  // C3 / C1: spread of rho / (1 + s^p) over the samples
  double kappa_inf = 0.0, kappa_sup = 0.0;
  double kappa_log_slope = 0.0;  // d log kappa / d log s over the top of the range
  double sigma_sup = 0.0;
  std::optional<double> witness;  // temperature at which a hypothesis failed
  std::string reason;
};

/// Samples the models on a log grid over [r, s_max] and fits the envelope
/// constants of (H2) with exponent growth_exponent(); checks the (H1) bounds.
ValidityReport validate_hypotheses(const Materials& m, double r, double s_max,
                                   int samples = 400);

/// sup over s >= c of sigma(s), estimated on a log grid over [c, 1e4 c].
double sigma_sup(const ResistivityModel& m, double c);

}  // namespace degtherm
