#pragma once

#include "degtherm/expression.hpp"
#include "degtherm/harness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace degtherm {

/// Config failure at a 1-based line and column (0 when not tied to a location).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line, std::size_t column)
      : Error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what
                   : what),
        line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

struct NormSettings {
  Index stride = 0;  // 0: max(1, nx / 32)
  double r_min = 0.0;
  double r_max = 0.0;
  WindowPolicy::Radii radii = WindowPolicy::Radii::Dyadic;
  Index time_stride = 1;
  Index time_subsample = 4;
  Index random_pairs = 20000;
  double c_ext = 0.0;  // 0: the data minimum c
  std::vector<double> alphas{0.1, 0.25};

  bool operator==(const NormSettings&) const = default;
};

struct VerifySettings {
  Thresholds thresholds;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  std::vector<Index> refinement{32, 64, 128};
  int horizon_factor = 4;
  bool linear = true;
  LinearExperimentConfig experiment;

  bool operator==(const VerifySettings&) const = default;
};

/// Sections [domain] [time] [material] [data] [regularization] [solver] [norms]
/// [verify] plus the top-level seed. Every field has a default.
struct RunConfig {
  std::uint64_t seed = 1;

  double lx = 1.0, ly = 1.0;
  Index nx = 64, ny = 64;
  double x0 = 0.0, y0 = 0.0;

  double T = 0.2;
  double dt = 1e-3;
  Index save_every = 20;

  Materials materials{ResistivityModel(PowerLaw{1.0, 1.0, 2.0}),
                      ConductivityModel(ConstantKappa{1.0})};

  Expression u0 = Expression::parse("1");
  std::string u0_file;  // snapshot file replacing u0 when set
  Expression g = Expression::parse("1");
  Expression h = Expression::parse("4*x");

  double eps = 1e-2;
  EpsSchedule schedule;

  Tolerances tol;
  int threads = 0;  // 0: DEGTHERM_THREADS or 1

  NormSettings norms;
  VerifySettings verify;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and, when validate is set, checks the problem hypotheses. Errors name
/// the offending line and column.
RunConfig parse_config(const std::string& text, bool validate = true);
RunConfig read_config_file(const std::string& path, bool validate = true);

/// Full document with every key; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// The desk-scale reference configuration.
RunConfig reference_config();

Grid2D make_grid(const RunConfig& c);
ProblemSpec to_problem_spec(const RunConfig& c);
NormPolicy to_norm_policy(const RunConfig& c, const Grid2D& g, double c_data);
CampaignConfig to_campaign(const RunConfig& c);

/// "powerlaw(a=1, b=1, p=2)" and the like; inverse of parse_resistivity.
std::string emit_resistivity(const ResistivityModel& m);
std::string emit_conductivity(const ConductivityModel& m);

}  // namespace degtherm
