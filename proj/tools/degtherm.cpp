// degtherm: command-line driver for runs, eps continuation, norms and verification.

#include "degtherm/config.hpp"
#include "degtherm/convergence.hpp"
#include "degtherm/rundir.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

using namespace degtherm;
namespace fs = std::filesystem;

namespace {

enum Exit { Ok = 0, Usage = 1, Solver = 2, Verification = 3 };

RunConfig load(const std::string& path) {
  return path.empty() ? reference_config() : read_config_file(path);
}

void apply_threads(const RunConfig& c, int cli_threads) {
  if (cli_threads > 0) set_thread_count(cli_threads);
  else if (c.threads > 0) set_thread_count(c.threads);
}

nlohmann::ordered_json report_json(const NormReport& r) {
  nlohmann::ordered_json j;
  j["norm"] = r.norm;
  j["value"] = r.value;
  j["family_size"] = r.family_size;
  nlohmann::ordered_json w = {{"ci", r.ci}, {"cj", r.cj}, {"radius", r.radius}};
  if (r.ck >= 0) {
    w["ck"] = r.ck;
    w["t_lo"] = r.t_lo;
    w["t_hi"] = r.t_hi;
  }
  if (r.ck2 >= 0) w["second"] = {{"ci", r.ci2}, {"cj", r.cj2}, {"ck", r.ck2}};
  j["argmax"] = w;
  const WindowPolicy& p = r.policy.windows;
  j["policy"] = {{"stride", p.stride},
                 {"r_min", p.r_min},
                 {"r_max", p.r_max},
                 {"radii", p.radii == WindowPolicy::Radii::Dyadic ? "dyadic" : "linear"},
                 {"time_stride", p.time_stride},
                 {"c_ext", r.policy.c_ext},
                 {"p", r.policy.p},
                 {"theta", r.policy.theta},
                 {"alpha", r.policy.alpha},
                 {"seed", r.policy.seed},
                 {"random_pairs", r.policy.random_pairs}};
  if (!r.metadata.empty()) j["metadata"] = r.metadata;
  return j;
}

struct NormArgs {
  std::string input, norm = "bmo", config;
  double c_ext = -1.0, p = 1.0, theta = -1.0, alpha = -1.0, r_max = 0.0;
  Index stride = 0;
  std::string radii;
  std::string out;
};

int cmd_norms(const NormArgs& a) {
  RunConfig cfg = a.config.empty() ? reference_config() : read_config_file(a.config, false);
  const bool is_dir = fs::is_directory(a.input);
  SpaceTimeField series(Grid2D(3, 3, 1.0, 1.0), 1.0);
  ScalarField field(Grid2D(3, 3, 1.0, 1.0));
  if (is_dir) {
    series = read_saved_levels(a.input, "u");
    field = read_snapshot_file(snapshot_files(a.input, "u").back());
  } else {
    field = read_snapshot_file(a.input);
    series.grid = field.grid;
    series.levels = {field};
  }
  const Grid2D& g = field.grid;
  NormPolicy p = to_norm_policy(cfg, g, 0.0);
  if (a.stride > 0) p.windows.stride = a.stride;
  if (a.r_max > 0.0) p.windows.r_max = a.r_max;
  if (a.radii == "linear") p.windows.radii = WindowPolicy::Radii::Linear;
  double trace_min = field(0, 0);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i)
      if (i == 0 || j == 0 || i == g.nx() || j == g.ny()) trace_min = std::min(trace_min, field(i, j));
  p.c_ext = a.c_ext >= 0.0 ? a.c_ext : cfg.norms.c_ext > 0.0 ? cfg.norms.c_ext : trace_min;
  p.p = a.p;
  if (a.alpha > 0.0) p.alpha = a.alpha;

  NormReport r;
  if (a.norm == "bmo") {
    r = bmo_norm(field, p);
  } else if (a.norm == "bmo_bar") {
    r = bmo_bar_norm(field, &field, p);
  } else if (a.norm == "morrey") {
    p.theta = a.theta >= 0.0 ? a.theta : 1.0;
    r = morrey_norm(field, p);
  } else if (a.norm == "campanato") {
    p.theta = a.theta >= 0.0 ? a.theta : 1.0;
    r = campanato_norm(field, p);
  } else if (a.norm == "a2") {
    r = a2_constant(field, p);
  } else if (a.norm == "holder") {
    r = holder_seminorm(series, p);
  } else if (a.norm == "parabolic_morrey") {
    p.theta = a.theta >= 0.0 ? a.theta : 0.5;
    r = parabolic_morrey_norm(series, p);
  } else {
    throw ConfigError("unknown norm '" + a.norm + "'", 0, 0);
  }
  const std::string text = report_json(r).dump(2) + "\n";
  std::cout << text;
  if (!a.out.empty()) write_text_file(a.out, text);
  return Ok;
}

int cmd_run(const std::string& config, const std::string& out, int threads) {
  const RunConfig cfg = load(config);
  apply_threads(cfg, threads);
  const RunResult r = run(to_problem_spec(cfg));
  write_run_directory(out, cfg, r);
  write_meta(out, "run");
  std::cout << "wrote " << out << ": " << r.u.num_levels() << " levels, min u "
            << format_double(r.diagnostics.empty() ? 0.0 : r.u.levels.back().values.minCoeff())
            << "\n";
  return Ok;
}

int cmd_continue(const std::string& config, const std::string& out, int threads) {
  const RunConfig cfg = load(config);
  apply_threads(cfg, threads);
  const Continuation cont = continue_eps(to_problem_spec(cfg), cfg.schedule);
  for (std::size_t k = 0; k < cont.runs.size(); ++k) {
    RunConfig ck = cfg;
    ck.eps = cont.report.eps[k];
    write_run_directory((fs::path(out) / ("eps_" + std::to_string(k))).string(), ck, cont.runs[k]);
  }
  std::string csv = "k,eps_k,eps_k1,d_u,d_phi\n";
  for (std::size_t k = 0; k < cont.report.d_u.size(); ++k)
    csv += std::to_string(k) + "," + format_double(cont.report.eps[k]) + "," +
           format_double(cont.report.eps[k + 1]) + "," + format_double(cont.report.d_u[k]) + "," +
           format_double(cont.report.d_phi[k]) + "\n";
  write_text_file((fs::path(out) / "plotdata" / "cauchy.csv").string(), csv);
  VerifyReport rep;
  rep.append(check_cauchy(cont.report));
  write_text_file((fs::path(out) / "config.ini").string(), emit_config(cfg));
  write_text_file((fs::path(out) / "report.json").string(), to_json(rep) + "\n");
  write_meta(out, "continue-eps");
  std::cout << csv << rep.summary_table();
  return Ok;
}

int cmd_verify(const std::string& config, const std::string& out, int threads, bool no_linear,
               bool mutate) {
  const RunConfig cfg = load(config);
  apply_threads(cfg, threads);
  CampaignConfig camp = to_campaign(cfg);
  if (no_linear) camp.run_linear = false;
  if (mutate) camp.mutation = Mutation::ArithmeticAveraging;
  const CampaignResult res =
      full_campaign(camp, [](const std::string& s) { std::cerr << "verify: " << s << "\n"; });
  const std::string table = res.report.summary_table();
  std::cout << table;
  if (!out.empty()) {
    write_text_file((fs::path(out) / "config.ini").string(), emit_config(cfg));
    write_text_file((fs::path(out) / "report.json").string(), to_json(res.report) + "\n");
    write_text_file((fs::path(out) / "summary.txt").string(), table);
    write_meta(out, "verify");
  }
  return res.report.passed() ? Ok : Verification;
}

int cmd_linear(const std::string& config, const std::string& out, int threads) {
  const RunConfig cfg = load(config);
  apply_threads(cfg, threads);
  LinearExperimentConfig lc = cfg.verify.experiment;
  lc.cg = cfg.tol.cg;
  NormPolicy p = to_norm_policy(cfg, Grid2D::rectangle(1.0, 1.0, lc.n, lc.n), 0.0);
  if (cfg.norms.stride == 0) p.windows.stride = std::max<Index>(1, lc.n / 32);
  std::vector<LinearRun> runs;
  const VerifyReport rep = linear_bmo_experiment(lc, p, cfg.verify.thresholds, &runs);
  std::string csv = "source,seed,beta_T,beta_4T,morrey_T,morrey_4T,rho_T,rho_4T\n";
  for (const auto& r : runs)
    csv += std::string(r.source == LinearSource::Bump ? "f0" : "divf") + "," +
           std::to_string(r.seed) + "," + format_double(r.beta_T) + "," +
           format_double(r.beta_long) + "," + format_double(r.morrey_T) + "," +
           format_double(r.morrey_long) + "," + format_double(r.rho_T) + "," +
           format_double(r.rho_long) + "\n";
  std::cout << csv << rep.summary_table();
  if (!out.empty()) {
    write_text_file((fs::path(out) / "config.ini").string(), emit_config(cfg));
    write_text_file((fs::path(out) / "plotdata" / "linear.csv").string(), csv);
    write_text_file((fs::path(out) / "report.json").string(), to_json(rep) + "\n");
    write_meta(out, "linear-exp");
  }
  return rep.passed() ? Ok : Verification;
}

int cmd_convergence(const std::string& out) {
  const OrderStudy studies[] = {elliptic_space_order(), parabolic_space_order(),
                                parabolic_time_order()};
  std::string text;
  for (const auto& s : studies) text += format_study(s) + "\n";
  std::cout << text;
  if (!out.empty()) {
    write_text_file((fs::path(out) / "convergence.txt").string(), text);
    for (const auto& s : studies) {
      std::string csv = "step,error,ratio\n";
      for (const auto& r : s.rows)
        csv += format_double(r.step) + "," + format_double(r.error) + "," + format_double(r.ratio) + "\n";
      std::string name = s.name.substr(0, s.name.find(" ("));
      std::replace(name.begin(), name.end(), ' ', '_');
      write_text_file((fs::path(out) / "plotdata" / (name + ".csv")).string(), csv);
    }
    write_meta(out, "convergence");
  }
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degtherm: regularized degenerate thermistor solver and verification harness"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for norm kernels (overrides config and DEGTHERM_THREADS)")
      ->check(CLI::NonNegativeNumber);

  std::string config, out;
  auto* run_cmd = app.add_subcommand("run", "single regularized run");
  run_cmd->add_option("-c,--config", config, "config file (default: reference config)");
  run_cmd->add_option("-o,--out", out, "run directory")->required();

  auto* cont_cmd = app.add_subcommand("continue-eps", "runs over the eps schedule");
  cont_cmd->add_option("-c,--config", config, "config file");
  cont_cmd->add_option("-o,--out", out, "output directory")->required();

  NormArgs na;
  auto* norms_cmd = app.add_subcommand("norms", "function-space norms of a snapshot or run directory");
  norms_cmd->add_option("-i,--input", na.input, "snapshot file or run directory")->required();
  norms_cmd->add_option("-n,--norm", na.norm, "bmo | bmo_bar | morrey | campanato | a2 | holder | parabolic_morrey");
  norms_cmd->add_option("-c,--config", na.config, "config whose [norms] block sets the policy");
  norms_cmd->add_option("--c-ext", na.c_ext, "extension constant (default: config c_ext, else the minimum of the boundary trace)");
  norms_cmd->add_option("--p", na.p, "exponent p");
  norms_cmd->add_option("--theta", na.theta, "exponent theta");
  norms_cmd->add_option("--alpha", na.alpha, "Holder exponent");
  norms_cmd->add_option("--stride", na.stride, "window center stride");
  norms_cmd->add_option("--r-max", na.r_max, "largest window radius");
  norms_cmd->add_option("--radii", na.radii, "dyadic | linear");
  norms_cmd->add_option("-o,--out", na.out, "also write the JSON report here");

  bool no_linear = false, mutate = false;
  auto* verify_cmd = app.add_subcommand("verify", "full verification campaign");
  verify_cmd->add_option("-c,--config", config, "campaign config");
  verify_cmd->add_option("-o,--out", out, "output directory");
  verify_cmd->add_flag("--no-linear", no_linear, "skip the linear checkerboard experiments");
  verify_cmd->add_flag("--mutate-arithmetic", mutate)->group("");

  auto* lin_cmd = app.add_subcommand("linear-exp", "linear checkerboard BMO experiments");
  lin_cmd->add_option("-c,--config", config, "config file");
  lin_cmd->add_option("-o,--out", out, "output directory");

  auto* conv_cmd = app.add_subcommand("convergence", "manufactured-solution order studies");
  conv_cmd->add_option("-o,--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : Usage;
  }

  if (threads > 0) set_thread_count(threads);
  try {
    if (*run_cmd) return cmd_run(config, out, threads);
    if (*cont_cmd) return cmd_continue(config, out, threads);
    if (*norms_cmd) return cmd_norms(na);
    if (*verify_cmd) return cmd_verify(config, out, threads, no_linear, mutate);
    if (*lin_cmd) return cmd_linear(config, out, threads);
    if (*conv_cmd) return cmd_convergence(out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return Usage;
  } catch (const ContinuationError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return Solver;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return Solver;
  } catch (const PicardError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return Solver;
  } catch (const CouplingError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return Solver;
  } catch (const InvariantViolation& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return Solver;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}
