#include "degtherm/rundir.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace degtherm {

namespace fs = std::filesystem;

std::vector<Index> saved_levels(Index num_levels, Index save_every) {
  if (save_every < 1) throw DomainError("save_every must be >= 1");
  std::vector<Index> out;
  for (Index k = 0; k < num_levels; k += save_every) out.push_back(k);
  if (!out.empty() && out.back() != num_levels - 1) out.push_back(num_levels - 1);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string level_name(const std::string& field, Index k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06lld.txt", field.c_str(), static_cast<long long>(k));
  return buf;
}

std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  for (double v : values) s += (s.empty() ? "" : ",") + format_double(v);
  return s + "\n";
}

}  // namespace

void write_run_directory(const std::string& dir, const RunConfig& config, const RunResult& run) {
  const fs::path root(dir);
  fs::create_directories(root / "snapshots");
  fs::create_directories(root / "plotdata");
  write_text_file((root / "config.ini").string(), emit_config(config));

  const std::vector<Index> saved = saved_levels(run.u.num_levels(), config.save_every);
  for (Index k : saved) {
    std::ostringstream u, phi;
    write_snapshot(u, run.u.levels[static_cast<std::size_t>(k)]);
    write_snapshot(phi, run.phi.levels[static_cast<std::size_t>(k)]);
    write_text_file((root / "snapshots" / level_name("u", k)).string(), u.str());
    write_text_file((root / "snapshots" / level_name("phi", k)).string(), phi.str());
  }

  std::string diag;
  std::string series = "t,min_u,max_u,max_abs_phi,energy\n";
  for (std::size_t k = 0; k < run.diagnostics.size(); ++k) {
    const StepDiagnostics& d = run.diagnostics[k];
    nlohmann::ordered_json j;
    j["step"] = k;
    j["t"] = d.t;
    j["min_u"] = d.min_u;
    j["max_u"] = d.max_u;
    j["max_abs_phi"] = d.max_abs_phi;
    j["coupling_iters"] = d.coupling_iters;
    j["picard_iters"] = d.picard_iters;
    j["cg_iters"] = d.cg_iters;
    j["energy"] = d.energy;
    diag += j.dump() + "\n";
    series += csv_row({d.t, d.min_u, d.max_u, d.max_abs_phi, d.energy});
  }
  write_text_file((root / "diagnostics.jsonl").string(), diag);
  write_text_file((root / "plotdata" / "timeseries.csv").string(), series);

  const ScalarField& u = run.u.levels.back();
  const ScalarField& phi = run.phi.levels.back();
  const Grid2D& g = u.grid;
  std::string sx = "x,u,phi\n", sy = "y,u,phi\n";
  const Index jm = g.ny() / 2, im = g.nx() / 2;
  for (Index i = 0; i <= g.nx(); ++i) sx += csv_row({g.x(i), u(i, jm), phi(i, jm)});
  for (Index j = 0; j <= g.ny(); ++j) sy += csv_row({g.y(j), u(im, j), phi(im, j)});
  write_text_file((root / "plotdata" / "slice_x_final.csv").string(), sx);
  write_text_file((root / "plotdata" / "slice_y_final.csv").string(), sy);

  const ProblemSpec spec = to_problem_spec(config);
  const CheckContext ctx = context_of(spec);
  VerifyReport checks;
  checks.append(check_maximum_principle(run, ctx, config.tol.invariant_tol));
  checks.append(check_potential_bound(run, ctx, config.tol.invariant_tol));
  const NormPolicy policy = to_norm_policy(config, g, run.summary.c);
  NormPolicy a2p = policy;
  a2p.c_ext = config.materials.sigma(run.summary.c) + run.eps;

  nlohmann::ordered_json rep;
  rep["command"] = "run";
  rep["levels"] = run.u.num_levels();
  rep["snapshots"] = saved.size();
  rep["c"] = run.summary.c;
  rep["max_abs_h"] = run.summary.max_abs_h;
  rep["sigma0"] = run.summary.sigma0;
  rep["eps"] = run.eps;
  if (run.summary.materials) {
    const ValidityReport& m = *run.summary.materials;
    rep["materials"] = {{"valid", m.valid}, {"range", {m.r, m.s_max}}, {"p", m.p},
                        {"c1", m.c1}, {"c3", m.c3}, {"slack", m.slack},
                        {"kappa_inf", m.kappa_inf}, {"kappa_sup", m.kappa_sup}};
  }
  rep["final"] = {
      {"t", u.t},
      {"bmo_bar_u", bmo_bar_norm(u, &u, policy).value},
      {"a2_sigma_eps", a2_constant(sigma_eps_field(u, config.materials, run.eps), a2p).value},
      {"holder_u", holder_seminorm(run.u, policy).value},
  };
  rep["checks"] = nlohmann::ordered_json::parse(to_json(checks))["checks"];
  rep["passed"] = checks.passed();
  write_text_file((root / "report.json").string(), rep.dump(2) + "\n");
}

void write_meta(const std::string& dir, const std::string& command) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  nlohmann::ordered_json j;
  j["command"] = command;
  j["created"] = stamp;
  j["threads"] = thread_count();
  write_text_file((fs::path(dir) / "meta.json").string(), j.dump(2) + "\n");
}

std::vector<std::string> snapshot_files(const std::string& dir, const std::string& field) {
  std::vector<std::string> out;
  const fs::path snaps = fs::path(dir) / "snapshots";
  if (!fs::is_directory(snaps)) throw Error("no snapshots directory in " + dir);
  for (const auto& e : fs::directory_iterator(snaps)) {
    const std::string name = e.path().filename().string();
    if (name.rfind(field + "_", 0) == 0 && name.size() == field.size() + 11) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error("no " + field + " snapshots in " + dir);
  return out;
}

SpaceTimeField read_saved_levels(const std::string& dir, const std::string& field) {
  const std::vector<std::string> files = snapshot_files(dir, field);
  std::vector<ScalarField> levels;
  for (const auto& f : files) levels.push_back(read_snapshot_file(f));
  if (levels.size() < 2) {
    SpaceTimeField out(levels.front().grid, 1.0);
    out.levels = levels;
    return out;
  }
  const double step = levels[1].t - levels[0].t;
  SpaceTimeField out(levels.front().grid, step);
  for (auto& l : levels) {
    const double expect = static_cast<double>(out.levels.size()) * step;
    if (std::abs(l.t - expect) > 1e-9 * std::max(1.0, expect)) break;
    out.levels.push_back(std::move(l));
  }
  return out;
}

}  // namespace degtherm
