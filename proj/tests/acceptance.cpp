// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "degtherm/config.hpp"
#include "degtherm/convergence.hpp"
#include "degtherm/elliptic.hpp"
#include "degtherm/funcnorms.hpp"
#include "degtherm/harness.hpp"
#include "degtherm/rundir.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace degtherm;
namespace fs = std::filesystem;

namespace {

struct Line {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [fail]");
  }
};

int failures = 0;

void emit(int id, const std::string& name, const Line& l) {
  if (!l.pass) ++failures;
  std::printf("%s  %2d %-24s %s\n", l.pass ? "PASS" : "FAIL", id, name.c_str(), l.detail.str().c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

void from_report(Line& l, const VerifyReport& rep, const std::string& prefix, const std::string& key) {
  bool any = false;
  for (const auto& e : rep.entries) {
    if (e.name.rfind(prefix, 0) != 0) continue;
    any = true;
    l.require(e.pass, e.name + " " + key + "=" + num(e.value(key)) + " bound " + num(e.bound) +
                          (e.trivial ? " (trivial)" : ""));
  }
  if (!any) l.require(false, prefix + " missing");
}

NormPolicy sampled(const Grid2D& g) {
  NormPolicy p;
  p.windows = WindowPolicy::sampled(g);
  return p;
}

SpaceTimeField series_of(const Grid2D& g, double dt, Index levels,
                         const std::function<double(double, double, double)>& fn) {
  SpaceTimeField s(g, dt);
  for (Index k = 0; k < levels; ++k) {
    const double t = k * dt;
    s.push_back(ScalarField::sample(g, [&](double x, double y) { return fn(x, y, t); }, t));
  }
  return s;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(DEGTHERM_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "meta.json") continue;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || read_text_file(e.path().string()) != read_text_file(other.string())) return false;
    ++files;
  }
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file() && !fs::exists(a / fs::relative(e.path(), b))) return false;
  return files > 0;
}

void campaign_criteria() {
  const RunConfig cfg = reference_config();
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult r = full_campaign(to_campaign(cfg), [](const std::string& s) {
    std::fprintf(stderr, "  campaign: %s\n", s.c_str());
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "%s  campaign time %.1f s\n", r.report.summary_table().c_str(), secs);
  const VerifyReport& rep = r.report;

  {
    Line l;
    from_report(l, rep, "maximum_principle", "margin");
    emit(1, "maximum_principle", l);
  }
  {
    Line l;
    from_report(l, rep, "potential_bound", "max_abs_phi");
    emit(2, "potential_bound", l);
  }
  {
    Line l;
    from_report(l, rep, "energy_refinement", "ratio");
    from_report(l, rep, "energy_scaling", "factor");
    emit(3, "energy_estimate", l);
  }
  {
    Line l;
    from_report(l, rep, "uniform_bmo", "ratio");
    from_report(l, rep, "linear_bmo_growth_f0", "max_ratio");
    from_report(l, rep, "linear_bmo_growth_divf", "max_ratio");
    emit(4, "uniform_bmo", l);
  }
  {
    Line l;
    from_report(l, rep, "a2_uniform", "variation");
    emit(5, "a2_uniformity", l);
  }
  {
    Line l;
    from_report(l, rep, "holder_refinement_u_a0.25", "change");
    from_report(l, rep, "holder_refinement_phi_a0.25", "change");
    emit(6, "holder_refinement", l);
  }
  {
    Line l;
    from_report(l, rep, "eps_cauchy", "d_1");
    emit(7, "eps_cauchy", l);
  }
  {
    Line l;
    from_report(l, rep, "uniqueness_contraction", "spread");
    emit(8, "uniqueness_contraction", l);
  }
}

void solver_criterion() {
  Line l;
  {
    const Grid2D g = Grid2D::unit_square_nodes(17);
    ScalarField a(g);
    for (Index j = 0; j <= g.ny(); ++j)
      for (Index i = 0; i <= g.nx(); ++i) a(i, j) = ((i / 2 + j / 2) % 2) ? 10.0 : 1.0;
    ScalarField h = oracle::random_field(g, 11, -1.0, 1.0);
    for (Index j = 1; j < g.ny(); ++j)
      for (Index i = 1; i < g.nx(); ++i) h(i, j) = 0.0;
    CgOptions cg;
    cg.rtol = 1e-13;
    const ScalarField phi = solve(EllipticProblem(a, h), cg).phi;
    const double err = (phi.values - oracle::dense_elliptic(a, h).values).cwiseAbs().maxCoeff();
    l.require(err <= 1e-8, "dense 17x17 max err " + num(err));
  }
  {
    const Grid2D g = Grid2D::unit_square_nodes(129);
    EllipticProblem p(ScalarField(g, 1.0), ScalarField(g));
    p.s = ScalarField(g, 1.0);
    CgOptions cg;
    cg.rtol = 1e-12;
    const double c = solve(p, cg).phi(64, 64);
    const double series = oracle::poisson_center_series();
    l.require(std::abs(c - 0.07367) <= 2e-4 && std::abs(series - 0.07367) <= 2e-4,
              "center " + num(c) + " series " + num(series));
  }
  const double es = elliptic_space_order().last_ratio();
  const double ps = parabolic_space_order().last_ratio();
  const double pt = parabolic_time_order().last_ratio();
  l.require(es >= 3.5 && es <= 4.5, "elliptic space ratio " + num(es));
  l.require(ps >= 3.5 && ps <= 4.5, "parabolic space ratio " + num(ps));
  l.require(pt >= 1.8 && pt <= 2.2, "time ratio " + num(pt));
  emit(9, "solver_oracles", l);
}

void norm_criterion() {
  Line l;
  {
    const Grid2D g = Grid2D::unit_square_nodes(33);
    NormPolicy p = sampled(g);
    p.c_ext = 2.5;
    const double b = bmo_norm(ScalarField(g, 2.5), p).value;
    const double a = a2_constant(ScalarField(g, 2.5), p).value;
    l.require(b == 0.0, "BMO(const) " + num(b));
    l.require(a == 1.0, "A2(const) " + num(a));
  }
  {
    const Grid2D g = Grid2D::unit_square_nodes(33);
    double worst = INFINITY;
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const ScalarField f = oracle::random_field(g, seed);
      NormPolicy p = sampled(g);
      p.c_ext = 0.5;
      worst = std::min(worst, bmo_norm(f, p).value / oracle::bmo_exhaustive_ext(f, 0.5, 0.5));
    }
    l.require(worst >= 0.90, "sampled/exhaustive min " + num(worst));
  }
  {
    const Grid2D g = Grid2D::unit_square_nodes(65);
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 1.0 : 0.0; });
    const double b = bmo_norm(f, sampled(g)).value;
    l.require(std::abs(b - 0.5) <= 0.05, "half-plane " + num(b));
  }
  {
    const Grid2D g = Grid2D::unit_square_nodes(17);
    double worst = 0.0;
    const std::vector<std::function<double(double, double, double)>> fields{
        [](double x, double, double) { return x; },
        [](double x, double y, double t) { return std::sin(3.0 * x) * std::cos(2.0 * y) * std::exp(-t) + t; }};
    for (const auto& fn : fields)
      for (double alpha : {0.25, 0.5}) {
        const SpaceTimeField f = series_of(g, 0.01, 5, fn);
        NormPolicy p = sampled(g);
        p.alpha = alpha;
        const double ex = oracle::holder_naive(f, alpha);
        worst = std::max(worst, std::abs(holder_seminorm(f, p).value / ex - 1.0));
      }
    l.require(worst <= 0.05, "Holder sampled vs exhaustive max rel " + num(worst));
  }
  emit(10, "norm_oracles", l);
}

void determinism_criterion() {
  Line l;
  const fs::path root = fs::current_path() / "acceptance_runs";
  fs::remove_all(root);
  const fs::path a = root / "threads1", b = root / "threads3", c = root / "threads1_repeat";
  l.require(cli("--threads 1 run -o " + a.string()) == 0, "run threads 1");
  l.require(cli("--threads 3 run -o " + b.string()) == 0, "run threads 3");
  l.require(cli("--threads 1 run -o " + c.string()) == 0, "repeat");
  std::size_t n = 0;
  if (l.pass) {
    const bool threads = same_tree(a, b, n);
    l.require(threads, "threads 1 vs 3 identical over " + std::to_string(n) + " files");
    const bool repeat = same_tree(a, c, n);
    l.require(repeat, "repeat identical over " + std::to_string(n) + " files");
  }
  emit(11, "determinism", l);
}

}  // namespace

int main() {
  try {
    campaign_criteria();
    solver_criterion();
    norm_criterion();
    determinism_criterion();
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
