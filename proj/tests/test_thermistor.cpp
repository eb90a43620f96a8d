#include "degtherm/thermistor.hpp"

#include <doctest.h>

#include <cmath>

using namespace degtherm;

namespace {

ProblemSpec base_spec(Index n = 32, double T = 0.1, double dt = 2e-3) {
  ProblemSpec s;
  s.grid = Grid2D::rectangle(1.0, 1.0, n, n);
  s.T = T;
  s.dt = dt;
  s.u0 = [](double, double) { return 1.0; };
  s.g = [](double, double, double) { return 1.0; };
  s.h = [](double x, double, double) { return x; };
  s.materials = Materials{ResistivityModel(PowerLaw{1.0, 1.0, 2.0}), ConductivityModel(ConstantKappa{1.0})};
  s.eps = 1e-2;
  return s;
}

}  // namespace

TEST_CASE("constant potential means pure heat flow") {
  ProblemSpec s = base_spec(16, 0.05);
  s.u0 = [](double, double) { return 2.0; };
  s.g = [](double, double, double) { return 2.0; };
  s.h = [](double, double, double) { return 3.0; };
  const RunResult r = run(s);
  for (const auto& lvl : r.u.levels) CHECK((lvl.values.array() == 2.0).all());
  for (const auto& lvl : r.phi.levels) CHECK((lvl.values.array() - 3.0).abs().maxCoeff() < 1e-9);
  for (const auto& d : r.diagnostics) CHECK(d.energy < 1e-20);
}

TEST_CASE("Joule heating run: invariants and self-convergence in dt") {
  const ProblemSpec s = base_spec();
  const RunResult r = run(s);
  CHECK(r.u.num_levels() == 51);
  CHECK(r.diagnostics.size() == 51);
  for (std::size_t k = 1; k < r.diagnostics.size(); ++k) {
    CHECK(r.diagnostics[k].min_u >= r.diagnostics[k - 1].min_u - 1e-12);
    CHECK(r.diagnostics[k].max_abs_phi <= 1.0 + 1e-8);
    CHECK(r.diagnostics[k].max_u < 10.0);
  }
  CHECK(r.u.levels.back().values.maxCoeff() > 1.01);

  ProblemSpec half = s;
  half.dt = s.dt / 2;
  const RunResult rh = run(half);
  double diff = 0.0, scale = 0.0;
  for (Index k = 0; k < r.u.num_levels(); ++k) {
    diff = std::max(diff, (r.u.levels[k].values - rh.u.levels[2 * k].values).cwiseAbs().maxCoeff());
    scale = std::max(scale, rh.u.levels[2 * k].values.cwiseAbs().maxCoeff());
  }
  CHECK(diff <= 0.01 * scale);
}

TEST_CASE("spec validation") {
  ProblemSpec s = base_spec(16);
  SUBCASE("incompatible boundary data") {
    s.g = [](double, double, double) { return 2.0; };
    CHECK_THROWS_WITH_AS(validate_spec(s), doctest::Contains("compatibility"), DomainError);
  }
  SUBCASE("nonpositive boundary temperature") {
    s.u0 = [](double x, double) { return x; };
    s.g = [](double x, double, double) { return x; };
    CHECK_THROWS_AS(validate_spec(s), DomainError);
  }
  SUBCASE("min g > 0") {
    s.u0 = [](double, double y) { return 1.0 + y; };
    s.g = [](double, double y, double t) { return 1.0 + y - 10.0 * t * (1.0 - y); };
    CHECK_THROWS_WITH_AS(validate_spec(s), doctest::Contains("min g > 0"), DomainError);
  }
  SUBCASE("regularization below sigma0") {
    s.eps = 0.6;
    CHECK_THROWS_WITH_AS(validate_spec(s), doctest::Contains("eps"), DomainError);
  }
  SUBCASE("horizon multiple of dt") {
    s.dt = 0.03;
    CHECK_THROWS_AS(validate_spec(s), DomainError);
  }
  SUBCASE("valid spec summary") {
    const SpecSummary sum = validate_spec(s);
    CHECK(sum.c == 1.0);
    CHECK(sum.max_abs_h == 1.0);
    CHECK(sum.sigma0 == doctest::Approx(0.5));
  }
}

TEST_CASE("eps differences of a nondegenerate material are linear in eps") {
  ProblemSpec s = base_spec(16, 0.05);
  s.materials.resistivity = ResistivityModel(PowerLaw{1.0, 1e-9, 2.0});
  s.h = [](double x, double, double) { return 2.0 * x; };
  EpsSchedule sch{1e-1, 1e-1, 4};
  const Continuation c = continue_eps(s, sch);
  REQUIRE(c.report.d_u.size() == 3);
  CHECK(c.report.complete);
  for (std::size_t k = 0; k + 1 < c.report.d_u.size(); ++k) {
    const double ratio = c.report.d_u[k] / c.report.d_u[k + 1];
    CHECK(ratio > 5.0);
    CHECK(ratio < 20.0);
  }
}

TEST_CASE("single-entry schedule has no differences") {
  const Continuation c = continue_eps(base_spec(16, 0.02), EpsSchedule{1e-1, 1e-1, 1});
  CHECK(c.runs.size() == 1);
  CHECK(c.report.d_u.empty());
  CHECK(c.report.d_phi.empty());
}

TEST_CASE("eps Cauchy differences are nonincreasing for a degenerate-capable law") {
  ProblemSpec s = base_spec(16, 0.05, 2.5e-3);
  s.h = [](double x, double, double) { return 4.0 * x; };
  const Continuation c = continue_eps(s, EpsSchedule{1e-1, 1e-1, 5});
  REQUIRE(c.report.d_u.size() == 4);
  for (std::size_t k = 2; k < c.report.d_u.size(); ++k) CHECK(c.report.d_u[k] <= c.report.d_u[k - 1]);
}

TEST_CASE("uniqueness probes") {
  const ProblemSpec s = base_spec(16, 0.05, 2.5e-3);
  const RunResult base = run(s);
  const ContractionReport zero = uniqueness_probe(s, 0.0, &base);
  for (double r : zero.r) CHECK(r == 0.0);
  std::vector<double> ratios;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const ContractionReport p = uniqueness_probe(s, d, &base);
    ratios.push_back(p.sup_ratio);
    CHECK(p.r.back() <= 2.0 * p.r.front());
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 2.0);
}

TEST_CASE("runs are independent of the worker count") {
  const ProblemSpec s = base_spec(16, 0.02);
  set_thread_count(1);
  const RunResult a = run(s);
  set_thread_count(3);
  const RunResult b = run(s);
  set_thread_count(0);
  for (Index k = 0; k < a.u.num_levels(); ++k) {
    CHECK(a.u.levels[k] == b.u.levels[k]);
    CHECK(a.phi.levels[k] == b.phi.levels[k]);
  }
}
