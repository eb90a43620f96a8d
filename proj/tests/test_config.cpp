#include "degtherm/config.hpp"

#include <doctest.h>

using namespace degtherm;

namespace {

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("config unexpectedly parsed");
  return ConfigError("", 0, 0);
}

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == reference_config());
  CHECK(c.nx == 64);
  CHECK(c.dt == 1e-3);
  CHECK(c.T == doctest::Approx(0.2));
  CHECK(c.eps == 1e-2);
  const RunConfig d = parse_config("[domain]\nnx = 32  # coarse\n; comment line\n");
  CHECK(d.nx == 32);
  CHECK(d.ny == 64);
}

TEST_CASE("vanishing boundary temperature is rejected citing min g > 0") {
  const ConfigError e = config_error("[data]\nu0 = x + 1\ng = x + 1 - 10*t\n");
  CHECK(std::string(e.what()).find("min g > 0") != std::string::npos);
  CHECK(e.line == 3);
}

TEST_CASE("other hypothesis violations name the key") {
  CHECK(config_error("[data]\ng = 2\n").line == 2);
  CHECK(std::string(config_error("[data]\ng = 2\n").what()).find("compatibility") != std::string::npos);
  const ConfigError e = config_error("[regularization]\neps = 0.9\n");
  CHECK(e.line == 2);
  CHECK(std::string(e.what()).find("eps") != std::string::npos);
  CHECK(config_error("[time]\nT = 0.2\ndt = 0.03\n").line == 3);
}

TEST_CASE("unknown identifier in an expression is located") {
  const ConfigError e = config_error("[data]\nh = sin(\xCF\x80*x)\n");
  CHECK(e.line == 2);
  CHECK(e.column == 9);
  CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
}

TEST_CASE("unknown keys, sections and duplicates") {
  const ConfigError k = config_error("[domain]\n  nxx = 3\n");
  CHECK(k.line == 2);
  CHECK(k.column == 3);
  CHECK(std::string(k.what()).find("unknown key 'nxx'") != std::string::npos);
  CHECK(config_error("[domian]\n").line == 1);
  CHECK(config_error("[domain]\nnx = 8\nnx = 16\n").line == 3);
  CHECK(config_error("[domain]\nnx = \n").line == 2);
  CHECK(config_error("[domain]\nnx = 8.5\n").line == 2);
  CHECK(config_error("[material]\nresistivity = powerlaw(a=1, c=2)\n").line == 2);
  CHECK(config_error("[material]\nresistivity = copper()\n").line == 2);
  CHECK(config_error("junk line\n").line == 1);
}

TEST_CASE("emit and parse round trip") {
  const RunConfig ref = reference_config();
  CHECK(parse_config(emit_config(ref)) == ref);

  RunConfig c = ref;
  c.seed = 42;
  c.lx = 2.0;
  c.nx = 40;
  c.ny = 24;
  c.x0 = -0.3;
  c.T = 0.3;
  c.dt = 2.5e-3;
  c.materials = Materials{ResistivityModel(Semiconductor{0.7, 0.3}),
                          ConductivityModel(SmoothTable{{1.0, 2.0, 5.0}, {1.0, 1.1, 1.2}})};
  c.u0 = Expression::parse("1 + 0.1*x*(2 - x)");
  c.g = Expression::parse("1 + 0.1*x*(2 - x) + t");
  c.h = Expression::parse("sin(pi*y)");
  c.eps = 3e-3;
  c.schedule = EpsSchedule{0.2, 0.3, 6};
  c.tol.cg.rtol = 1e-12;
  c.threads = 3;
  c.norms.radii = WindowPolicy::Radii::Linear;
  c.norms.stride = 2;
  c.norms.alphas = {0.3};
  c.verify.thresholds.bmo_growth = 1.5;
  c.verify.refinement = {16, 32};
  c.verify.linear = false;
  c.verify.experiment.time_pattern = LinearExperimentConfig::TimePattern::Redraw;
  c.verify.experiment.seeds = {7, 8};
  const std::string text = emit_config(c);
  const RunConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(emit_config(back) == text);

  RunConfig bg = ref;
  bg.materials = Materials{ResistivityModel(BlochGruneisen{0.1, 2.0, 50.0, 5.0}),
                           ConductivityModel(WiedemannFranz{2.44e-8})};
  CHECK(parse_config(emit_config(bg), false) == bg);
}

TEST_CASE("conversion to the problem spec") {
  RunConfig c = reference_config();
  c.nx = 32;
  c.ny = 16;
  const ProblemSpec s = to_problem_spec(c);
  CHECK(s.grid.nx() == 32);
  CHECK(s.grid.ny() == 16);
  CHECK(s.grid.dy() == doctest::Approx(1.0 / 16));
  CHECK(s.h(0.25, 0.0, 0.0) == 1.0);
  CHECK(s.eps == c.eps);
  const NormPolicy p = to_norm_policy(c, s.grid, 1.0);
  CHECK(p.windows.stride == 1);
  const CampaignConfig camp = to_campaign(c);
  CHECK(camp.refinement == c.verify.refinement);
  CHECK(camp.deltas == c.verify.deltas);
}

TEST_CASE("shipped reference config matches the built-in one") {
  CHECK(read_config_file(DEGTHERM_SOURCE_DIR "/configs/reference.ini") == reference_config());
}
