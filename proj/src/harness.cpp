#include "degtherm/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace degtherm {

double CheckEntry::value(const std::string& key) const {
  for (const auto& m : measured)
    if (m.name == key) return m.value;
  throw DomainError("check " + name + " has no measurement " + key);
}

bool VerifyReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

void VerifyReport::append(const VerifyReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

std::string VerifyReport::summary_table() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-6s %-14s %-14s\n", "check", "result", "value", "bound");
  os << line;
  for (const auto& e : entries) {
    const double v = e.measured.empty() ? 0.0 : e.measured.front().value;
    std::snprintf(line, sizeof line, "%-34s %-6s %-14.6g %-14.6g%s\n", e.name.c_str(),
                  e.pass ? "PASS" : "FAIL", v, e.bound, e.trivial ? " (trivial)" : "");
    os << line;
  }
  std::snprintf(line, sizeof line, "%zu checks, %s\n", entries.size(),
                passed() ? "all passed" : "FAILURES");
  os << line;
  return os.str();
}

std::string to_json(const VerifyReport& report, int indent) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& x : e.measured) m[x.name] = std::isfinite(x.value) ? nlohmann::ordered_json(x.value) : nlohmann::ordered_json(format_double(x.value));
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["property"] = e.property;
    j["criterion"] = e.criterion;
    j["measured"] = m;
    j["bound"] = e.bound;
    j["pass"] = e.pass;
    j["trivial"] = e.trivial;
    if (!e.note.empty()) j["note"] = e.note;
    j["context"] = {{"nx", e.context.nx}, {"ny", e.context.ny}, {"dt", e.context.dt},
                    {"eps", e.context.eps}, {"T", e.context.T}};
    checks.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["passed"] = report.passed();
  root["checks"] = std::move(checks);
  return root.dump(indent);
}

CheckContext context_of(const ProblemSpec& spec) {
  return {spec.grid.nx(), spec.grid.ny(), spec.dt, spec.eps, spec.T};
}

RunResult prefix(const RunResult& run, double horizon) {
  RunResult out(run.u.grid, run.u.dt);
  out.u = run.u.prefix(horizon);
  out.phi = run.phi.prefix(horizon);
  out.diagnostics.assign(run.diagnostics.begin(),
                         run.diagnostics.begin() + static_cast<std::ptrdiff_t>(out.u.num_levels()));
  out.summary = run.summary;
  out.eps = run.eps;
  return out;
}

namespace {

double last_time(const SpaceTimeField& f) { return f.levels.back().t; }

CheckEntry entry(std::string name, std::string property, std::string criterion) {
  CheckEntry e;
  e.name = std::move(name);
  e.property = std::move(property);
  e.criterion = std::move(criterion);
  return e;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

// ---------------------------------------------------------------------------

CheckEntry check_maximum_principle(const RunResult& run, const CheckContext& ctx, double tol) {
  CheckEntry e = entry("maximum_principle", "temperature stays above the minimum of the data",
                       "min u >= c - tol at every node and level");
  double min_u = run.u.levels.front().values.minCoeff();
  for (const auto& l : run.u.levels) min_u = std::min(min_u, l.values.minCoeff());
  e.measured = {{"min_u", min_u}, {"c", run.summary.c}, {"margin", min_u - run.summary.c}};
  e.bound = run.summary.c - tol;
  e.pass = min_u >= e.bound;
  e.context = ctx;
  return e;
}

CheckEntry check_potential_bound(const RunResult& run, const CheckContext& ctx, double tol) {
  CheckEntry e = entry("potential_bound", "potential bounded by its boundary data",
                       "max |phi| <= max |h| + tol at every level");
  double m = 0.0;
  for (const auto& l : run.phi.levels) m = std::max(m, l.values.cwiseAbs().maxCoeff());
  e.measured = {{"max_abs_phi", m}, {"max_abs_h", run.summary.max_abs_h}};
  e.bound = run.summary.max_abs_h + tol;
  e.pass = m <= e.bound;
  e.context = ctx;
  return e;
}

// ---------------------------------------------------------------------------

SpaceTimeField joule_density(const ProblemSpec& spec, const RunResult& run) {
  SpaceTimeField q(run.u.grid, run.u.dt);
  q.levels.reserve(run.u.levels.size());
  for (Index k = 0; k < run.u.num_levels(); ++k) {
    const auto& u = run.u.levels[static_cast<std::size_t>(k)];
    const auto& phi = run.phi.levels[static_cast<std::size_t>(k)];
    ScalarField d = joule_pointwise(sigma_eps_field(u, spec.materials, run.eps), phi,
                                    FaceAveraging::Harmonic);
    d.t = u.t;
    q.levels.push_back(std::move(d));
  }
  return q;
}

NormReport energy_sup(const ProblemSpec& spec, const RunResult& run, const WindowPolicy& windows) {
  NormPolicy p;
  p.windows = windows;
  p.p = 1.0;
  p.theta = 0.5;
  NormReport r = cylinder_density_sup(joule_density(spec, run), p);
  r.norm = "energy";
  return r;
}

CheckEntry check_energy_refinement(const std::vector<EnergySample>& samples,
                                   const Thresholds& thr) {
  CheckEntry e = entry("energy_refinement", "local energy of the potential bounded by max|h|^2 R^n",
                       "C = sup E / max|h|^2 within a factor of its coarse calibration on refinement");
  if (samples.empty()) throw DomainError("energy refinement needs at least one sample");
  std::vector<double> cs;
  for (const auto& s : samples) {
    const double c = s.max_abs_h > 0.0 ? s.sup / (s.max_abs_h * s.max_abs_h) : 0.0;
    cs.push_back(c);
    e.measured.push_back({"sup_E_n" + std::to_string(s.nx), s.sup});
  }
  const double lo = *std::min_element(cs.begin(), cs.end());
  const double hi = *std::max_element(cs.begin(), cs.end());
  e.measured.insert(e.measured.begin(), {"ratio", lo > 0.0 ? hi / lo : 0.0});
  e.measured.push_back({"C_cal", cs.front()});
  e.bound = thr.energy_refinement;
  if (hi == 0.0) {
    e.trivial = true;
    e.pass = true;
    e.note = "zero energy on every grid";
    return e;
  }
  e.pass = lo > 0.0 && hi / lo <= thr.energy_refinement &&
           hi <= thr.energy_refinement * cs.front() && cs.front() <= thr.energy_refinement * lo;
  return e;
}

CheckEntry check_energy_scaling(const EnergySample& base, const EnergySample& doubled,
                                const Thresholds& thr) {
  CheckEntry e = entry("energy_scaling", "energy bound quadratic in the boundary potential",
                       "sqrt(sup E(2h) / sup E(h)) = 2 within tolerance");
  e.bound = thr.energy_scaling;
  if (base.sup == 0.0 && doubled.sup == 0.0) {
    e.measured = {{"factor", 0.0}};
    e.trivial = e.pass = true;
    e.note = "zero energy";
    return e;
  }
  const double f = base.sup > 0.0 ? std::sqrt(doubled.sup / base.sup) : INFINITY;
  e.measured = {{"factor", f}, {"sup_E_h", base.sup}, {"sup_E_2h", doubled.sup}};
  e.pass = std::abs(f / 2.0 - 1.0) <= thr.energy_scaling;
  return e;
}

// ---------------------------------------------------------------------------

std::vector<double> bmo_horizons(const SpaceTimeField& u, const NormPolicy& policy,
                                 const std::vector<double>& fractions, Index time_subsample,
                                 bool subtract_boundary) {
  if (time_subsample < 1) throw DomainError("time_subsample must be >= 1");
  const Index levels = u.num_levels();
  const double horizon = last_time(u);
  std::vector<bool> take(static_cast<std::size_t>(levels), false);
  for (Index k = 0; k < levels; k += time_subsample) take[static_cast<std::size_t>(k)] = true;
  std::vector<Index> ends;
  for (double f : fractions) {
    const double cut = f * horizon + 1e-9 * u.dt;
    Index last = 0;
    for (Index k = 0; k < levels; ++k)
      if (u.levels[static_cast<std::size_t>(k)].t <= cut) last = k;
    take[static_cast<std::size_t>(last)] = true;
    ends.push_back(last);
  }
  std::vector<double> value(static_cast<std::size_t>(levels), 0.0);
  for (Index k = 0; k < levels; ++k) {
    if (!take[static_cast<std::size_t>(k)]) continue;
    const auto& l = u.levels[static_cast<std::size_t>(k)];
    value[static_cast<std::size_t>(k)] =
        bmo_bar_norm(l, subtract_boundary ? &l : nullptr, policy).value;
  }
  std::vector<double> out;
  for (Index last : ends)
    out.push_back(*std::max_element(value.begin(), value.begin() + last + 1));
  return out;
}

CheckEntry check_uniform_bmo(const RunResult& run, const NormPolicy& policy, Index time_subsample,
                             const CheckContext& ctx, const Thresholds& thr) {
  CheckEntry e = entry("uniform_bmo", "BMO-bar of the temperature bounded uniformly in time",
                       "beta(T) / beta(T/4) <= bound, beta(T') = max_{t <= T'} BMO-bar(u(t))");
  const std::vector<double> b = bmo_horizons(run.u, policy, {0.25, 0.5, 1.0}, time_subsample, true);
  e.bound = thr.bmo_growth;
  e.context = ctx;
  if (b[2] == 0.0) {
    e.measured = {{"ratio", 0.0}, {"beta_T/4", 0.0}, {"beta_T/2", 0.0}, {"beta_T", 0.0}};
    e.trivial = e.pass = true;
    e.note = "zero oscillation";
    return e;
  }
  const double ratio = b[0] > 0.0 ? b[2] / b[0] : INFINITY;
  e.measured = {{"ratio", ratio}, {"beta_T/4", b[0]}, {"beta_T/2", b[1]}, {"beta_T", b[2]}};
  e.pass = ratio <= thr.bmo_growth;
  return e;
}

// ---------------------------------------------------------------------------

namespace {

// Uniform double in [0, 1) from the raw 64-bit engine output.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Index block_of(double s, double width, Index blocks) {
  const auto b = static_cast<Index>(std::floor(s / width));
  return std::clamp<Index>(b, 0, blocks - 1);
}

}  // namespace

ScalarField checkerboard_coefficient(const Grid2D& g, double t, const LinearExperimentConfig& cfg,
                                     std::uint64_t seed) {
  if (cfg.uniform_coefficient) return ScalarField(g, 1.0, t);
  const auto bt = static_cast<std::uint64_t>(std::max(0.0, std::floor(t / cfg.time_block - 1e-9)));
  const auto cells = static_cast<std::uint64_t>(cfg.blocks * cfg.blocks);
  std::mt19937_64 rng(seed);
  bool flip = false;
  if (cfg.time_pattern == LinearExperimentConfig::TimePattern::Redraw) rng.discard(bt * cells);
  else flip = bt % 2 == 1;
  std::vector<double> table(static_cast<std::size_t>(cells));
  for (auto& v : table) v = ((rng() >> 63) != 0) != flip ? cfg.contrast : 1.0;
  ScalarField a(g, 0.0, t);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i) {
      const Index bx = block_of(g.x(i) - g.x0(), g.lx() / cfg.blocks, cfg.blocks);
      const Index by = block_of(g.y(j) - g.y0(), g.ly() / cfg.blocks, cfg.blocks);
      a(i, j) = table[static_cast<std::size_t>(by * cfg.blocks + bx)];
    }
  return a;
}

namespace {

ScalarField bump_source(const Grid2D& g, double scale) {
  const double r0 = 0.25 * std::min(g.lx(), g.ly());
  const double xc = g.x0() + 0.5 * g.lx();
  const double yc = g.y0() + 0.5 * g.ly();
  return ScalarField::sample(g, [&](double x, double y) {
    const double r = std::hypot(x - xc, y - yc);
    if (r >= r0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * r / r0);
    return scale * c * c;
  });
}

FaceVectorField random_flux(const Grid2D& g, const LinearExperimentConfig& cfg,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Index nb = cfg.blocks;
  std::vector<double> fx(static_cast<std::size_t>(nb * nb)), fy(fx.size());
  for (std::size_t k = 0; k < fx.size(); ++k) {
    fx[k] = cfg.source_scale * (2.0 * unit_draw(rng) - 1.0);
    fy[k] = cfg.source_scale * (2.0 * unit_draw(rng) - 1.0);
  }
  const auto block = [&](double x, double y) {
    const Index bx = block_of(x - g.x0(), g.lx() / nb, nb);
    const Index by = block_of(y - g.y0(), g.ly() / nb, nb);
    return static_cast<std::size_t>(by * nb + bx);
  };
  FaceVectorField F(g);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i < g.nx(); ++i) F.x_face(i, j) = fx[block(g.x(i) + 0.5 * g.dx(), g.y(j))];
  for (Index j = 0; j < g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i) F.y_face(i, j) = fy[block(g.x(i), g.y(j) + 0.5 * g.dy())];
  return F;
}

SpaceTimeField constant_in_time(const ScalarField& f, double dt, Index levels) {
  SpaceTimeField out(f.grid, dt);
  for (Index k = 0; k < levels; ++k) {
    ScalarField l = f;
    l.t = static_cast<double>(k) * dt;
    out.levels.push_back(std::move(l));
  }
  return out;
}

}  // namespace

LinearRun run_linear_experiment(const LinearExperimentConfig& cfg, LinearSource source,
                                std::uint64_t seed, const NormPolicy& policy) {
  if (cfg.horizon_factor < 1) throw DomainError("horizon_factor must be >= 1");
  const Grid2D g = Grid2D::rectangle(1.0, 1.0, cfg.n, cfg.n);
  const double horizon = cfg.T * cfg.horizon_factor;
  const auto steps = static_cast<Index>(std::llround(horizon / cfg.dt));
  if (std::abs(static_cast<double>(steps) * cfg.dt - horizon) > 1e-9 * horizon)
    throw DomainError("linear experiment horizon must be a multiple of dt");

  ScalarField f0(g);
  FaceVectorField F(g);
  ScalarField magnitude(g);
  if (source == LinearSource::Bump) {
    f0 = bump_source(g, cfg.source_scale);
    magnitude = f0;
  } else {
    F = random_flux(g, cfg, seed);
    FaceVectorField sq = F;
    sq.fx.array() = sq.fx.array().square();
    sq.fy.array() = sq.fy.array().square();
    magnitude = face_energy_to_nodes(sq);
    magnitude.values = magnitude.values.cwiseSqrt();
  }

  SpaceTimeField u(g, cfg.dt);
  u.push_back(ScalarField(g, 0.0, 0.0));
  const ScalarField zero(g);
  for (Index k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k + 1) * cfg.dt;
    ParabolicStepInput in(u.levels.back(), cfg.dt, zero);
    if (source == LinearSource::Bump) in.f0 = f0;
    else in.F = F;
    in.ellipticity = std::max(1.0, cfg.contrast);
    ScalarField next = step_linear(in, checkerboard_coefficient(g, t, cfg, seed), cfg.cg);
    next.t = t;
    u.push_back(std::move(next));
  }

  LinearRun out;
  out.source = source;
  out.seed = seed;
  const std::vector<double> beta =
      bmo_horizons(u, policy, {1.0 / cfg.horizon_factor, 1.0}, cfg.time_subsample, false);
  out.beta_T = beta[0];
  out.beta_long = beta[1];
  NormPolicy mp = policy;
  mp.p = source == LinearSource::Bump ? 1.0 : 2.0;
  mp.theta = 0.5;
  const SpaceTimeField src = constant_in_time(magnitude, cfg.dt, steps + 1);
  out.morrey_T = parabolic_morrey_norm(src.prefix(cfg.T), mp).value;
  out.morrey_long = parabolic_morrey_norm(src, mp).value;
  if (out.morrey_T == 0.0 || out.morrey_long == 0.0) {
    out.trivial = true;
    return out;
  }
  out.rho_T = out.beta_T / out.morrey_T;
  out.rho_long = out.beta_long / out.morrey_long;
  return out;
}

VerifyReport linear_bmo_experiment(const LinearExperimentConfig& cfg, const NormPolicy& policy,
                                   const Thresholds& thr, std::vector<LinearRun>* runs_out,
                                   std::vector<LinearSource> sources) {
  if (cfg.seeds.empty()) throw DomainError("linear experiment needs at least one seed");
  VerifyReport rep;
  const CheckContext ctx{cfg.n, cfg.n, cfg.dt, 0.0, cfg.T};
  for (LinearSource source : sources) {
    const std::string tag = source == LinearSource::Bump ? "f0" : "divf";
    std::vector<LinearRun> runs;
    for (std::uint64_t seed : cfg.seeds) runs.push_back(run_linear_experiment(cfg, source, seed, policy));
    if (runs_out) runs_out->insert(runs_out->end(), runs.begin(), runs.end());
    const bool trivial = std::all_of(runs.begin(), runs.end(), [](const LinearRun& r) { return r.trivial; });

    CheckEntry horizon = entry("linear_horizon_" + tag,
                               "linear BMO estimate constant independent of the horizon",
                               "|rho(4T) / rho(T) - 1| <= bound for every seed");
    CheckEntry spread = entry("linear_seeds_" + tag,
                              "linear BMO estimate constant independent of the coefficient",
                              "rho(T) within a factor bound of the seed median");
    CheckEntry growth = entry("linear_bmo_growth_" + tag,
                              "BMO-bar of the linear solution bounded uniformly in time",
                              "max_t BMO-bar up to 4T over max up to T <= bound for every seed");
    horizon.bound = thr.linear_horizon;
    spread.bound = thr.seed_spread;
    growth.bound = thr.bmo_growth;
    horizon.context = spread.context = growth.context = ctx;
    if (trivial) {
      for (CheckEntry* e : {&horizon, &spread, &growth}) {
        e->trivial = e->pass = true;
        e->note = "zero source: ratio 0/0";
        e->measured = {{"value", 0.0}};
        rep.append(*e);
      }
      continue;
    }
    double worst_h = 0.0, worst_g = 0.0;
    std::vector<double> rhos;
    for (const auto& r : runs) {
      const double dh = r.rho_T > 0.0 ? std::abs(r.rho_long / r.rho_T - 1.0) : INFINITY;
      const double gr = r.beta_T > 0.0 ? r.beta_long / r.beta_T : INFINITY;
      worst_h = std::max(worst_h, dh);
      worst_g = std::max(worst_g, gr);
      rhos.push_back(r.rho_T);
      const std::string s = "_seed" + std::to_string(r.seed);
      horizon.measured.push_back({"rho_T" + s, r.rho_T});
      horizon.measured.push_back({"rho_4T" + s, r.rho_long});
      growth.measured.push_back({"beta_T" + s, r.beta_T});
      growth.measured.push_back({"beta_4T" + s, r.beta_long});
    }
    const double med = median(rhos);
    const double lo = *std::min_element(rhos.begin(), rhos.end());
    const double hi = *std::max_element(rhos.begin(), rhos.end());
    const double factor = med > 0.0 && lo > 0.0 ? std::max(hi / med, med / lo) : INFINITY;
    horizon.measured.insert(horizon.measured.begin(), {"max_change", worst_h});
    horizon.pass = worst_h <= thr.linear_horizon;
    growth.measured.insert(growth.measured.begin(), {"max_ratio", worst_g});
    growth.pass = worst_g <= thr.bmo_growth;
    spread.measured = {{"max_factor", factor}, {"median_rho", med}, {"min_rho", lo}, {"max_rho", hi}};
    spread.pass = std::isfinite(factor) && factor <= thr.seed_spread;
    rep.append(std::move(horizon));
    rep.append(std::move(spread));
    rep.append(std::move(growth));
  }
  return rep;
}

// ---------------------------------------------------------------------------

CheckEntry check_a2_uniform(const ProblemSpec& spec, const Continuation& cont,
                            const NormPolicy& policy, Index time_subsample, const Thresholds& thr) {
  CheckEntry e = entry("a2_uniform", "sigma(u) + eps is an A2 weight uniformly in time and eps",
                       "per-eps maxima finite and max / min - 1 <= bound");
  if (cont.runs.size() < 3) throw DomainError("A2 check needs at least three eps levels");
  if (time_subsample < 1) throw DomainError("time_subsample must be >= 1");
  e.bound = thr.a2_variation;
  const double sanity = a2_constant(ScalarField(spec.grid, 1.0), policy).value;
  std::vector<double> maxima;
  for (const auto& run : cont.runs) {
    NormPolicy p = policy;
    p.c_ext = spec.materials.sigma(run.summary.c) + run.eps;
    double m = 0.0;
    const Index levels = run.u.num_levels();
    for (Index k = 0; k < levels; ++k) {
      if (k % time_subsample != 0 && k != levels - 1) continue;
      m = std::max(m, a2_constant(sigma_eps_field(run.u.levels[static_cast<std::size_t>(k)],
                                                  spec.materials, run.eps),
                                  p)
                          .value);
    }
    maxima.push_back(m);
    e.measured.push_back({"a2_eps" + format_double(run.eps), m});
  }
  const double lo = *std::min_element(maxima.begin(), maxima.end());
  const double hi = *std::max_element(maxima.begin(), maxima.end());
  const double variation = hi / lo - 1.0;
  e.measured.insert(e.measured.begin(), {"variation", variation});
  e.measured.push_back({"constant_weight", sanity});
  e.pass = std::isfinite(hi) && variation <= thr.a2_variation && sanity == 1.0;
  return e;
}

NormReport holder_u(const RunResult& run, const NormPolicy& policy) {
  return holder_seminorm(run.u, policy);
}

NormReport holder_phi_interior(const RunResult& run, const NormPolicy& policy) {
  const IndexBox b = interior_probe_box(run.phi.grid);
  return holder_seminorm(restrict_field(run.phi, b.i0, b.i1, b.j0, b.j1), policy);
}

CheckEntry check_holder_refinement(const std::string& field, double coarse, double fine,
                                   double alpha, const Thresholds& thr) {
  char a[32];
  std::snprintf(a, sizeof a, "%g", alpha);
  CheckEntry e = entry("holder_refinement_" + field + "_a" + a,
                       "Holder seminorm bounded independently of the mesh",
                       "|fine / coarse - 1| <= bound under grid doubling");
  e.bound = thr.holder_change;
  e.measured = {{"change", 0.0}, {"coarse", coarse}, {"fine", fine}};
  if (coarse == 0.0 && fine == 0.0) {
    e.trivial = e.pass = true;
    e.note = "constant field";
    return e;
  }
  const double change = coarse > 0.0 ? std::abs(fine / coarse - 1.0) : INFINITY;
  e.measured[0].value = change;
  e.pass = change <= thr.holder_change;
  return e;
}

CheckEntry check_holder_eps(const std::string& field, const std::vector<double>& eps,
                            const std::vector<double>& values, double alpha,
                            const Thresholds& thr) {
  char a[32];
  std::snprintf(a, sizeof a, "%g", alpha);
  CheckEntry e = entry("holder_eps_" + field + "_a" + a,
                       "Holder seminorm bounded independently of eps",
                       "max / min - 1 <= bound across the eps schedule");
  e.bound = thr.holder_change;
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  e.measured.push_back({"variation", 0.0});
  for (std::size_t k = 0; k < values.size(); ++k)
    e.measured.push_back({"eps" + format_double(eps[k]), values[k]});
  if (hi == 0.0) {
    e.trivial = e.pass = true;
    e.note = "constant field";
    return e;
  }
  const double variation = lo > 0.0 ? hi / lo - 1.0 : INFINITY;
  e.measured[0].value = variation;
  e.pass = variation <= thr.holder_change;
  return e;
}

CheckEntry check_cauchy(const CauchyReport& report) {
  CheckEntry e = entry("eps_cauchy", "regularized solutions converge as eps decreases",
                       "d_k = ||u^{eps_{k+1}} - u^{eps_k}|| nonincreasing for k >= 1");
  bool monotone = report.complete;
  for (std::size_t k = 0; k < report.d_u.size(); ++k) {
    e.measured.push_back({"d_" + std::to_string(k), report.d_u[k]});
    if (k >= 2 && report.d_u[k] > report.d_u[k - 1]) monotone = false;
  }
  if (report.d_u.size() < 3) e.note = "fewer than three differences: monotonicity is vacuous";
  e.pass = monotone;
  if (std::all_of(report.d_u.begin(), report.d_u.end(), [](double d) { return d == 0.0; })) {
    e.trivial = true;
  }
  return e;
}

CheckEntry check_uniqueness(const std::vector<ContractionReport>& probes, const Thresholds& thr) {
  CheckEntry e = entry("uniqueness_contraction", "solution depends continuously on the initial data",
                       "max / min of sup_t ||u_delta - u|| / delta over delta <= bound");
  e.bound = thr.uniqueness_spread;
  std::vector<double> ratios;
  for (const auto& p : probes) {
    if (p.trivial) continue;
    ratios.push_back(p.sup_ratio);
    e.measured.push_back({"ratio_delta" + format_double(p.delta), p.sup_ratio});
  }
  if (ratios.empty()) {
    e.measured.insert(e.measured.begin(), {"spread", 0.0});
    e.trivial = e.pass = true;
    e.note = "no nonzero perturbation";
    return e;
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double spread = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : INFINITY);
  e.measured.insert(e.measured.begin(), {"spread", spread});
  e.pass = spread <= thr.uniqueness_spread;
  return e;
}

// ---------------------------------------------------------------------------

namespace {

ProblemSpec on_grid(const ProblemSpec& spec, Index n) {
  ProblemSpec s = spec;
  const Grid2D& g = spec.grid;
  const auto ny = static_cast<Index>(std::llround(static_cast<double>(n) * g.ly() / g.lx()));
  s.grid = Grid2D::rectangle(g.lx(), g.ly(), n, ny, g.x0(), g.y0());
  return s;
}

NormPolicy sampled_policy(const NormPolicy& base, const Grid2D& g, bool auto_stride) {
  NormPolicy p = base;
  if (auto_stride) p.windows.stride = std::max<Index>(1, g.nx() / 32);
  return p;
}

}  // namespace

CampaignResult full_campaign(const CampaignConfig& config,
                             const std::function<void(const std::string&)>& progress) {
  CampaignResult out;
  auto say = [&](const std::string& s) {
    out.log.push_back(s);
    if (progress) progress(s);
  };
  const Thresholds& thr = config.thresholds;
  ProblemSpec spec = config.spec;
  spec.tol.invariant_tol = thr.invariant_tol;
  if (config.mutation == Mutation::ArithmeticAveraging) spec.averaging = FaceAveraging::Arithmetic;
  const double T = spec.T;
  const CheckContext ctx = context_of(spec);
  VerifyReport& rep = out.report;

  // Long reference run; horizon-T quantities are prefixes of it.
  say("reference run to horizon " + format_double(T * config.horizon_factor));
  ProblemSpec long_spec = spec;
  long_spec.T = T * config.horizon_factor;
  const RunResult long_run = run(long_spec);
  const RunResult ref = prefix(long_run, T);
  CheckContext long_ctx = ctx;
  long_ctx.T = long_spec.T;
  rep.append(check_maximum_principle(long_run, long_ctx, thr.invariant_tol));
  rep.append(check_potential_bound(long_run, long_ctx, thr.invariant_tol));
  const NormPolicy policy = sampled_policy(config.norms, spec.grid, config.auto_stride);
  say("uniform BMO");
  rep.append(check_uniform_bmo(long_run, policy, config.time_subsample, long_ctx, thr));

  // Refinement study: energy and Holder.
  std::vector<EnergySample> energy;
  std::vector<std::vector<double>> holder_u_vals(config.alphas.size());
  std::vector<std::vector<double>> holder_phi_vals(config.alphas.size());
  for (Index n : config.refinement) {
    say("refinement run n = " + std::to_string(n));
    const ProblemSpec sn = on_grid(spec, n);
    const bool same = sn.grid == spec.grid;
    const RunResult rn = same ? ref : run(sn);
    const NormPolicy pn = sampled_policy(config.norms, sn.grid, config.auto_stride);
    energy.push_back({n, energy_sup(sn, rn, pn.windows).value, rn.summary.max_abs_h});
    for (std::size_t a = 0; a < config.alphas.size(); ++a) {
      NormPolicy ph = pn;
      ph.alpha = config.alphas[a];
      holder_u_vals[a].push_back(holder_u(rn, ph).value);
      holder_phi_vals[a].push_back(holder_phi_interior(rn, ph).value);
    }
  }
  CheckEntry er = check_energy_refinement(energy, thr);
  er.context = ctx;
  rep.append(std::move(er));
  for (std::size_t a = 0; a < config.alphas.size(); ++a) {
    for (std::size_t k = 1; k < config.refinement.size(); ++k) {
      for (const auto& [field, vals] : {std::pair{"u", &holder_u_vals[a]}, std::pair{"phi", &holder_phi_vals[a]}}) {
        CheckEntry e = check_holder_refinement(field, (*vals)[k - 1], (*vals)[k], config.alphas[a], thr);
        e.name += "_n" + std::to_string(config.refinement[k - 1]) + "_" +
                  std::to_string(config.refinement[k]);
        e.context = ctx;
        rep.append(std::move(e));
      }
    }
  }

  // Quadratic scaling in h on a near-constant conductivity.
  say("energy scaling runs");
  {
    ProblemSpec s1 = spec;
    s1.materials = Materials{ResistivityModel(PowerLaw{1.0, 1e-12, 2.0}),
                             ConductivityModel(ConstantKappa{1.0})};
    s1.eps = 0.1;
    ProblemSpec s2 = s1;
    const SpaceTimeFunction h = spec.h;
    s2.h = [h](double x, double y, double t) { return 2.0 * h(x, y, t); };
    const RunResult r1 = run(s1);
    const RunResult r2 = run(s2);
    CheckEntry es = check_energy_scaling({spec.grid.nx(), energy_sup(s1, r1, policy.windows).value, r1.summary.max_abs_h},
                                         {spec.grid.nx(), energy_sup(s2, r2, policy.windows).value, r2.summary.max_abs_h},
                                         thr);
    es.context = context_of(s1);
    rep.append(std::move(es));
  }

  // Continuation in eps.
  say("eps continuation");
  const Continuation cont = continue_eps(spec, config.schedule);
  CheckEntry a2 = check_a2_uniform(spec, cont, policy, config.time_subsample, thr);
  a2.context = ctx;
  rep.append(std::move(a2));
  CheckEntry cy = check_cauchy(cont.report);
  cy.context = ctx;
  rep.append(std::move(cy));
  for (double alpha : config.alphas) {
    NormPolicy ph = policy;
    ph.alpha = alpha;
    std::vector<double> vu, vp;
    for (const auto& r : cont.runs) {
      vu.push_back(holder_u(r, ph).value);
      vp.push_back(holder_phi_interior(r, ph).value);
    }
    CheckEntry eu = check_holder_eps("u", cont.report.eps, vu, alpha, thr);
    CheckEntry ep = check_holder_eps("phi", cont.report.eps, vp, alpha, thr);
    eu.context = ep.context = ctx;
    rep.append(std::move(eu));
    rep.append(std::move(ep));
  }

  // Uniqueness probes around the reference run.
  say("uniqueness probes");
  std::vector<ContractionReport> probes;
  for (double d : config.deltas) probes.push_back(uniqueness_probe(spec, d, &ref));
  CheckEntry uq = check_uniqueness(probes, thr);
  uq.context = ctx;
  rep.append(std::move(uq));

  if (config.run_linear) {
    say("linear checkerboard experiments");
    const Grid2D lg = Grid2D::rectangle(1.0, 1.0, config.linear.n, config.linear.n);
    rep.append(linear_bmo_experiment(config.linear, sampled_policy(config.norms, lg, config.auto_stride), thr));
  }
  say(rep.passed() ? "campaign passed" : "campaign failed");
  return out;
}

}  // namespace degtherm
