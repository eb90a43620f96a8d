#include "degtherm/thermistor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace degtherm {

Index ProblemSpec::num_steps() const {
  if (!(T > 0.0) || !(dt > 0.0)) throw DomainError("horizon and time step must be positive");
  const double n = T / dt;
  const auto steps = static_cast<Index>(std::llround(n));
  if (steps < 1 || std::abs(n - static_cast<double>(steps)) > 1e-6 * n)
    throw DomainError("horizon T must be an integer multiple of dt");
  return steps;
}

namespace {

ScalarField boundary_field(const Grid2D& g, const SpaceTimeFunction& fn, double t) {
  ScalarField f(g, 0.0, t);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i)
      if (g.is_boundary(i, j)) f(i, j) = fn(g.x(i), g.y(j), t);
  return f;
}

template <typename Fn>
void for_each_boundary(const Grid2D& g, Fn&& fn) {
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i)
      if (g.is_boundary(i, j)) fn(i, j);
}

ProblemSpec pilot_spec(const ProblemSpec& spec) {
  ProblemSpec p = spec;
  p.grid = Grid2D::rectangle(spec.grid.lx(), spec.grid.ly(), 16, 16, spec.grid.x0(),
                             spec.grid.y0());
  const Index steps = std::min<Index>(spec.num_steps(), 20);
  p.dt = spec.T / static_cast<double>(steps);
  p.validate_materials = false;
  return p;
}

double interior_energy(const ScalarField& a, const ScalarField& phi, FaceAveraging avg) {
  const ScalarField e = joule_pointwise(a, phi, avg);
  double sum = 0.0;
  for (Index j = 0; j <= a.grid.ny(); ++j)
    for (Index i = 0; i <= a.grid.nx(); ++i) sum += e(i, j) * a.grid.node_measure(i, j);
  return sum;
}

}  // namespace

SpecSummary validate_spec(const ProblemSpec& spec) {
  if (!spec.u0 || !spec.g || !spec.h) throw DomainError("problem needs u0, g and h");
  const Index steps = spec.num_steps();
  const Grid2D& g = spec.grid;
  SpecSummary out;

  double min_u0 = std::numeric_limits<double>::infinity();
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i) {
      const double v = spec.u0(g.x(i), g.y(j));
      if (!std::isfinite(v)) throw DomainError("u0 must be finite");
      min_u0 = std::min(min_u0, v);
    }
  if (!(min_u0 > 0.0)) throw DomainError("hypothesis violated: min u0 > 0");

  double min_g = std::numeric_limits<double>::infinity();
  double max_h = 0.0;
  for (Index k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * spec.dt;
    for_each_boundary(g, [&](Index i, Index j) {
      const double gv = spec.g(g.x(i), g.y(j), t);
      const double hv = spec.h(g.x(i), g.y(j), t);
      if (!std::isfinite(gv) || !std::isfinite(hv)) throw DomainError("boundary data must be finite");
      min_g = std::min(min_g, gv);
      max_h = std::max(max_h, std::abs(hv));
    });
  }
  if (!(min_g > 0.0)) throw DomainError("hypothesis violated: min g > 0");
  for_each_boundary(g, [&](Index i, Index j) {
    const double gv = spec.g(g.x(i), g.y(j), 0.0);
    const double uv = spec.u0(g.x(i), g.y(j));
    if (std::abs(gv - uv) > 1e-12 * std::max(1.0, std::abs(uv)))
      throw DomainError("hypothesis violated: compatibility g(x,0) = u0(x) on the boundary");
  });

  out.c = std::min(min_u0, min_g);
  out.max_abs_h = max_h;
  out.sigma0 = sigma_sup(spec.materials.resistivity, out.c);
  if (!(spec.eps > 0.0) || !(spec.eps < out.sigma0))
    throw DomainError("regularization must satisfy 0 < eps < sigma0 = " +
                      format_double(out.sigma0));

  if (spec.validate_materials) {
    const RunResult pilot = run(pilot_spec(spec));
    double u_max = out.c;
    for (const auto& d : pilot.diagnostics) u_max = std::max(u_max, d.max_u);
    const double u_cap = std::max(2.0 * u_max, 2.0 * out.c);
    ValidityReport rep = validate_hypotheses(spec.materials, out.c, u_cap);
    if (!rep.valid) throw DomainError("material hypotheses fail on [c, u_cap]: " + rep.reason);
    out.materials = rep;
  }
  return out;
}

ScalarField sigma_eps_field(const ScalarField& u, const Materials& materials, double eps) {
  ScalarField a(u.grid, 0.0, u.t);
  for (Index k = 0; k < u.grid.num_nodes(); ++k) a.values[k] = materials.sigma(u.values[k]) + eps;
  return a;
}

RunResult run(const ProblemSpec& spec) {
  const SpecSummary summary = validate_spec(spec);
  const Grid2D& g = spec.grid;
  const Index steps = spec.num_steps();
  const Tolerances& tol = spec.tol;
  if (!(tol.tol_couple > 0.0) || tol.max_couple < 1)
    throw DomainError("coupling needs tol_couple > 0 and max_couple >= 1");

  RunResult res(g, spec.dt);
  res.summary = summary;
  res.eps = spec.eps;

  const double lower = summary.c - tol.invariant_tol;
  const double upper_phi = summary.max_abs_h + tol.invariant_tol;
  const double a_lo = spec.eps * (1.0 - 1e-12);
  const double a_hi = 2.0 * summary.sigma0 * (1.0 + 1e-12);

  auto record = [&](const ScalarField& u, const ScalarField& phi, const ScalarField& a,
                    StepDiagnostics d) {
    d.t = u.t;
    d.min_u = u.values.minCoeff();
    d.max_u = u.values.maxCoeff();
    d.max_abs_phi = phi.values.cwiseAbs().maxCoeff();
    d.energy = interior_energy(a, phi, spec.averaging);
    if (!(d.min_u >= lower))
      throw InvariantViolation("minimum principle violated at t = " + format_double(d.t) +
                               ": min u = " + format_double(d.min_u) +
                               " < c = " + format_double(summary.c));
    if (!(d.max_abs_phi <= upper_phi))
      throw InvariantViolation("potential bound violated at t = " + format_double(d.t) +
                               ": max |phi| = " + format_double(d.max_abs_phi));
    const ScalarField a_new = sigma_eps_field(u, spec.materials, spec.eps);
    if (!(a_new.values.minCoeff() >= a_lo) || !(a_new.values.maxCoeff() <= a_hi))
      throw InvariantViolation("conductivity sandwich eps <= sigma+eps <= 2 sigma0 violated at t = " +
                               format_double(d.t));
    res.u.push_back(u);
    res.phi.push_back(phi);
    res.diagnostics.push_back(d);
  };

  // Level 0: phi from the elliptic problem with a = sigma(u0) + eps.
  ScalarField u = ScalarField::sample(g, spec.u0, 0.0);
  for_each_boundary(g, [&](Index i, Index j) { u(i, j) = spec.g(g.x(i), g.y(j), 0.0); });
  ScalarField a = sigma_eps_field(u, spec.materials, spec.eps);
  EllipticProblem ep0(a, boundary_field(g, spec.h, 0.0));
  ep0.averaging = spec.averaging;
  double h_mean = 0.0;
  Index h_count = 0;
  for_each_boundary(g, [&](Index i, Index j) { h_mean += ep0.boundary(i, j), ++h_count; });
  const ScalarField guess0(g, h_mean / static_cast<double>(h_count));
  EllipticSolution sol = solve(ep0, tol.cg, &guess0);
  StepDiagnostics d0;
  d0.cg_iters = sol.stats.iterations;
  record(u, sol.phi, a, d0);

  ScalarField phi = sol.phi;
  for (Index k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k + 1) * spec.dt;
    const ScalarField gb = boundary_field(g, spec.g, t);
    const ScalarField hb = boundary_field(g, spec.h, t);
    ScalarField u_star = u;
    ScalarField phi_star = phi;
    StepDiagnostics d;
    bool converged = false;
    double diff = 0.0;
    for (int m = 1; m <= tol.max_couple; ++m) {
      a = sigma_eps_field(u_star, spec.materials, spec.eps);
      EllipticProblem ep(a, hb);
      ep.averaging = spec.averaging;
      sol = solve(ep, tol.cg, &phi_star);
      phi_star = std::move(sol.phi);
      d.cg_iters += sol.stats.iterations;

      ParabolicStepInput in(u, spec.dt, gb);
      in.F = joule_flux(a, phi_star, spec.averaging);
      in.averaging = spec.averaging;
      NonlinearStep ns = step_nonlinear(in, spec.materials, tol.picard, tol.cg, &u_star);
      d.picard_iters += ns.iterations;
      d.cg_iters += ns.cg_iterations;
      d.coupling_iters = m;
      diff = (ns.u.values - u_star.values).lpNorm<Eigen::Infinity>();
      u_star = std::move(ns.u);
      if (diff < tol.tol_couple) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw CouplingError("coupling did not converge at t = " + format_double(t) +
                          " (last change " + format_double(diff) + "); reduce dt");
    u = std::move(u_star);
    u.t = t;
    phi = std::move(phi_star);
    phi.t = t;
    record(u, phi, a, d);
  }
  return res;
}

// ---------------------------------------------------------------------------

double EpsSchedule::eps(int k) const { return eps0 * std::pow(gamma, k); }

IndexBox interior_probe_box(const Grid2D& g) {
  const auto i0 = static_cast<Index>(std::ceil(0.25 * static_cast<double>(g.nx()) - 1e-9));
  const auto j0 = static_cast<Index>(std::ceil(0.25 * static_cast<double>(g.ny()) - 1e-9));
  return {i0, g.nx() - i0, j0, g.ny() - j0};
}

namespace {

double max_difference(const SpaceTimeField& a, const SpaceTimeField& b, const IndexBox* box) {
  double d = 0.0;
  for (Index k = 0; k < std::min(a.num_levels(), b.num_levels()); ++k) {
    const auto& la = a.levels[static_cast<std::size_t>(k)];
    const auto& lb = b.levels[static_cast<std::size_t>(k)];
    if (!box) {
      d = std::max(d, (la.values - lb.values).lpNorm<Eigen::Infinity>());
      continue;
    }
    for (Index j = box->j0; j <= box->j1; ++j)
      for (Index i = box->i0; i <= box->i1; ++i) d = std::max(d, std::abs(la(i, j) - lb(i, j)));
  }
  return d;
}

}  // namespace

Continuation continue_eps(const ProblemSpec& spec, const EpsSchedule& schedule) {
  if (!(schedule.eps0 > 0.0) || !(schedule.gamma > 0.0) || !(schedule.gamma < 1.0) ||
      schedule.count < 1)
    throw DomainError("eps schedule needs eps0 > 0, gamma in (0,1), count >= 1");
  Continuation out;
  const IndexBox box = interior_probe_box(spec.grid);
  for (int k = 0; k < schedule.count; ++k) {
    ProblemSpec sk = spec;
    sk.eps = schedule.eps(k);
    out.report.eps.push_back(sk.eps);
    try {
      out.runs.push_back(run(sk));
    } catch (const Error& e) {
      out.report.error = "run at eps = " + format_double(sk.eps) + " failed: " + e.what();
      throw ContinuationError(out.report.error, out.report);
    }
    if (k > 0) {
      const auto& prev = out.runs[out.runs.size() - 2];
      const auto& cur = out.runs.back();
      out.report.d_u.push_back(max_difference(prev.u, cur.u, nullptr));
      out.report.d_phi.push_back(max_difference(prev.phi, cur.phi, &box));
    }
  }
  out.report.complete = true;
  return out;
}

double interior_bump(const Grid2D& g, double x, double y) {
  const double xi = (x - g.x0()) / g.lx();
  const double eta = (y - g.y0()) / g.ly();
  if (xi <= 1e-12 || xi >= 1.0 - 1e-12 || eta <= 1e-12 || eta >= 1.0 - 1e-12) return 0.0;
  return std::sin(std::numbers::pi * xi) * std::sin(std::numbers::pi * eta);
}

ContractionReport uniqueness_probe(const ProblemSpec& spec, double delta, const RunResult* base) {
  if (!(delta >= 0.0)) throw DomainError("perturbation size must be >= 0");
  std::optional<RunResult> own;
  if (!base) {
    own.emplace(run(spec));
    base = &*own;
  }
  ProblemSpec perturbed = spec;
  const Grid2D grid = spec.grid;
  const SpaceFunction u0 = spec.u0;
  perturbed.u0 = [u0, grid, delta](double x, double y) {
    return u0(x, y) + delta * interior_bump(grid, x, y);
  };
  const RunResult other = run(perturbed);

  ContractionReport rep;
  rep.delta = delta;
  for (Index k = 0; k < base->u.num_levels(); ++k) {
    const auto& a = base->u.levels[static_cast<std::size_t>(k)];
    const auto& b = other.u.levels[static_cast<std::size_t>(k)];
    rep.t.push_back(a.t);
    rep.r.push_back((a.values - b.values).lpNorm<Eigen::Infinity>());
  }
  const double sup_r = *std::max_element(rep.r.begin(), rep.r.end());
  if (delta == 0.0) {
    rep.trivial = true;
    rep.sup_ratio = 0.0;
  } else {
    rep.sup_ratio = sup_r / delta;
  }
  return rep;
}

}  // namespace degtherm
