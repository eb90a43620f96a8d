#include "degtherm/convergence.hpp"

#include "degtherm/elliptic.hpp"
#include "degtherm/parabolic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace degtherm {

namespace {

constexpr double pi = std::numbers::pi;

// a = 1 + x^2 / 2 + y / 4.
double coef(double x, double y) { return 1.0 + 0.5 * x * x + 0.25 * y; }

// phi = sin(pi x) e^y; source = -div(a grad phi).
double phi_exact(double x, double y) { return std::sin(pi * x) * std::exp(y); }
double phi_source(double x, double y) {
  const double e = std::exp(y);
  const double lap = (1.0 - pi * pi) * std::sin(pi * x) * e;
  return -(coef(x, y) * lap + x * pi * std::cos(pi * x) * e + 0.25 * std::sin(pi * x) * e);
}

// u = 1 + e^{-t} sin(pi x) sin(pi y) + x y.
double u_exact(double x, double y, double t) {
  return 1.0 + std::exp(-t) * std::sin(pi * x) * std::sin(pi * y) + x * y;
}
double u_source(double x, double y, double t) {
  const double e = std::exp(-t);
  const double s = std::sin(pi * x) * std::sin(pi * y);
  const double ux = e * pi * std::cos(pi * x) * std::sin(pi * y) + y;
  const double uy = e * pi * std::sin(pi * x) * std::cos(pi * y) + x;
  const double lap = -2.0 * pi * pi * e * s;
  return -e * s - (coef(x, y) * lap + x * ux + 0.25 * uy);
}

ScalarField boundary_of(const Grid2D& g, double t) {
  ScalarField b(g, 0.0, t);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i)
      if (g.is_boundary(i, j)) b(i, j) = u_exact(g.x(i), g.y(j), t);
  return b;
}

ScalarField heat_solve(const Grid2D& g, double T, Index steps) {
  const double dt = T / static_cast<double>(steps);
  const ScalarField a = ScalarField::sample(g, coef);
  CgOptions cg;
  cg.rtol = 1e-13;
  ScalarField u = ScalarField::sample(g, [](double x, double y) { return u_exact(x, y, 0.0); });
  for (Index k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k + 1) * dt;
    ParabolicStepInput in(u, dt, boundary_of(g, t));
    in.f0 = ScalarField::sample(g, [t](double x, double y) { return u_source(x, y, t); }, t);
    u = step_linear(in, a, cg);
  }
  return u;
}

void fill_ratios(OrderStudy& s) {
  for (std::size_t k = 1; k < s.rows.size(); ++k)
    s.rows[k].ratio = s.rows[k - 1].error / s.rows[k].error;
}

}  // namespace

OrderStudy elliptic_space_order(const std::vector<Index>& cells) {
  OrderStudy s;
  s.name = "elliptic spatial order";
  CgOptions cg;
  cg.rtol = 1e-13;
  for (Index n : cells) {
    const Grid2D g = Grid2D::rectangle(1.0, 1.0, n, n);
    EllipticProblem p(ScalarField::sample(g, coef), ScalarField::sample(g, phi_exact));
    p.s = ScalarField::sample(g, phi_source);
    const ScalarField phi = solve(p, cg).phi;
    const ScalarField exact = ScalarField::sample(g, phi_exact);
    s.rows.push_back({g.dx(), (phi.values - exact.values).lpNorm<Eigen::Infinity>(), 0.0});
  }
  fill_ratios(s);
  return s;
}

OrderStudy parabolic_space_order(const std::vector<Index>& cells, double T, double dt_scale) {
  OrderStudy s;
  s.name = "parabolic spatial order (dt ~ h^2)";
  for (Index n : cells) {
    const Grid2D g = Grid2D::rectangle(1.0, 1.0, n, n);
    const double h = g.dx();
    const auto steps = static_cast<Index>(std::ceil(T / (dt_scale * h * h) - 1e-9));
    const ScalarField u = heat_solve(g, T, steps);
    double err = 0.0;
    for (Index j = 0; j <= g.ny(); ++j)
      for (Index i = 0; i <= g.nx(); ++i)
        err = std::max(err, std::abs(u(i, j) - u_exact(g.x(i), g.y(j), T)));
    s.rows.push_back({h, err, 0.0});
  }
  fill_ratios(s);
  return s;
}

OrderStudy parabolic_time_order(Index cells, double T, Index steps0, int levels) {
  if (levels < 2) throw DomainError("time order study needs at least two levels");
  OrderStudy s;
  s.name = "parabolic temporal order";
  const Grid2D g = Grid2D::rectangle(1.0, 1.0, cells, cells);
  std::vector<ScalarField> u;
  for (int k = 0; k <= levels; ++k) u.push_back(heat_solve(g, T, steps0 << k));
  const Eigen::VectorXd ref = 2.0 * u[static_cast<std::size_t>(levels)].values -
                              u[static_cast<std::size_t>(levels - 1)].values;
  for (int k = 0; k < levels - 1; ++k)
    s.rows.push_back({T / static_cast<double>(steps0 << k),
                      (u[static_cast<std::size_t>(k)].values - ref).lpNorm<Eigen::Infinity>(), 0.0});
  fill_ratios(s);
  return s;
}

std::string format_study(const OrderStudy& study) {
  std::string out = study.name + "\n";
  char line[128];
  std::snprintf(line, sizeof line, "%14s %14s %10s\n", "step", "max error", "ratio");
  out += line;
  for (const auto& r : study.rows) {
    std::snprintf(line, sizeof line, "%14.6e %14.6e %10.4f\n", r.step, r.error, r.ratio);
    out += line;
  }
  return out;
}

}  // namespace degtherm
