#include "degtherm/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace degtherm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string("H2 positivity: parameter ") + what + " must be > 0");
}

}  // namespace

// ---------------------------------------------------------------------------
// Bloch-Gruneisen integral

double bg_integrand(double s, double n) {
  if (s <= 0.0) return n == 2.0 ? 1.0 : 0.0;
  // s^n e^{-s} / (1 - e^{-s})^2, stable for small and large s.
  const double one_minus = -std::expm1(-s);
  return std::exp(n * std::log(s) - s - 2.0 * std::log(one_minus));
}

namespace {

struct SimpsonState {
  double n;
  int max_depth;
  double worst_error = 0.0;
  bool failed = false;
};

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = bg_integrand(lm, st.n);
  const double frm = bg_integrand(rm, st.n);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth) {
    st.failed = true;
    st.worst_error = std::max(st.worst_error, std::abs(delta) / 15.0);
    return left + right + delta / 15.0;
  }
  return adaptive(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double bg_integral(double x, double n, double abs_tol) {
  if (!(x > 0.0)) throw DomainError("bg_integral: upper limit must be > 0");
  if (!(n >= 2.0)) throw DomainError("bg_integral: n must be >= 2");
  // Beyond this point the integrand is below 1e-30 of its scale.
  const double cutoff = 80.0 + 4.0 * n;
  const double upper = std::min(x, cutoff);
  constexpr int panels = 16;
  SimpsonState st{n, 40};
  double total = 0.0;
  const double w = upper / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = k * w;
    const double b = (k + 1) * w;
    const double fa = bg_integrand(a, n);
    const double fb = bg_integrand(b, n);
    const double fm = bg_integrand(0.5 * (a + b), n);
    total += adaptive(st, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), abs_tol / panels, 0);
  }
  if (st.failed && st.worst_error > abs_tol)
    throw Error("bg_integral: quadrature did not converge, achieved error " +
                format_double(st.worst_error));
  return total;
}

// ---------------------------------------------------------------------------

ResistivityModel::ResistivityModel(Variant v) : model_(std::move(v)) {
  std::visit(overloaded{
                 [](const PowerLaw& m) {
                   require_positive(m.a, "a");
                   require_positive(m.b, "b");
                   require_positive(m.p, "p");
                 },
                 [](const Semiconductor& m) {
                   require_positive(m.sigma0, "sigma0");
                   require_positive(m.q, "q");
                 },
                 [](const BlochGruneisen& m) {
                   if (!(m.rho0 >= 0.0)) throw DomainError("H2 positivity: rho0 must be >= 0");
                   require_positive(m.A, "A");
                   require_positive(m.theta, "theta");
                   if (!(m.n >= 2.0)) throw DomainError("Bloch-Gruneisen exponent n must be >= 2");
                 },
             },
             model_);
}

double ResistivityModel::rho(double s) const {
  if (!(s > 0.0)) throw DomainError("resistivity evaluated at non-positive temperature");
  return std::visit(overloaded{
                        [s](const PowerLaw& m) { return m.a + m.b * std::pow(s, m.p); },
                        [s](const Semiconductor& m) { return m.sigma0 * std::exp(m.q / s) * s; },
                        [s](const BlochGruneisen& m) {
                          return m.rho0 + m.A * std::pow(s / m.theta, m.n) *
                                              bg_integral(m.theta / s, m.n);
                        },
                    },
                    model_);
}

double ResistivityModel::growth_exponent() const {
  return std::visit(overloaded{
                        [](const PowerLaw& m) { return m.p; },
                        [](const Semiconductor&) { return 1.0; },
                        [](const BlochGruneisen&) { return 1.0; },
                    },
                    model_);
}

std::string ResistivityModel::name() const {
  return std::visit(overloaded{
                        [](const PowerLaw&) { return std::string("powerlaw"); },
                        [](const Semiconductor&) { return std::string("semiconductor"); },
                        [](const BlochGruneisen&) { return std::string("blochgruneisen"); },
                    },
                    model_);
}

std::map<std::string, double> ResistivityModel::parameters() const {
  return std::visit(
      overloaded{
          [](const PowerLaw& m) {
            return std::map<std::string, double>{{"a", m.a}, {"b", m.b}, {"p", m.p}};
          },
          [](const Semiconductor& m) {
            return std::map<std::string, double>{{"sigma0", m.sigma0}, {"q", m.q}};
          },
          [](const BlochGruneisen& m) {
            return std::map<std::string, double>{
                {"rho0", m.rho0}, {"A", m.A}, {"theta", m.theta}, {"n", m.n}};
          },
      },
      model_);
}

// ---------------------------------------------------------------------------

ConductivityModel::ConductivityModel(Variant v) : model_(std::move(v)) {
  if (auto* c = std::get_if<ConstantKappa>(&model_)) {
    if (!(c->kappa0 > 0.0)) throw DomainError("H1: kappa0 must be > 0");
  } else if (auto* w = std::get_if<WiedemannFranz>(&model_)) {
    if (!(w->lorentz > 0.0)) throw DomainError("H1: Lorentz number must be > 0");
  } else {
    auto& t = std::get<SmoothTable>(model_);
    if (t.s.size() != t.kappa.size() || t.s.size() < 2)
      throw DomainError("conductivity table needs at least two (s, kappa) pairs");
    for (std::size_t k = 0; k < t.s.size(); ++k) {
      if (!(t.kappa[k] > 0.0)) throw DomainError("H1: table conductivities must be > 0");
      if (k && !(t.s[k] > t.s[k - 1]))
        throw DomainError("conductivity table temperatures must increase");
    }
    // Fritsch-Carlson tangents keep the interpolant within the data range.
    const std::size_t m = t.s.size();
    std::vector<double> secant(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k)
      secant[k] = (t.kappa[k + 1] - t.kappa[k]) / (t.s[k + 1] - t.s[k]);
    slopes_.assign(m, 0.0);
    slopes_[0] = secant[0];
    slopes_[m - 1] = secant[m - 2];
    for (std::size_t k = 1; k + 1 < m; ++k)
      slopes_[k] = secant[k - 1] * secant[k] <= 0.0 ? 0.0 : 0.5 * (secant[k - 1] + secant[k]);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      if (secant[k] == 0.0) {
        slopes_[k] = slopes_[k + 1] = 0.0;
        continue;
      }
      const double a = slopes_[k] / secant[k];
      const double b = slopes_[k + 1] / secant[k];
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double tau = 3.0 / std::sqrt(r);
        slopes_[k] = tau * a * secant[k];
        slopes_[k + 1] = tau * b * secant[k];
      }
    }
  }
}

double ConductivityModel::kappa(double s, const ResistivityModel& resistivity) const {
  if (auto* c = std::get_if<ConstantKappa>(&model_)) return c->kappa0;
  if (!(s > 0.0)) throw DomainError("conductivity evaluated at non-positive temperature");
  if (auto* w = std::get_if<WiedemannFranz>(&model_)) return w->lorentz * s * resistivity.sigma(s);
  const auto& t = std::get<SmoothTable>(model_);
  if (s <= t.s.front()) return t.kappa.front();
  if (s >= t.s.back()) return t.kappa.back();
  const auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - t.s.begin()) - 1;
  const double h = t.s[k + 1] - t.s[k];
  const double u = (s - t.s[k]) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return h00 * t.kappa[k] + h10 * h * slopes_[k] + h01 * t.kappa[k + 1] + h11 * h * slopes_[k + 1];
}

std::string ConductivityModel::name() const {
  if (std::holds_alternative<ConstantKappa>(model_)) return "constant";
  if (std::holds_alternative<WiedemannFranz>(model_)) return "wiedemannfranz";
  return "table";
}

std::map<std::string, double> ConductivityModel::parameters() const {
  if (auto* c = std::get_if<ConstantKappa>(&model_)) return {{"kappa0", c->kappa0}};
  if (auto* w = std::get_if<WiedemannFranz>(&model_)) return {{"L", w->lorentz}};
  return {};
}

// ---------------------------------------------------------------------------

ValidityReport validate_hypotheses(const Materials& m, double r, double s_max, int samples) {
  if (!(r > 0.0) || !(s_max > r)) throw DomainError("validation range needs 0 < r < s_max");
  ValidityReport rep;
  rep.r = r;
  rep.s_max = s_max;
  rep.p = m.resistivity.growth_exponent();
  samples = std::max(samples, 8);

  const double lr = std::log(r);
  const double ls = std::log(s_max);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double klo = std::numeric_limits<double>::infinity();
  double khi = 0.0;
  double ssup = 0.0;
  rep.h2 = true;
  rep.h1 = true;
  for (int k = 0; k < samples; ++k) {
    const double s = k + 1 == samples ? s_max : std::exp(lr + (ls - lr) * k / (samples - 1));
    const double rho = m.rho(s);
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      rep.h2 = false;
      rep.witness = s;
      rep.reason = "H2 positivity: rho(s) must be positive and finite";
      break;
    }
    const double ratio = rho / (1.0 + std::pow(s, rep.p));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ssup = std::max(ssup, 1.0 / rho);
    const double kap = m.kappa(s);
    if (!(kap > 0.0) || !std::isfinite(kap)) {
      rep.h1 = false;
      rep.witness = s;
      rep.reason = "H1: kappa(s) must be positive and finite";
      break;
    }
    klo = std::min(klo, kap);
    khi = std::max(khi, kap);
  }
  if (rep.h2) {
    rep.c1 = rep.c2 = lo;
    rep.c3 = rep.c4 = hi;
    rep.slack = hi / lo;
    rep.sigma_sup = ssup;
  }
  if (rep.h1) {
    rep.kappa_inf = klo;
    rep.kappa_sup = khi;
    // Trend over the top tenth of the log range separates bounded from
    // power-law growth or decay.
    const double s_top = std::exp(lr + 0.9 * (ls - lr));
    rep.kappa_log_slope =
        (std::log(m.kappa(s_max)) - std::log(m.kappa(s_top))) / (ls - std::log(s_top));
    if (rep.kappa_log_slope > 0.5) {
      rep.h1 = false;
      rep.witness = s_max;
      rep.reason = "H1: sup kappa grows without bound over the sampled range";
    } else if (rep.kappa_log_slope < -0.5) {
      rep.h1 = false;
      rep.witness = s_max;
      rep.reason = "H1: inf kappa decays to zero over the sampled range";
    }
  }
  rep.valid = rep.h1 && rep.h2;
  return rep;
}

double sigma_sup(const ResistivityModel& m, double c) {
  if (!(c > 0.0)) throw DomainError("sigma_sup needs c > 0");
  double sup = m.sigma(c);
  constexpr int samples = 2000;
  const double lc = std::log(c);
  for (int k = 1; k <= samples; ++k) sup = std::max(sup, m.sigma(std::exp(lc + 4.0 * std::log(10.0) * k / samples)));
  return sup;
}

}  // namespace degtherm
