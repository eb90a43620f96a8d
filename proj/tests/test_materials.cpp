#include "degtherm/materials.hpp"

#include <doctest.h>

#include <cmath>

using namespace degtherm;

namespace {

// Composite Simpson over [0, x] with the integrand's limit at 0 taken by hand.
double simpson_bg(double x, double n, long panels) {
  auto f = [n](double s) {
    if (s == 0.0) return n == 2.0 ? 1.0 : 0.0;
    return std::pow(s, n) / ((std::exp(s) - 1.0) * (1.0 - std::exp(-s)));
  };
  const double h = x / static_cast<double>(panels);
  double sum = f(0.0) + f(x);
  for (long k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("power law by direct substitution") {
  const ResistivityModel m(PowerLaw{1.0, 1.0, 2.0});
  CHECK(m.rho(2.0) == doctest::Approx(5.0));
  CHECK(m.sigma(2.0) == doctest::Approx(0.2));
  CHECK(m.growth_exponent() == 2.0);
}

TEST_CASE("Wiedemann-Franz ratio is the Lorentz number times s") {
  const Materials m{ResistivityModel(PowerLaw{1.0, 1.0, 2.0}), ConductivityModel(WiedemannFranz{2.44e-8})};
  CHECK(m.kappa(300.0) / m.sigma(300.0) == doctest::Approx(7.32e-6).epsilon(1e-12));
}

TEST_CASE("Bloch-Gruneisen is linear at high temperature") {
  const ResistivityModel m(BlochGruneisen{0.0, 1.0, 100.0, 2.0});
  CHECK(m.rho(1e4) == doctest::Approx(100.0).epsilon(0.02));
  // Against an independent quadrature of the defining integral.
  const double reference = std::pow(1e4 / 100.0, 2.0) * simpson_bg(100.0 / 1e4, 2.0, 2000);
  CHECK(m.rho(1e4) == doctest::Approx(reference).epsilon(1e-8));
}

TEST_CASE("Bloch-Gruneisen integral oracles") {
  CHECK(std::abs(bg_integral(0.01, 2.0) - 0.01) < 1e-5);
  CHECK(bg_integral(1.0, 5.0) == doctest::Approx(simpson_bg(1.0, 5.0, 1000000)).epsilon(1e-9));
  double prev = 0.0;
  for (double x : {1.0, 5.0, 10.0, 20.0, 40.0, 80.0}) {
    const double v = bg_integral(x, 2.0);
    CHECK(v >= prev * (1.0 - 1e-12));
    if (x <= 20.0) CHECK(v > prev);
    prev = v;
  }
  // Tail beyond 40 is below 40^2 e^{-40} times a modest factor.
  CHECK(bg_integral(80.0, 2.0) - bg_integral(40.0, 2.0) < 1e-12);
  CHECK(bg_integrand(0.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("power law is its own envelope") {
  const Materials m{ResistivityModel(PowerLaw{1.0, 1.0, 2.0}), ConductivityModel(ConstantKappa{1.0})};
  const ValidityReport r = validate_hypotheses(m, 0.5, 100.0);
  CHECK(r.valid);
  CHECK(r.p == 2.0);
  CHECK(r.c1 == doctest::Approx(1.0));
  CHECK(r.c2 == doctest::Approx(1.0));
  CHECK(r.c3 == doctest::Approx(1.0));
  CHECK(r.c4 == doctest::Approx(1.0));
}

TEST_CASE("unbounded conductivity fails H1") {
  // kappa(s) = s / (1 + 1e-12 s^2), essentially s on [1, 1e3].
  const Materials m{ResistivityModel(PowerLaw{1.0, 1e-12, 2.0}), ConductivityModel(WiedemannFranz{1.0})};
  const ValidityReport r = validate_hypotheses(m, 1.0, 1e3);
  CHECK_FALSE(r.h1);
  CHECK_FALSE(r.valid);
  CHECK(r.reason.find("H1") != std::string::npos);
  CHECK(r.witness.has_value());
}

TEST_CASE("semiconductor envelope against direct sampling") {
  const Materials m{ResistivityModel(Semiconductor{1.0, 1.0}), ConductivityModel(ConstantKappa{1.0})};
  const ValidityReport r = validate_hypotheses(m, 0.5, 1e3);
  CHECK(r.valid);
  CHECK(r.p == 1.0);
  double lo = 1e300, hi = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double s = 0.5 * std::pow(2e3, k / 20000.0);
    const double q = m.rho(s) / (1.0 + s);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(r.c1 == doctest::Approx(lo).epsilon(0.01));
  CHECK(r.c3 == doctest::Approx(hi).epsilon(0.01));
  CHECK(r.slack == doctest::Approx(hi / lo).epsilon(0.02));
}

TEST_CASE("monotone table interpolation") {
  const ConductivityModel k(SmoothTable{{1.0, 2.0, 4.0, 8.0}, {1.0, 1.5, 1.6, 3.0}});
  const ResistivityModel r(PowerLaw{});
  double prev = 0.0;
  for (double s = 0.5; s < 10.0; s += 0.01) {
    const double v = k.kappa(s, r);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
  CHECK(k.kappa(2.0, r) == doctest::Approx(1.5));
  CHECK(k.kappa(100.0, r) == doctest::Approx(3.0));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(ResistivityModel(PowerLaw{-1.0, 1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(ConductivityModel(ConstantKappa{0.0}), DomainError);
  CHECK_THROWS_AS(ConductivityModel(SmoothTable{{1.0, 1.0}, {1.0, 2.0}}), DomainError);
}

TEST_CASE("sigma_sup is attained at the lower temperature for increasing rho") {
  const ResistivityModel m(PowerLaw{1.0, 1.0, 2.0});
  CHECK(sigma_sup(m, 1.0) == doctest::Approx(0.5));
}
