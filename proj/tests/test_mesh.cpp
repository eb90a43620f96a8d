#include "degtherm/mesh.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace degtherm;

TEST_CASE("gradient of a constant vanishes") {
  const Grid2D g = Grid2D::unit_square_nodes(9);
  const FaceVectorField F = gradient(ScalarField(g, 5.0));
  CHECK(F.fx.cwiseAbs().maxCoeff() == 0.0);
  CHECK(F.fy.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient is exact on affine fields") {
  const Grid2D g = Grid2D::unit_square_nodes(17);
  const FaceVectorField F = gradient(ScalarField::sample(g, [](double x, double) { return 3.0 * x; }));
  CHECK((F.fx.array() - 3.0).abs().maxCoeff() < 1e-12);
  CHECK(F.fy.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("difference quotient of x^2 by hand") {
  const Grid2D g = Grid2D::rectangle(1.0, 1.0, 10, 10);
  const FaceVectorField F = gradient(ScalarField::sample(g, [](double x, double) { return x * x; }));
  CHECK(F.x_face(2, 4) == doctest::Approx((0.09 - 0.04) / 0.1).epsilon(1e-12));
  CHECK(F.x_face(2, 4) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("divergence of zero and of affine gradients") {
  const Grid2D g = Grid2D::unit_square_nodes(9);
  CHECK(divergence(FaceVectorField(g)).values.cwiseAbs().maxCoeff() == 0.0);
  const ScalarField aff = ScalarField::sample(g, [](double x, double y) { return 2 * x - 3 * y + 1; });
  CHECK(divergence(gradient(aff)).values.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("summation by parts on random fields") {
  const Grid2D g = Grid2D::unit_square_nodes(17);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    ScalarField f = oracle::random_field(g, seed, -1.0, 1.0);
    for (Index j = 0; j <= g.ny(); ++j)
      for (Index i = 0; i <= g.nx(); ++i)
        if (g.is_boundary(i, j)) f(i, j) = 0.0;
    FaceVectorField F(g);
    const ScalarField a = oracle::random_field(g, 100 + seed, -1.0, 1.0);
    const ScalarField b = oracle::random_field(g, 200 + seed, -1.0, 1.0);
    for (Index k = 0; k < F.fx.size(); ++k) F.fx[k] = a.values[k % a.values.size()];
    for (Index k = 0; k < F.fy.size(); ++k) F.fy[k] = b.values[k % b.values.size()];
    const double lhs = node_inner(divergence(F), f);
    const double rhs = -face_inner(F, gradient(f));
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("exhaustive enumeration uses every node as a center") {
  const Grid2D g = Grid2D::unit_square_nodes(9);
  WindowPolicy p = WindowPolicy::exhaustive(2.0 * g.dx());
  const auto w = enumerate_windows(g, p);
  CHECK(static_cast<Index>(w.size()) == g.num_nodes());
}

TEST_CASE("sampled window count by hand") {
  const Grid2D g = Grid2D::unit_square_nodes(33);
  WindowPolicy p;
  p.stride = 2;
  p.r_max = 8.0 * g.dx();
  CHECK(window_radii(g, p).size() == 3);
  CHECK(enumerate_windows(g, p).size() == 17u * 17u * 3u);
}

TEST_CASE("windows have at least four members and strict disc membership") {
  const Grid2D g = Grid2D::unit_square_nodes(33);
  for (const BallWindow& w : enumerate_windows(g, WindowPolicy::sampled(g))) {
    Index count = 0;
    oracle::disc_nodes(g, w.ci, w.cj, w.radius, [&](Index, Index) { ++count; });
    CHECK(window_member_count(g, w) == count);
    CHECK(count >= 4);
  }
}

TEST_CASE("minimum radius beyond the diameter is rejected") {
  const Grid2D g = Grid2D::unit_square_nodes(9);
  WindowPolicy p;
  p.r_min = 2.0 * g.diameter();
  p.r_max = 3.0 * g.diameter();
  CHECK_THROWS_AS(enumerate_windows(g, p), DomainError);
}

TEST_CASE("cylinder levels cover (t_top - R^2, t_top]") {
  const CylinderWindow w{0, 0, 10, 0.1};
  const auto [lo, hi] = cylinder_levels(1e-3, w);
  CHECK(hi == 10);
  CHECK(lo == 1);
  const auto [lo2, hi2] = cylinder_levels(1e-3, CylinderWindow{0, 0, 40, 0.1});
  CHECK(hi2 - lo2 + 1 == 10);
}

TEST_CASE("snapshot files round trip bitwise") {
  const Grid2D g = Grid2D::rectangle(0.7, 1.3, 12, 9, -0.25, 0.1);
  ScalarField f = oracle::random_field(g, 7, -1e3, 1e3);
  f.values[3] = 1e-300;
  f.values[4] = -0.1;
  f.t = 0.123456789012345678;
  std::stringstream ss;
  write_snapshot(ss, f);
  const ScalarField back = read_snapshot(ss);
  CHECK(back == f);
  CHECK(back.grid == g);
}

TEST_CASE("subgrid restriction keeps values and coordinates") {
  const Grid2D g = Grid2D::unit_square_nodes(17);
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return x + 10 * y; });
  const ScalarField r = restrict_field(f, 4, 12, 2, 10);
  CHECK(r.grid.nx() == 8);
  CHECK(r(0, 0) == f(4, 2));
  CHECK(r.grid.x(3) == doctest::Approx(g.x(7)));
}
