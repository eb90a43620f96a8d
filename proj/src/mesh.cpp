#include "degtherm/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace degtherm {

namespace {
int g_thread_override = 0;
}

int thread_count() {
  if (g_thread_override > 0) return g_thread_override;
  if (const char* env = std::getenv("DEGTHERM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void set_thread_count(int n) { g_thread_override = n > 0 ? n : 0; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Grid2D::Grid2D(Index nx, Index ny, double dx, double dy, double x0, double y0)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), x0_(x0), y0_(y0) {
  if (nx < 3 || ny < 3) throw DomainError("grid needs at least 3 cells per axis");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw DomainError("grid spacing must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw DomainError("grid origin must be finite");
}

Grid2D Grid2D::rectangle(double lx, double ly, Index nx, Index ny, double x0, double y0) {
  if (nx <= 0 || ny <= 0) throw DomainError("grid needs at least 3 cells per axis");
  return Grid2D(nx, ny, lx / static_cast<double>(nx), ly / static_cast<double>(ny), x0, y0);
}

void SpaceTimeField::push_back(ScalarField level) {
  if (!(level.grid == grid)) throw DomainError("space-time levels must share one grid");
  if (!levels.empty()) {
    const double expected = levels.back().t + dt;
    if (!(level.t > levels.back().t) ||
        std::abs(level.t - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw DomainError("space-time levels must advance by dt");
  }
  levels.push_back(std::move(level));
}

SpaceTimeField SpaceTimeField::prefix(double horizon) const {
  SpaceTimeField out(grid, dt);
  const double cut = horizon + 1e-9 * dt;
  for (const auto& l : levels) {
    if (l.t > cut) break;
    out.levels.push_back(l);
  }
  return out;
}

ScalarField face_energy_to_nodes(const FaceVectorField& sq) {
  const Grid2D& g = sq.grid;
  ScalarField out(g);
  for (Index j = 0; j <= g.ny(); ++j) {
    for (Index i = 0; i <= g.nx(); ++i) {
      double sx = 0.0;
      int cx = 0;
      if (i > 0) sx += sq.x_face(i - 1, j), ++cx;
      if (i < g.nx()) sx += sq.x_face(i, j), ++cx;
      double sy = 0.0;
      int cy = 0;
      if (j > 0) sy += sq.y_face(i, j - 1), ++cy;
      if (j < g.ny()) sy += sq.y_face(i, j), ++cy;
      out(i, j) = sx / cx + sy / cy;
    }
  }
  return out;
}

Grid2D subgrid(const Grid2D& g, Index i0, Index i1, Index j0, Index j1) {
  if (i0 < 0 || j0 < 0 || i1 > g.nx() || j1 > g.ny() || i1 <= i0 || j1 <= j0)
    throw DomainError("subgrid box outside grid");
  return Grid2D(i1 - i0, j1 - j0, g.dx(), g.dy(), g.x(i0), g.y(j0));
}

ScalarField restrict_field(const ScalarField& f, Index i0, Index i1, Index j0, Index j1) {
  const Grid2D sub = subgrid(f.grid, i0, i1, j0, j1);
  ScalarField out(sub, 0.0, f.t);
  for (Index j = j0; j <= j1; ++j)
    for (Index i = i0; i <= i1; ++i) out(i - i0, j - j0) = f(i, j);
  return out;
}

SpaceTimeField restrict_field(const SpaceTimeField& f, Index i0, Index i1, Index j0, Index j1) {
  SpaceTimeField out(subgrid(f.grid, i0, i1, j0, j1), f.dt);
  for (const auto& l : f.levels) out.levels.push_back(restrict_field(l, i0, i1, j0, j1));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> window_radii(const Grid2D& g, const WindowPolicy& policy) {
  if (policy.stride < 1) throw DomainError("window stride must be >= 1");
  const double h = g.h_min();
  const double r_min = policy.r_min > 0.0 ? policy.r_min : 2.0 * h;
  const double r_max = policy.r_max > 0.0 ? policy.r_max : 0.5 * std::min(g.lx(), g.ly());
  if (r_min < 2.0 * h * (1.0 - 1e-12)) throw DomainError("window radii must be >= 2 min(dx, dy)");
  if (r_min > g.diameter()) throw DomainError("minimum window radius exceeds domain diameter");
  std::vector<double> radii;
  const double slack = 1.0 + 1e-12;
  if (policy.radii == WindowPolicy::Radii::Dyadic) {
    for (double r = r_min; r <= r_max * slack; r *= 2.0) radii.push_back(r);
  } else {
    for (Index k = 0;; ++k) {
      const double r = r_min + static_cast<double>(k) * h;
      if (r > r_max * slack) break;
      radii.push_back(r);
    }
  }
  if (radii.empty()) throw DomainError("empty window family: r_min exceeds r_max");
  return radii;
}

DiscStencil::DiscStencil(const Grid2D& g, double radius) {
  // Strict interior of the disc, shrunk by a relative 1e-12 so that lattice
  // points at distance exactly R are excluded independently of rounding.
  const double r2 = radius * radius * (1.0 - 1e-12);
  rows = static_cast<Index>(std::floor(radius / g.dy()));
  half.resize(static_cast<std::size_t>(2 * rows + 1));
  lattice_count = 0;
  for (Index b = -rows; b <= rows; ++b) {
    const double yy = static_cast<double>(b) * g.dy();
    const double rem = r2 - yy * yy;
    Index a = -1;
    if (rem > 0.0) {
      a = static_cast<Index>(std::floor(std::sqrt(rem) / g.dx()));
      while (a >= 0 && std::pow(static_cast<double>(a) * g.dx(), 2) >= rem) --a;
      while (std::pow(static_cast<double>(a + 1) * g.dx(), 2) < rem) ++a;
    }
    half[static_cast<std::size_t>(b + rows)] = a;
    if (a >= 0) lattice_count += 2 * a + 1;
  }
}

namespace {
Index member_count(const Grid2D& g, const DiscStencil& s, Index ci, Index cj) {
  Index n = 0;
  for (Index b = -s.rows; b <= s.rows; ++b) {
    const Index j = cj + b;
    const Index a = s.half_width(b);
    if (j < 0 || j > g.ny() || a < 0) continue;
    const Index lo = std::max<Index>(0, ci - a);
    const Index hi = std::min<Index>(g.nx(), ci + a);
    if (hi >= lo) n += hi - lo + 1;
  }
  return n;
}
}  // namespace

Index window_member_count(const Grid2D& g, const BallWindow& w) {
  return member_count(g, DiscStencil(g, w.radius), w.ci, w.cj);
}

std::vector<BallWindow> enumerate_windows(const Grid2D& g, const WindowPolicy& policy) {
  std::vector<BallWindow> out;
  for (double r : window_radii(g, policy)) {
    const DiscStencil disc(g, r);
    for (Index j = 0; j <= g.ny(); j += policy.stride)
      for (Index i = 0; i <= g.nx(); i += policy.stride)
        if (member_count(g, disc, i, j) >= 4) out.push_back({i, j, r});
  }
  if (out.empty()) throw DomainError("empty window family");
  return out;
}

std::vector<CylinderWindow> enumerate_cylinders(const Grid2D& g, Index num_levels,
                                                const WindowPolicy& policy) {
  if (policy.time_stride < 1) throw DomainError("time stride must be >= 1");
  std::vector<CylinderWindow> out;
  const auto balls = enumerate_windows(g, policy);
  for (Index k = policy.time_stride; k < num_levels; k += policy.time_stride) {
    for (const auto& b : balls) out.push_back({b.ci, b.cj, k, b.radius});
  }
  if (out.empty()) throw DomainError("empty cylinder family: need at least two time levels");
  return out;
}

// ---------------------------------------------------------------------------

void write_snapshot(std::ostream& os, const ScalarField& f) {
  const Grid2D& g = f.grid;
  os << "FIELD " << g.nx() << ' ' << g.ny() << ' ' << format_double(g.dx()) << ' '
     << format_double(g.dy()) << ' ' << format_double(g.x0()) << ' ' << format_double(g.y0())
     << ' ' << format_double(f.t) << '\n';
  for (Index j = 0; j <= g.ny(); ++j) {
    for (Index i = 0; i <= g.nx(); ++i) {
      if (i) os << ' ';
      os << format_double(f(i, j));
    }
    os << '\n';
  }
}

ScalarField read_snapshot(std::istream& is) {
  std::string tag;
  Index nx = 0, ny = 0;
  double dx = 0, dy = 0, x0 = 0, y0 = 0, t = 0;
  std::string line;
  if (!std::getline(is, line)) throw Error("snapshot: missing header");
  std::istringstream hs(line);
  hs >> tag >> nx >> ny >> dx >> dy >> x0 >> y0 >> t;
  if (!hs || tag != "FIELD") throw Error("snapshot: malformed header '" + line + "'");
  ScalarField f(Grid2D(nx, ny, dx, dy, x0, y0), 0.0, t);
  for (Index j = 0; j <= ny; ++j) {
    for (Index i = 0; i <= nx; ++i) {
      std::string tok;
      if (!(is >> tok)) throw Error("snapshot: truncated data");
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') throw Error("snapshot: bad value '" + tok + "'");
      if (!std::isfinite(v)) throw Error("snapshot: non-finite value");
      f(i, j) = v;
    }
  }
  return f;
}

void write_snapshot_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_snapshot(os, f);
  if (!os) throw Error("write failed for '" + path + "'");
}

ScalarField read_snapshot_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_snapshot(is);
}

}  // namespace degtherm
