#include "degtherm/funcnorms.hpp"

#include "degtherm/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace degtherm {

void NormPolicy::validate(const Grid2D& g) const {
  window_radii(g, windows);
  if (windows.time_stride < 1) throw DomainError("time_stride must be >= 1");
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("norm exponent p must be >= 1");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("theta must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("Holder exponent alpha must lie in (0, 1)");
  if (random_pairs < 0) throw DomainError("random_pairs must be >= 0");
}

namespace {

// Stencils for each radius of the family, looked up by exact radius.
class DiscCache {
 public:
  DiscCache(const Grid2D& g, const WindowPolicy& policy) : radii_(window_radii(g, policy)) {
    discs_.reserve(radii_.size());
    for (double r : radii_) discs_.emplace_back(g, r);
  }
  const DiscStencil& get(double r) const {
    const auto it = std::lower_bound(radii_.begin(), radii_.end(), r);
    return discs_[static_cast<std::size_t>(it - radii_.begin())];
  }

 private:
  std::vector<double> radii_;
  std::vector<DiscStencil> discs_;
};

// Visits the member nodes of a window in row order: fn(i, j, weight), with
// weight the clipped cell measure in units of dx dy.
template <typename Fn>
void for_each_member(const Grid2D& g, const DiscStencil& disc, Index ci, Index cj, Fn&& fn) {
  for (Index b = -disc.rows; b <= disc.rows; ++b) {
    const Index j = cj + b;
    const Index a = disc.half_width(b);
    if (j < 0 || j > g.ny() || a < 0) continue;
    const double wy = (j == 0 || j == g.ny()) ? 0.5 : 1.0;
    const Index lo = std::max<Index>(0, ci - a);
    const Index hi = std::min<Index>(g.nx(), ci + a);
    for (Index i = lo; i <= hi; ++i) fn(i, j, (i == 0 || i == g.nx()) ? 0.5 * wy : wy);
  }
}

// Ordered argmax over per-window values: the first maximum wins.
Index argmax(const std::vector<double>& values) {
  Index best = 0;
  for (Index k = 1; k < static_cast<Index>(values.size()); ++k)
    if (values[static_cast<std::size_t>(k)] > values[static_cast<std::size_t>(best)]) best = k;
  return best;
}

NormReport ball_report(const std::string& name, const NormPolicy& policy,
                       const std::vector<BallWindow>& windows, const std::vector<double>& values) {
  NormReport r;
  r.norm = name;
  r.policy = policy;
  r.family_size = static_cast<Index>(windows.size());
  const Index k = argmax(values);
  const BallWindow& w = windows[static_cast<std::size_t>(k)];
  r.value = values[static_cast<std::size_t>(k)];
  r.ci = w.ci;
  r.cj = w.cj;
  r.radius = w.radius;
  return r;
}

template <typename Eval>
NormReport scan_balls(const std::string& name, const Grid2D& g, const NormPolicy& policy,
                      Eval&& eval) {
  policy.validate(g);
  const std::vector<BallWindow> windows = enumerate_windows(g, policy.windows);
  const DiscCache cache(g, policy.windows);
  std::vector<double> values(windows.size());
  parallel_for(static_cast<Index>(windows.size()), [&](Index k) {
    const BallWindow& w = windows[static_cast<std::size_t>(k)];
    values[static_cast<std::size_t>(k)] = eval(w, cache.get(w.radius));
  });
  return ball_report(name, policy, windows, values);
}

bool constant_trace(const ScalarField& f, double& value) {
  const Grid2D& g = f.grid;
  value = f(0, 0);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i)
      if (g.is_boundary(i, j) && f(i, j) != value) return false;
  return true;
}

double clipped_mean(const ScalarField& f, const Grid2D& g, const DiscStencil& disc,
                    const BallWindow& w, double& measure) {
  double s = 0.0;
  measure = 0.0;
  for_each_member(g, disc, w.ci, w.cj, [&](Index i, Index j, double wt) {
    s += wt * f(i, j);
    measure += wt;
  });
  return s / measure;
}

}  // namespace

NormReport bmo_norm(const ScalarField& f, const NormPolicy& policy) {
  const Grid2D& g = f.grid;
  const double c = policy.c_ext;
  return scan_balls("bmo", g, policy, [&](const BallWindow& w, const DiscStencil& disc) {
    const double n = static_cast<double>(disc.lattice_count);
    double inside = 0.0, s = 0.0;
    for_each_member(g, disc, w.ci, w.cj, [&](Index i, Index j, double wt) {
      inside += wt;
      s += wt * (f(i, j) - c);
    });
    const double m = s / n;
    double osc = (n - inside) * std::abs(m);
    for_each_member(g, disc, w.ci, w.cj,
                    [&](Index i, Index j, double wt) { osc += wt * std::abs(f(i, j) - c - m); });
    return osc / n;
  });
}

ScalarField harmonic_extension(const ScalarField& f) {
  double c = 0.0;
  if (constant_trace(f, c)) return ScalarField(f.grid, c, f.t);
  EllipticProblem problem(ScalarField(f.grid, 1.0), f);
  CgOptions cg;
  cg.rtol = 1e-13;
  ScalarField out = solve(problem, cg).phi;
  out.t = f.t;
  return out;
}

NormReport bmo_bar_norm(const ScalarField& f, const ScalarField* boundary_data,
                        const NormPolicy& policy) {
  const Grid2D& g = f.grid;
  ScalarField v = f;
  std::string meta = "boundary extension: none";
  if (boundary_data) {
    if (!(boundary_data->grid == g)) throw DomainError("boundary data must share the field's grid");
    double c = 0.0;
    const bool constant = constant_trace(*boundary_data, c);
    if (!(constant && c == 0.0)) {
      v.values -= harmonic_extension(*boundary_data).values;
      meta = constant ? "boundary extension: constant" : "boundary extension: harmonic";
    }
  }
  NormReport r = scan_balls("bmo_bar", g, policy, [&](const BallWindow& w, const DiscStencil& disc) {
    double measure = 0.0;
    double s = 0.0;
    if (g.is_boundary(w.ci, w.cj)) {
      for_each_member(g, disc, w.ci, w.cj, [&](Index i, Index j, double wt) {
        s += wt * std::abs(v(i, j));
        measure += wt;
      });
      return s / measure;
    }
    const double m = clipped_mean(v, g, disc, w, measure);
    for_each_member(g, disc, w.ci, w.cj,
                    [&](Index i, Index j, double wt) { s += wt * std::abs(v(i, j) - m); });
    return s / measure;
  });
  r.metadata = meta;
  return r;
}

NormReport morrey_norm(const ScalarField& f, const NormPolicy& policy) {
  const Grid2D& g = f.grid;
  const double area = g.cell_area();
  return scan_balls("morrey", g, policy, [&](const BallWindow& w, const DiscStencil& disc) {
    double s = 0.0;
    for_each_member(g, disc, w.ci, w.cj,
                    [&](Index i, Index j, double wt) { s += wt * std::pow(std::abs(f(i, j)), policy.p); });
    return std::pow(std::pow(w.radius, -2.0 * policy.theta) * s * area, 1.0 / policy.p);
  });
}

NormReport campanato_norm(const ScalarField& f, const NormPolicy& policy) {
  const Grid2D& g = f.grid;
  const double area = g.cell_area();
  return scan_balls("campanato", g, policy, [&](const BallWindow& w, const DiscStencil& disc) {
    double measure = 0.0;
    const double m = clipped_mean(f, g, disc, w, measure);
    double s = 0.0;
    for_each_member(g, disc, w.ci, w.cj, [&](Index i, Index j, double wt) {
      s += wt * std::pow(std::abs(f(i, j) - m), policy.p);
    });
    return std::pow(std::pow(w.radius, -2.0 * policy.theta) * s * area, 1.0 / policy.p);
  });
}

NormReport a2_constant(const ScalarField& w, const NormPolicy& policy) {
  const Grid2D& g = w.grid;
  if (!w.all_finite() || !(w.values.minCoeff() > 0.0))
    throw DomainError("A2 weight must be positive and finite at every node");
  const double c = policy.c_ext;
  NormReport r = scan_balls("a2", g, policy, [&](const BallWindow& win, const DiscStencil& disc) {
    // Normalized by the center value so that constant weights give exactly 1.
    const double ref = w(win.ci, win.cj);
    double inside = 0.0, s = 0.0, sinv = 0.0;
    for_each_member(g, disc, win.ci, win.cj, [&](Index i, Index j, double wt) {
      const double v = w(i, j) / ref;
      inside += wt;
      s += wt * v;
      sinv += wt / v;
    });
    double measure = inside;
    if (c > 0.0) {
      measure = static_cast<double>(disc.lattice_count);
      const double vc = c / ref;
      s += (measure - inside) * vc;
      sinv += (measure - inside) / vc;
    }
    return (s / measure) * (sinv / measure);
  });
  r.metadata = c > 0.0 ? "extension: constant" : "extension: none (balls clipped to the domain)";
  return r;
}

// ---------------------------------------------------------------------------
// Cylinder families

namespace {

void check_space_time(const SpaceTimeField& f) {
  if (f.num_levels() < 2) throw DomainError("space-time norm needs at least two time levels");
}

// C_k(j, i') = sum_{1 <= k' <= k} sum_{i < i'} q_{k'}(i, j) dt, with q = weight * density.
class CumulativeRows {
 public:
  CumulativeRows(const SpaceTimeField& q) : g_(q.grid) {
    stride_ = (g_.nx() + 2) * (g_.ny() + 1);
    const Index levels = q.num_levels();
    data_.assign(static_cast<std::size_t>(stride_ * levels), 0.0);
    for (Index k = 1; k < levels; ++k) {
      const ScalarField& f = q.levels[static_cast<std::size_t>(k)];
      for (Index j = 0; j <= g_.ny(); ++j) {
        double run = 0.0;
        const double wy = (j == 0 || j == g_.ny()) ? 0.5 : 1.0;
        at(k, j, 0) = at(k - 1, j, 0);
        for (Index i = 0; i <= g_.nx(); ++i) {
          run += ((i == 0 || i == g_.nx()) ? 0.5 * wy : wy) * f(i, j) * q.dt;
          at(k, j, i + 1) = at(k - 1, j, i + 1) + run;
        }
      }
    }
  }
  double& at(Index k, Index j, Index i) {
    return data_[static_cast<std::size_t>(k * stride_ + j * (g_.nx() + 2) + i)];
  }
  double at(Index k, Index j, Index i) const {
    return data_[static_cast<std::size_t>(k * stride_ + j * (g_.nx() + 2) + i)];
  }

  // Sum over the cylinder in units of dx dy.
  double cylinder(const DiscStencil& disc, const CylinderWindow& w, Index k0, Index k1) const {
    double s = 0.0;
    for (Index b = -disc.rows; b <= disc.rows; ++b) {
      const Index j = w.cj + b;
      const Index a = disc.half_width(b);
      if (j < 0 || j > g_.ny() || a < 0) continue;
      const Index lo = std::max<Index>(0, w.ci - a);
      const Index hi = std::min<Index>(g_.nx(), w.ci + a) + 1;
      s += (at(k1, j, hi) - at(k1, j, lo)) - (at(k0 - 1, j, hi) - at(k0 - 1, j, lo));
    }
    return s;
  }

 private:
  Grid2D g_;
  Index stride_ = 0;
  std::vector<double> data_;
};

NormReport cylinder_report(const std::string& name, const NormPolicy& policy, double dt,
                           const std::vector<CylinderWindow>& windows,
                           const std::vector<double>& values) {
  NormReport r;
  r.norm = name;
  r.policy = policy;
  r.family_size = static_cast<Index>(windows.size());
  const Index k = argmax(values);
  const CylinderWindow& w = windows[static_cast<std::size_t>(k)];
  r.value = values[static_cast<std::size_t>(k)];
  r.ci = w.ci;
  r.cj = w.cj;
  r.ck = w.ck;
  r.radius = w.radius;
  const auto [k0, k1] = cylinder_levels(dt, w);
  r.t_lo = static_cast<double>(k0) * dt;
  r.t_hi = static_cast<double>(k1) * dt;
  return r;
}

template <typename Eval>
NormReport scan_cylinders(const std::string& name, const SpaceTimeField& f,
                          const NormPolicy& policy, Eval&& eval) {
  check_space_time(f);
  policy.validate(f.grid);
  const std::vector<CylinderWindow> windows =
      enumerate_cylinders(f.grid, f.num_levels(), policy.windows);
  const DiscCache cache(f.grid, policy.windows);
  std::vector<double> values(windows.size());
  parallel_for(static_cast<Index>(windows.size()), [&](Index k) {
    const CylinderWindow& w = windows[static_cast<std::size_t>(k)];
    values[static_cast<std::size_t>(k)] = eval(w, cache.get(w.radius));
  });
  return cylinder_report(name, policy, f.dt, windows, values);
}

NormReport density_sup(const std::string& name, const SpaceTimeField& q, const NormPolicy& policy,
                       double root) {
  check_space_time(q);
  const CumulativeRows cum(q);
  const double area = q.grid.cell_area();
  return scan_cylinders(name, q, policy, [&](const CylinderWindow& w, const DiscStencil& disc) {
    const auto [k0, k1] = cylinder_levels(q.dt, w);
    const double s = std::max(0.0, cum.cylinder(disc, w, k0, k1)) * area;
    return std::pow(std::pow(w.radius, -4.0 * policy.theta) * s, root);
  });
}

}  // namespace

NormReport cylinder_density_sup(const SpaceTimeField& density, const NormPolicy& policy) {
  for (const auto& level : density.levels)
    if (!level.all_finite() || level.values.minCoeff() < 0.0)
      throw DomainError("cylinder density must be nonnegative and finite");
  return density_sup("cylinder_density", density, policy, 1.0);
}

NormReport parabolic_morrey_norm(const SpaceTimeField& f, const NormPolicy& policy) {
  SpaceTimeField q(f.grid, f.dt);
  q.levels.reserve(f.levels.size());
  for (const auto& level : f.levels) {
    ScalarField a = level;
    a.values = level.values.array().abs().pow(policy.p).matrix();
    q.levels.push_back(std::move(a));
  }
  return density_sup("parabolic_morrey", q, policy, 1.0 / policy.p);
}

NormReport parabolic_campanato_norm(const SpaceTimeField& f, const NormPolicy& policy) {
  const Grid2D& g = f.grid;
  const double area = g.cell_area();
  return scan_cylinders("parabolic_campanato", f, policy,
                        [&](const CylinderWindow& w, const DiscStencil& disc) {
    const auto [k0, k1] = cylinder_levels(f.dt, w);
    double measure = 0.0, s = 0.0;
    for (Index k = k0; k <= k1; ++k)
      for_each_member(g, disc, w.ci, w.cj, [&](Index i, Index j, double wt) {
        s += wt * f.levels[static_cast<std::size_t>(k)](i, j);
        measure += wt;
      });
    const double m = s / measure;
    double osc = 0.0;
    for (Index k = k0; k <= k1; ++k)
      for_each_member(g, disc, w.ci, w.cj, [&](Index i, Index j, double wt) {
        osc += wt * std::pow(std::abs(f.levels[static_cast<std::size_t>(k)](i, j) - m), policy.p);
      });
    return std::pow(std::pow(w.radius, -4.0 * policy.theta) * osc * area * f.dt, 1.0 / policy.p);
  });
}

// ---------------------------------------------------------------------------
// Holder seminorm

namespace {

struct NodeRef {
  Index i, j, k;
};

struct PairBest {
  double value = -1.0;
  NodeRef a{0, 0, 0}, b{0, 0, 0};
};

class HolderQuotient {
 public:
  HolderQuotient(const SpaceTimeField& f, double alpha) : f_(f), alpha_(alpha) {}
  double operator()(const NodeRef& a, const NodeRef& b) const {
    const Grid2D& g = f_.grid;
    const double dx = static_cast<double>(a.i - b.i) * g.dx();
    const double dy = static_cast<double>(a.j - b.j) * g.dy();
    const double dt = static_cast<double>(a.k - b.k) * f_.dt;
    const double den = std::pow(std::hypot(dx, dy), alpha_) + std::pow(std::abs(dt), 0.5 * alpha_);
    const double diff = f_.levels[static_cast<std::size_t>(a.k)](a.i, a.j) -
                        f_.levels[static_cast<std::size_t>(b.k)](b.i, b.j);
    return std::abs(diff) / den;
  }
  void offer(PairBest& best, const NodeRef& a, const NodeRef& b) const {
    const double q = (*this)(a, b);
    if (q > best.value) best = {q, a, b};
  }

 private:
  const SpaceTimeField& f_;
  double alpha_;
};

NormReport holder_report(const std::string& name, const PairBest& best, double dt, Index pairs) {
  NormReport r;
  r.norm = name;
  r.value = std::max(0.0, best.value);
  r.family_size = pairs;
  r.ci = best.a.i;
  r.cj = best.a.j;
  r.ck = best.a.k;
  r.ci2 = best.b.i;
  r.cj2 = best.b.j;
  r.ck2 = best.b.k;
  r.t_lo = static_cast<double>(std::min(best.a.k, best.b.k)) * dt;
  r.t_hi = static_cast<double>(std::max(best.a.k, best.b.k)) * dt;
  return r;
}

void check_holder_input(const SpaceTimeField& f, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("Holder exponent alpha must lie in (0, 1)");
  if (f.num_levels() < 1 || f.grid.num_nodes() * f.num_levels() < 2)
    throw DomainError("Holder seminorm needs at least two sampled points");
}

}  // namespace

NormReport holder_seminorm(const SpaceTimeField& f, const NormPolicy& policy) {
  check_holder_input(f, policy.alpha);
  if (policy.random_pairs < 0) throw DomainError("random_pairs must be >= 0");
  const Grid2D& g = f.grid;
  const Index levels = f.num_levels();
  const HolderQuotient quotient(f, policy.alpha);

  // Axis pairs at every dyadic separation, one partial maximum per level.
  std::vector<PairBest> per_level(static_cast<std::size_t>(levels));
  std::vector<Index> per_level_count(static_cast<std::size_t>(levels), 0);
  parallel_for(levels, [&](Index k) {
    PairBest best;
    Index count = 0;
    for (Index j = 0; j <= g.ny(); ++j) {
      for (Index i = 0; i <= g.nx(); ++i) {
        const NodeRef a{i, j, k};
        for (Index d = 1; i + d <= g.nx(); d *= 2, ++count) quotient.offer(best, a, {i + d, j, k});
        for (Index d = 1; j + d <= g.ny(); d *= 2, ++count) quotient.offer(best, a, {i, j + d, k});
        for (Index d = 1; k + d < levels; d *= 2, ++count) quotient.offer(best, a, {i, j, k + d});
      }
    }
    per_level[static_cast<std::size_t>(k)] = best;
    per_level_count[static_cast<std::size_t>(k)] = count;
  });
  PairBest best;
  Index pairs = 0;
  for (Index k = 0; k < levels; ++k) {
    const PairBest& b = per_level[static_cast<std::size_t>(k)];
    if (b.value > best.value) best = b;
    pairs += per_level_count[static_cast<std::size_t>(k)];
  }

  // Seeded random batch; raw engine output keeps the sequence platform independent.
  std::mt19937_64 rng(policy.seed);
  const auto draw = [&rng](Index n) { return static_cast<Index>(rng() % static_cast<std::uint64_t>(n)); };
  for (Index n = 0; n < policy.random_pairs; ++n) {
    const NodeRef a{draw(g.nx() + 1), draw(g.ny() + 1), draw(levels)};
    const NodeRef b{draw(g.nx() + 1), draw(g.ny() + 1), draw(levels)};
    if (a.i == b.i && a.j == b.j && a.k == b.k) continue;
    quotient.offer(best, a, b);
    ++pairs;
  }
  NormReport r = holder_report("holder", best, f.dt, pairs);
  r.policy = policy;
  return r;
}

NormReport holder_seminorm_exhaustive(const SpaceTimeField& f, double alpha) {
  check_holder_input(f, alpha);
  const Grid2D& g = f.grid;
  const Index nodes_x = g.nx() + 1;
  const Index per_level = g.num_nodes();
  const Index total = per_level * f.num_levels();
  const HolderQuotient quotient(f, alpha);
  const auto node = [&](Index p) {
    const Index k = p / per_level;
    const Index r = p % per_level;
    return NodeRef{r % nodes_x, r / nodes_x, k};
  };
  std::vector<PairBest> partial(static_cast<std::size_t>(total));
  parallel_for(total, [&](Index p) {
    PairBest best;
    const NodeRef a = node(p);
    for (Index q = p + 1; q < total; ++q) quotient.offer(best, a, node(q));
    partial[static_cast<std::size_t>(p)] = best;
  });
  PairBest best;
  for (const auto& b : partial)
    if (b.value > best.value) best = b;
  NormReport r = holder_report("holder_exhaustive", best, f.dt, total * (total - 1) / 2);
  r.policy.alpha = alpha;
  r.policy.random_pairs = 0;
  return r;
}

// ---------------------------------------------------------------------------

LevelSetTable nirenberg_level_sets(const ScalarField& f, const BallWindow& window,
                                   const std::vector<double>& lambdas) {
  const Grid2D& g = f.grid;
  if (window.ci < 0 || window.ci > g.nx() || window.cj < 0 || window.cj > g.ny() ||
      !(window.radius > 0.0))
    throw DomainError("level-set window must be centered on a grid node with positive radius");
  const DiscStencil disc(g, window.radius);
  LevelSetTable table;
  table.window = window;
  double measure = 0.0;
  table.mean = clipped_mean(f, g, disc, window, measure);
  for (double lambda : lambdas) {
    LevelSetRow row;
    row.lambda = lambda;
    for_each_member(g, disc, window.ci, window.cj, [&](Index i, Index j, double wt) {
      const double d = f(i, j) - table.mean;
      if (std::abs(d) > lambda) row.fraction += wt;
      if (d > lambda) row.upper_fraction += wt;
    });
    row.fraction /= measure;
    row.upper_fraction /= measure;
    table.rows.push_back(row);
  }
  return table;
}

LevelSetTable nirenberg_level_sets(const ScalarField& f, const BallWindow& window, double bmo,
                                   int count) {
  std::vector<double> lambdas;
  for (int j = 0; j < count; ++j) lambdas.push_back(static_cast<double>(j) * bmo);
  LevelSetTable t = nirenberg_level_sets(f, window, lambdas);
  t.bmo = bmo;
  return t;
}

}  // namespace degtherm
