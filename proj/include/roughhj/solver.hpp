#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <vector>

#include "roughhj/grid.hpp"
#include "roughhj/hamiltonian.hpp"
#include "roughhj/morphology.hpp"
#include "roughhj/signal.hpp"

namespace roughhj {

enum class Engine { Morphological, LaxFriedrichs };
enum class SubstepOrdering { ErodeFirst, DilateFirst };

// Boundary handling is fixed: clamped one-sided windows for the morphological
// engine and copy extrapolation (zero one-sided differences) for the
// finite-difference engine.  Correctness is guaranteed only inside the
// trusted region reported by evolve.
template <class Scalar = double>
struct SolveConfig {
  Engine engine = Engine::Morphological;
  // Time step ratio ds/dx of the explicit scheme, in (0, 1/sum(alpha)].
  // Nonpositive selects the default 0.4 / sum(alpha).
  Scalar cfl = Scalar(-1);
  // Trotter refinement of the morphological engine: substeps per unit of
  // signal variation.
  int substeps_per_unit_variation = 64;
  SubstepOrdering ordering = SubstepOrdering::ErodeFirst;
  // Radius around the origin that must stay inside the trusted region.
  Scalar observation_radius = Scalar(0);
};

template <class Scalar = double>
struct EvolveReport {
  GridFunction<Scalar> final;
  std::vector<Scalar> segment_sup_changes;
  Scalar dependence_radius{};    // numerical domain of dependence actually used
  Scalar trusted_half_width{};   // half_width - dependence_radius
  double wall_seconds{};
  Engine engine{};
  Scalar dx{};
  int m{};
  Scalar cfl{};
  int segments{};
};

template <class Scalar>
Scalar theta(Scalar x, Scalar y, Scalar R) {
  return clamp01(std::min(x, y) - R + Scalar(1));
}

// u0(x, y) = |x - y| + theta(x, y; R).  The bump is 1-Lipschitz, vanishes on
// {min(x,y) <= R - 1} and equals 1 on {min(x,y) >= R}.
template <class Scalar>
GridFunction<Scalar> bump_ic(const Grid<Scalar>& grid, Scalar R) {
  if (grid.dim != 2) throw ConfigError("bump_ic needs a 2d grid");
  if (!(R <= grid.half_width)) throw ConfigError("bump_ic: R exceeds the grid half-width");
  return GridFunction<Scalar>::sample(
      grid, [R](Scalar x, Scalar y) { return std::abs(x - y) + theta(x, y, R); });
}

template <class Scalar>
GridFunction<Scalar> abs_diff_ic(const Grid<Scalar>& grid) {
  if (grid.dim != 2) throw ConfigError("abs_diff_ic needs a 2d grid");
  return GridFunction<Scalar>::sample(grid,
                                      [](Scalar x, Scalar y) { return std::abs(x - y); });
}

// A - K * (|z| - R)_+ with the Euclidean norm: constant A on the ball B(R),
// cone decay outside.
template <class Scalar>
GridFunction<Scalar> cone_ic(const Grid<Scalar>& grid, Scalar A, Scalar R, Scalar K) {
  if (grid.dim == 1)
    return GridFunction<Scalar>::sample(grid, [=](Scalar x) {
      return A - K * std::max(std::abs(x) - R, Scalar(0));
    });
  return GridFunction<Scalar>::sample(grid, [=](Scalar x, Scalar y) {
    return A - K * std::max(std::hypot(x, y) - R, Scalar(0));
  });
}

// 1d hat (1 - |x|/w)_+ of the given height.
template <class Scalar>
GridFunction<Scalar> hat_ic(const Grid<Scalar>& grid, Scalar height = Scalar(1),
                            Scalar support = Scalar(1)) {
  if (grid.dim != 1) throw ConfigError("hat_ic needs a 1d grid");
  return GridFunction<Scalar>::sample(grid, [=](Scalar x) {
    return height * std::max(Scalar(1) - std::abs(x) / support, Scalar(0));
  });
}

template <class Scalar>
Scalar effective_cfl(const SolveConfig<Scalar>& cfg, const HamiltonianSpec<Scalar>& h) {
  const Scalar cap = Scalar(1) / h.lipschitz_sum();
  if (cfg.cfl <= Scalar(0)) return Scalar(0.4) * cap;
  if (cfg.cfl > cap * (Scalar(1) + Scalar(1e-12)))
    throw ConfigError("cfl exceeds the stability bound 1/sum(alpha)");
  return cfg.cfl;
}

namespace detail {

template <class Scalar>
Index lf_steps_for(Scalar variation, Scalar ds) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(variation / ds * (1 - 1e-15))));
}

template <class Scalar>
Index morph_substeps_for(Scalar variation, int m) {
  return std::max<Index>(
      1, static_cast<Index>(std::ceil(static_cast<double>(m) * variation - 1e-9)));
}

// Cumulative-rounding split of `cells_total` window cells over n substeps:
// target(i) = round(i * cells_total / n).  The per-substep widths are 0, 1 or
// more cells and telescope exactly to cells_total, so a segment propagates by
// round(|delta| * speed / dx) cells regardless of the substep count.
inline Index substep_cells(Index cells_total, Index i, Index n) {
  const auto tgt = [&](Index q) {
    return static_cast<Index>(std::llround(static_cast<double>(cells_total) *
                                           static_cast<double>(q) / static_cast<double>(n)));
  };
  return tgt(i) - tgt(i - 1);
}

// One explicit Lax-Friedrichs step of size ds (in signal time) for the
// Hamiltonian sigma * H.  One-sided differences at the boundary.  With the
// evolution written as du/ds = sigma * H(Du), the monotone update carries the
// dissipation with a plus sign,
//   u += ds * (sigma * H(mid) + sum_i alpha_i/2 (p_i+ - p_i-)),
// equivalently u' = u - ds * Hhat(D-u, D+u) for the numerical flux of the
// transported Hamiltonian -sigma * H.  Under ds <= dx / sum(alpha) every
// partial derivative of the update with respect to a node value is
// nonnegative.
template <class Scalar>
void lf_step(ArrayXX<Scalar>& u, Scalar dx, Scalar ds, int sigma,
             const HamiltonianSpec<Scalar>& h) {
  const Index n = u.rows(), c = u.cols();
  ArrayXX<Scalar> pxp = ArrayXX<Scalar>::Zero(n, c);
  pxp.topRows(n - 1) = (u.bottomRows(n - 1) - u.topRows(n - 1)) / dx;
  ArrayXX<Scalar> pxm = ArrayXX<Scalar>::Zero(n, c);
  pxm.bottomRows(n - 1) = pxp.topRows(n - 1);

  if (h.dim == 1) {
    ArrayXX<Scalar> mid = (pxp + pxm) / Scalar(2);
    ArrayXX<Scalar> hmid;
    if (h.value_1d) {
      hmid = h.value_1d(mid);
    } else {
      hmid.resize(n, c);
      VectorX<Scalar> p(1);
      for (Index i = 0; i < n; ++i) {
        p(0) = mid(i, 0);
        hmid(i, 0) = h.value(p);
      }
    }
    u += ds * (Scalar(sigma) * hmid + h.lipschitz(0) / Scalar(2) * (pxp - pxm));
    return;
  }

  ArrayXX<Scalar> pyp = ArrayXX<Scalar>::Zero(n, c);
  pyp.leftCols(c - 1) = (u.rightCols(c - 1) - u.leftCols(c - 1)) / dx;
  ArrayXX<Scalar> pym = ArrayXX<Scalar>::Zero(n, c);
  pym.rightCols(c - 1) = pyp.leftCols(c - 1);

  ArrayXX<Scalar> midx = (pxp + pxm) / Scalar(2);
  ArrayXX<Scalar> midy = (pyp + pym) / Scalar(2);
  ArrayXX<Scalar> hmid;
  if (h.value_2d) {
    hmid = h.value_2d(midx, midy);
  } else {
    hmid.resize(n, c);
    VectorX<Scalar> p(2);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < n; ++i) {
        p(0) = midx(i, j);
        p(1) = midy(i, j);
        hmid(i, j) = h.value(p);
      }
  }
  u += ds * (Scalar(sigma) * hmid +
             (h.lipschitz(0) / Scalar(2) * (pxp - pxm) + h.lipschitz(1) / Scalar(2) * (pyp - pym)));
}

// Window cells a segment needs along the given speed axis.
template <class Scalar>
Index segment_cells(const MonotoneSegment<Scalar>& seg, Scalar speed, Scalar dx) {
  return static_cast<Index>(std::llround(std::abs(seg.delta) * speed / dx));
}

}  // namespace detail

// Evolves f through one monotone segment of the signal, i.e. applies the
// semigroup of d_s u = sign * H(Du) for signal time |delta|.
//
// Morphological engine (exact sub-semigroups, Trotter interleaving):
//   1d convex H: a single window maximum (up) or minimum (down) of radius
//     |delta| * alpha; this is the exact semigroup, so no substepping.
//   2d saddle H: |delta| is split into ceil(m * |delta|) substeps; each
//     substep erodes the concave axis and dilates the convex axis (order per
//     cfg.ordering), with per-substep window widths split by cumulative
//     rounding so the segment total is round(|delta| * alpha / dx) cells.
//     The two axis operators do not commute, which is why the interleaving
//     must be refined (see the regression test with a 2x2 array).
//
// Lax-Friedrichs engine: explicit monotone steps u += ds * Hhat(D-u, D+u)
// with ds = cfl * dx, final partial step allowed.
template <class Scalar>
GridFunction<Scalar> step_segment(const GridFunction<Scalar>& f, const MonotoneSegment<Scalar>& seg,
                                  const HamiltonianSpec<Scalar>& h, const SolveConfig<Scalar>& cfg) {
  f.validate();
  if (f.grid.dim != h.dim) throw ConfigError("grid and Hamiltonian dimensions differ");
  GridFunction<Scalar> out = f;
  const Scalar dx = f.grid.dx;
  const Scalar var = std::abs(seg.delta);

  if (cfg.engine == Engine::LaxFriedrichs) {
    const Scalar ds = effective_cfl(cfg, h) * dx;
    const Index nsteps = detail::lf_steps_for(var, ds);
    for (Index i = 0; i < nsteps - 1; ++i) detail::lf_step(out.values, dx, ds, seg.sign, h);
    const Scalar last = std::max(var - Scalar(nsteps - 1) * ds, Scalar(0));
    detail::lf_step(out.values, dx, last, seg.sign, h);
    return out;
  }

  if (!h.morphological_supported())
    throw ConfigError("morphological engine needs a 1d convex or 2d saddle Hamiltonian");

  if (h.dim == 1) {
    const Index k = detail::segment_cells(seg, h.lipschitz(0), dx);
    if (seg.sign > 0)
      dilate_axis_cells_inplace(out, 0, k);
    else
      erode_axis_cells_inplace(out, 0, k);
    return out;
  }

  if (cfg.substeps_per_unit_variation < 1)
    throw ConfigError("substeps_per_unit_variation must be at least 1");
  const int conv = h.convex_axis, conc = h.concave_axis;
  const Index cells_conv = detail::segment_cells(seg, h.lipschitz(conv), dx);
  const Index cells_conc = detail::segment_cells(seg, h.lipschitz(conc), dx);
  const Index nsub = detail::morph_substeps_for(var, cfg.substeps_per_unit_variation);
  for (Index i = 1; i <= nsub; ++i) {
    const Index kv = detail::substep_cells(cells_conv, i, nsub);
    const Index kc = detail::substep_cells(cells_conc, i, nsub);
    if (kv == 0 && kc == 0) continue;
    const bool erode_first = cfg.ordering == SubstepOrdering::ErodeFirst;
    if (seg.sign > 0) {
      if (erode_first) {
        erode_axis_cells_inplace(out, conc, kc);
        dilate_axis_cells_inplace(out, conv, kv);
      } else {
        dilate_axis_cells_inplace(out, conv, kv);
        erode_axis_cells_inplace(out, conc, kc);
      }
    } else {
      if (erode_first) {
        erode_axis_cells_inplace(out, conv, kv);
        dilate_axis_cells_inplace(out, conc, kc);
      } else {
        dilate_axis_cells_inplace(out, conc, kc);
        erode_axis_cells_inplace(out, conv, kv);
      }
    }
  }
  return out;
}

// Numerical domain of dependence in length units for the whole path.
template <class Scalar>
Scalar dependence_radius(const DrivingPath<Scalar>& path, const HamiltonianSpec<Scalar>& h,
                         const SolveConfig<Scalar>& cfg, Scalar dx) {
  const auto segs = monotone_decomposition(path);
  if (cfg.engine == Engine::LaxFriedrichs) {
    const Scalar ds = effective_cfl(cfg, h) * dx;
    Index cells = 0;
    for (const auto& s : segs) cells += detail::lf_steps_for(std::abs(s.delta), ds);
    return Scalar(cells) * dx;
  }
  Index cells = 0;
  for (const auto& s : segs) {
    Index c = detail::segment_cells(s, h.lipschitz(0), dx);
    if (h.dim == 2) c = std::max(c, detail::segment_cells(s, h.lipschitz(1), dx));
    cells += c;
  }
  return Scalar(cells) * dx;
}

// Sequential application of step_segment over the monotone decomposition of
// the path.  Requires the grid to cover the observation radius plus the
// numerical domain of dependence; values inside the reported trusted
// half-width are unaffected by the boundary policy.
template <class Scalar>
EvolveReport<Scalar> evolve(const GridFunction<Scalar>& f0, const DrivingPath<Scalar>& path,
                            const HamiltonianSpec<Scalar>& h, const SolveConfig<Scalar>& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  f0.validate();
  const Scalar dx = f0.grid.dx;
  const Scalar dep = dependence_radius(path, h, cfg, dx);
  const Scalar required = cfg.observation_radius + dep + dx;
  if (f0.grid.half_width < required - Scalar(1e-12))
    throw ConfigError("grid half-width " + std::to_string(static_cast<double>(f0.grid.half_width)) +
                      " is insufficient for this run; need at least " +
                      std::to_string(static_cast<double>(required)));

  EvolveReport<Scalar> rep;
  rep.engine = cfg.engine;
  rep.dx = dx;
  rep.m = cfg.substeps_per_unit_variation;
  rep.cfl = cfg.engine == Engine::LaxFriedrichs ? effective_cfl(cfg, h) : Scalar(0);
  rep.dependence_radius = dep;
  rep.trusted_half_width = f0.grid.half_width - dep;

  GridFunction<Scalar> u = f0;
  const auto segs = monotone_decomposition(path);
  rep.segments = static_cast<int>(segs.size());
  for (const auto& seg : segs) {
    GridFunction<Scalar> next = step_segment(u, seg, h, cfg);
    rep.segment_sup_changes.push_back((next.values - u.values).abs().maxCoeff());
    u = std::move(next);
  }
  rep.final = std::move(u);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Values of evolve(...).final at the requested points (nearest node).  Points
// must lie in the trusted region.
template <class Scalar>
std::vector<Scalar> solve_value_at(const GridFunction<Scalar>& f0, const DrivingPath<Scalar>& path,
                                   const HamiltonianSpec<Scalar>& h, const SolveConfig<Scalar>& cfg,
                                   const std::vector<std::array<Scalar, 2>>& points) {
  const EvolveReport<Scalar> rep = evolve(f0, path, h, cfg);
  std::vector<Scalar> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    for (int a = 0; a < f0.grid.dim; ++a)
      if (std::abs(p[static_cast<std::size_t>(a)]) > rep.trusted_half_width + Scalar(1e-12))
        throw DomainError("requested point lies outside the trusted region");
    out.push_back(f0.grid.dim == 1 ? rep.final.at(p[0]) : rep.final.at(p[0], p[1]));
  }
  return out;
}

}  // namespace roughhj
