#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "roughhj/grid.hpp"
#include "roughhj/signal.hpp"
#include "roughhj/solver.hpp"

namespace roughhj {

// Two-player dynamics on the pair (x, y), driven by the signal derivative
// split into positive and negative parts (both nonnegative):
//   x' = xi'_+ * alpha + xi'_- * beta,
//   y' = xi'_- * alpha + xi'_+ * beta,
// with controls alpha (maximizer) and beta (minimizer) in [-1, 1].  On rising
// stretches the maximizer drives x and the minimizer drives y; on falling
// stretches the roles swap.

template <class Scalar = double>
struct GameConfig {
  Grid<Scalar> grid;                   // d = 2
  int substeps_per_segment = 20;       // backward-induction substeps per monotone segment
  int control_levels = 3;              // odd, >= 3; discretization of [-1, 1]
  GridFunction<Scalar> terminal;       // v(T, .)
  Scalar observation_radius = Scalar(0);
  bool store_slices = true;

  void validate() const {
    grid.validate();
    if (grid.dim != 2) throw ConfigError("the game runs on a 2d grid");
    if (substeps_per_segment < 1) throw ConfigError("substeps_per_segment must be >= 1");
    if (control_levels < 3 || control_levels % 2 == 0)
      throw ConfigError("control_levels must be odd and at least 3");
    terminal.validate();
    if (!(terminal.grid == grid)) throw ConfigError("terminal data must live on the game grid");
  }
};

// Backward value slices; slices[0] holds v(T, .) = terminal data and times
// decrease from T to 0.
template <class Scalar = double>
struct ValueTable {
  std::vector<Scalar> times;
  std::vector<GridFunction<Scalar>> slices;

  const GridFunction<Scalar>& initial_slice() const { return slices.back(); }
  Scalar value_at_origin() const {
    const auto& f = slices.back();
    const Index c = f.grid.center();
    return f.values(c, c);
  }
};

namespace detail {

// out(i, j) = v(clamp(i + q), j).
template <class Scalar>
ArrayXX<Scalar> row_shift_clamped(const ArrayXX<Scalar>& v, Index q) {
  const Index n = v.rows();
  ArrayXX<Scalar> out(n, v.cols());
  if (q >= n || -q >= n) {
    out.rowwise() = v.row(q > 0 ? n - 1 : 0);
    return out;
  }
  if (q >= 0) {
    out.topRows(n - q) = v.bottomRows(n - q);
    if (q > 0) out.bottomRows(q).rowwise() = v.row(n - 1);
  } else {
    out.bottomRows(n + q) = v.topRows(n + q);
    out.topRows(-q).rowwise() = v.row(0);
  }
  return out;
}

template <class Scalar>
ArrayXX<Scalar> col_shift_clamped(const ArrayXX<Scalar>& v, Index q) {
  const Index n = v.cols();
  ArrayXX<Scalar> out(v.rows(), n);
  if (q >= n || -q >= n) {
    out.colwise() = v.col(q > 0 ? n - 1 : 0);
    return out;
  }
  if (q >= 0) {
    out.leftCols(n - q) = v.rightCols(n - q);
    if (q > 0) out.rightCols(q).colwise() = v.col(n - 1);
  } else {
    out.rightCols(n + q) = v.leftCols(n + q);
    out.leftCols(-q).colwise() = v.col(0);
  }
  return out;
}

// Linear interpolation of v at a uniform shift of `cells` grid cells along
// the rows / columns, clamped at the edges.  Nonnegative weights, so the
// lookup preserves monotonicity of the dynamic-programming operator.
template <class Scalar>
ArrayXX<Scalar> row_interp(const ArrayXX<Scalar>& v, Scalar cells) {
  const Scalar qf = std::floor(cells);
  const Index q = static_cast<Index>(qf);
  const Scalar f = cells - qf;
  if (f == Scalar(0)) return row_shift_clamped(v, q);
  return ((Scalar(1) - f) * row_shift_clamped(v, q) + f * row_shift_clamped(v, q + 1)).eval();
}

template <class Scalar>
ArrayXX<Scalar> col_interp(const ArrayXX<Scalar>& v, Scalar cells) {
  const Scalar qf = std::floor(cells);
  const Index q = static_cast<Index>(qf);
  const Scalar f = cells - qf;
  if (f == Scalar(0)) return col_shift_clamped(v, q);
  return ((Scalar(1) - f) * col_shift_clamped(v, q) + f * col_shift_clamped(v, q + 1)).eval();
}

// One backward substep of signal increment delta (> 0): on rising substeps
//   v(x, y) <- max_a min_b v(x + a delta, y + b delta),
// on falling substeps a acts on y and b on x.  Bilinear lookups are the
// tensor product of the two axis interpolations.
template <class Scalar>
ArrayXX<Scalar> dp_substep(const ArrayXX<Scalar>& v, int sign, Scalar delta_cells,
                           const ArrayX<Scalar>& levels) {
  ArrayXX<Scalar> best;
  for (Index la = 0; la < levels.size(); ++la) {
    const Scalar a = levels(la);
    const ArrayXX<Scalar> va = sign > 0 ? row_interp(v, a * delta_cells)
                                        : col_interp(v, a * delta_cells);
    ArrayXX<Scalar> worst;
    for (Index lb = 0; lb < levels.size(); ++lb) {
      const Scalar b = levels(lb);
      ArrayXX<Scalar> vb = sign > 0 ? col_interp(va, b * delta_cells)
                                    : row_interp(va, b * delta_cells);
      worst = lb == 0 ? std::move(vb) : worst.min(vb).eval();
    }
    best = la == 0 ? std::move(worst) : best.max(worst).eval();
  }
  return best;
}

// Time inside the segment at which |xi - xi(t_start)| reaches `var`.
template <class Scalar>
Scalar segment_time_at_variation(const DrivingPath<Scalar>& path, const MonotoneSegment<Scalar>& seg,
                                 Scalar var) {
  if (var <= Scalar(0)) return seg.t_start;
  const auto& t = path.times();
  const auto& v = path.values();
  Scalar acc = Scalar(0);
  for (Index i = 0; i + 1 < t.size(); ++i) {
    if (t(i + 1) <= seg.t_start || t(i) >= seg.t_end) continue;
    const Scalar dv = std::abs(v(i + 1) - v(i));
    if (acc + dv >= var) {
      const Scalar w = dv == Scalar(0) ? Scalar(0) : (var - acc) / dv;
      return t(i) + w * (t(i + 1) - t(i));
    }
    acc += dv;
  }
  return seg.t_end;
}

}  // namespace detail

// Backward dynamic-programming value of the game: within each monotone
// segment (taken in reverse time order) the signal increment is split into
// cfg.substeps_per_segment equal substeps, each applying the max-min lookup
// of dp_substep.  The terminal slice is cfg.terminal.
template <class Scalar>
ValueTable<Scalar> dp_value(const DrivingPath<Scalar>& path, const GameConfig<Scalar>& cfg) {
  cfg.validate();
  const Scalar dx = cfg.grid.dx;
  const Scalar tv = total_variation(path);
  const Scalar required = cfg.observation_radius + tv + 2 * dx;
  if (cfg.grid.half_width < required - Scalar(1e-12))
    throw ConfigError("game grid half-width insufficient; need at least " +
                      std::to_string(static_cast<double>(required)));

  const ArrayX<Scalar> levels = ArrayX<Scalar>::LinSpaced(cfg.control_levels, Scalar(-1), Scalar(1));
  ValueTable<Scalar> table;
  GridFunction<Scalar> v = cfg.terminal;
  table.times.push_back(path.horizon());
  if (cfg.store_slices) table.slices.push_back(v);

  const auto segs = monotone_decomposition(path);
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    const auto& seg = *it;
    const Index nsub = cfg.substeps_per_segment;
    const Scalar var = std::abs(seg.delta);
    const Scalar step_cells = var / Scalar(nsub) / dx;
    for (Index k = 1; k <= nsub; ++k) {
      v.values = detail::dp_substep(v.values, seg.sign, step_cells, levels);
      const Scalar t = detail::segment_time_at_variation(path, seg, var * Scalar(nsub - k) / Scalar(nsub));
      table.times.push_back(t);
      if (cfg.store_slices) table.slices.push_back(v);
    }
  }
  if (table.times.back() != Scalar(0)) {
    table.times.push_back(Scalar(0));
    if (cfg.store_slices) table.slices.push_back(v);
  }
  if (!cfg.store_slices) table.slices.push_back(std::move(v));
  return table;
}

// Piecewise-constant control on [0, T]: values[k] on [breaks[k], breaks[k+1]).
template <class Scalar = double>
struct PiecewiseConstantControl {
  ArrayX<Scalar> breaks;
  ArrayX<Scalar> values;

  void validate() const {
    if (breaks.size() < 2 || values.size() != breaks.size() - 1)
      throw ConfigError("control needs n+1 breakpoints for n values");
    for (Index i = 0; i + 1 < breaks.size(); ++i)
      if (!(breaks(i) < breaks(i + 1))) throw ConfigError("control breakpoints must increase");
    if ((values.abs() > Scalar(1) + Scalar(1e-12)).any())
      throw ConfigError("control values must lie in [-1, 1]");
  }

  static PiecewiseConstantControl constant(Scalar value, Scalar T) {
    PiecewiseConstantControl c;
    c.breaks = ArrayX<Scalar>(2);
    c.breaks << Scalar(0), T;
    c.values = ArrayX<Scalar>::Constant(1, value);
    return c;
  }

  Scalar operator()(Scalar t) const {
    const Index n = values.size();
    for (Index i = 0; i < n; ++i)
      if (t < breaks(i + 1)) return values(i);
    return values(n - 1);
  }

  // Copy with every piece at or after time t replaced by a different value;
  // used to probe progressivity of custom strategies.
  PiecewiseConstantControl flipped_after(Scalar t) const {
    PiecewiseConstantControl c = *this;
    for (Index i = 0; i < c.values.size(); ++i)
      if (c.breaks(i) >= t) c.values(i) = c.values(i) == Scalar(0) ? Scalar(1) : -c.values(i);
    return c;
  }
};

template <class Scalar = double>
struct Strategy {
  enum class Kind { DeltaEps, Constant, Custom };
  using CustomFn = std::function<Scalar(Scalar, const PiecewiseConstantControl<Scalar>&)>;

  Kind kind = Kind::Constant;
  Scalar eps = Scalar(0);    // DeltaEps
  Scalar level = Scalar(0);  // Constant
  CustomFn custom;           // Custom: alpha(t) from (t, beta); must be progressive
};

// The maximizer strategy: alpha = 1 until the first time the gap of the
// alpha == 1 trajectory reaches eps, then alpha copies beta, which freezes
// |x - y| since both coordinates share the velocity |xi'| beta.
template <class Scalar>
Strategy<Scalar> delta_eps(Scalar eps) {
  if (!(eps > Scalar(0)) || !(eps < Scalar(1)))
    throw ConfigError("delta_eps requires eps in (0, 1)");
  Strategy<Scalar> s;
  s.kind = Strategy<Scalar>::Kind::DeltaEps;
  s.eps = eps;
  return s;
}

template <class Scalar>
Strategy<Scalar> constant_strategy(Scalar level) {
  if (std::abs(level) > Scalar(1)) throw ConfigError("constant strategy level must be in [-1, 1]");
  Strategy<Scalar> s;
  s.kind = Strategy<Scalar>::Kind::Constant;
  s.level = level;
  return s;
}

// Controlled pair (x, y) with the controls that produced it.  Positions are
// exact integrals of the piecewise-constant dynamics, so they are piecewise
// linear between the recorded breakpoints.
template <class Scalar = double>
struct Trajectory {
  DrivingPath<Scalar> path;
  std::vector<Scalar> times;                // breakpoints, including 0 and T
  std::vector<Scalar> x, y;                 // positions at the breakpoints
  std::vector<Scalar> alpha, beta;          // per-interval control values
  std::optional<Scalar> tau;                // first time |x - y| >= eps, delta_eps only
  typename Strategy<Scalar>::Kind strategy_kind;
  Scalar strategy_eps = Scalar(0);

  Scalar horizon() const { return times.back(); }
  Scalar x_final() const { return x.back(); }
  Scalar y_final() const { return y.back(); }

  Scalar x_at(Scalar t) const { return interp(times, x, t); }
  Scalar y_at(Scalar t) const { return interp(times, y, t); }

 private:
  static Scalar interp(const std::vector<Scalar>& ts, const std::vector<Scalar>& vs, Scalar t) {
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const Scalar w = (t - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
    return vs[hi - 1] + w * (vs[hi] - vs[hi - 1]);
  }
};

// J = |x(T) - y(T)| + theta(x(T), y(T); R), the same bump as bump_ic.
template <class Scalar>
Scalar payoff(const Trajectory<Scalar>& traj, Scalar R) {
  const Scalar xT = traj.x_final(), yT = traj.y_final();
  return std::abs(xT - yT) + theta(xT, yT, R);
}

namespace detail {

// Piece boundaries of the integration: knot times, control breakpoints and,
// when dt > 0, sampling times k * dt.  Sampling times that fall within a
// floating-point whisker of a structural cut are dropped so no degenerate
// piece straddles a slope or control change.
template <class Scalar>
std::vector<Scalar> merge_times(const DrivingPath<Scalar>& path,
                                const PiecewiseConstantControl<Scalar>& beta, Scalar dt) {
  const Scalar T = path.horizon();
  std::vector<Scalar> cuts;
  for (Index i = 0; i < path.knot_count(); ++i) cuts.push_back(path.times()(i));
  for (Index i = 0; i < beta.breaks.size(); ++i)
    if (beta.breaks(i) <= T) cuts.push_back(beta.breaks(i));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.back() != T) cuts.push_back(T);
  if (dt > Scalar(0)) {
    const Scalar tol = T * Scalar(1e-12);
    std::vector<Scalar> merged = cuts;
    for (Index k = 1; Scalar(k) * dt < T; ++k) {
      const Scalar s = Scalar(k) * dt;
      const auto it = std::lower_bound(cuts.begin(), cuts.end(), s);
      if (it != cuts.end() && *it - s < tol) continue;
      if (it != cuts.begin() && s - *(it - 1) < tol) continue;
      merged.push_back(s);
    }
    std::sort(merged.begin(), merged.end());
    cuts.swap(merged);
  }
  return cuts;
}

// Inserts t into the sorted cut list unless an existing cut sits within a
// floating-point whisker, in which case that cut is returned instead.
template <class Scalar>
Scalar insert_cut(std::vector<Scalar>& cuts, Scalar t) {
  const Scalar tol = cuts.back() * Scalar(1e-12);
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), t);
  if (it != cuts.end() && *it - t <= tol) return *it;
  if (it != cuts.begin() && t - *(it - 1) <= tol) return *(it - 1);
  cuts.insert(it, t);
  return t;
}

template <class Scalar>
Scalar piece_slope(const DrivingPath<Scalar>& path, Scalar a, Scalar b) {
  return (path(b) - path(a)) / (b - a);
}

// First time the gap of the alpha == 1 auxiliary trajectory reaches eps.
// The gap derivative is xi'(t) * (1 - beta(t)), constant on each piece, so
// the crossing is solved exactly.
template <class Scalar>
std::optional<Scalar> first_gap_crossing(const DrivingPath<Scalar>& path,
                                         const PiecewiseConstantControl<Scalar>& beta,
                                         const std::vector<Scalar>& cuts, Scalar eps) {
  Scalar gap = Scalar(0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Scalar a = cuts[k], b = cuts[k + 1];
    const Scalar rate = piece_slope(path, a, b) * (Scalar(1) - beta((a + b) / Scalar(2)));
    const Scalar end = gap + rate * (b - a);
    if (std::abs(end) >= eps) {
      const Scalar target = rate > Scalar(0) ? eps : -eps;
      return a + (target - gap) / rate;
    }
    gap = end;
  }
  return std::nullopt;
}

}  // namespace detail

// Integrates the pair dynamics exactly against the given strategy and
// minimizer control.  dt only adds sampling points to the recorded
// trajectory; integration is exact on every constant piece regardless.
template <class Scalar>
Trajectory<Scalar> simulate(const DrivingPath<Scalar>& path, const Strategy<Scalar>& strat,
                            const PiecewiseConstantControl<Scalar>& beta, Scalar dt = Scalar(0)) {
  beta.validate();
  const Scalar T = path.horizon();
  if (beta.breaks(0) != Scalar(0) || beta.breaks(beta.breaks.size() - 1) < T - Scalar(1e-12))
    throw ConfigError("minimizer control must span [0, T]");

  std::vector<Scalar> cuts = detail::merge_times(path, beta, dt);

  std::optional<Scalar> tau;
  if (strat.kind == Strategy<Scalar>::Kind::DeltaEps) {
    tau = detail::first_gap_crossing(path, beta, cuts, strat.eps);
    if (tau) tau = detail::insert_cut(cuts, *tau);
  }

  Trajectory<Scalar> traj{path, {}, {}, {}, {}, {}, tau, strat.kind, strat.eps};
  traj.times.push_back(Scalar(0));
  traj.x.push_back(Scalar(0));
  traj.y.push_back(Scalar(0));

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Scalar a = cuts[k], b = cuts[k + 1];
    const Scalar mid = (a + b) / Scalar(2);
    const Scalar rate = detail::piece_slope(path, a, b);
    const Scalar xp = std::max(rate, Scalar(0)), xm = std::max(-rate, Scalar(0));
    const Scalar bv = beta(mid);
    Scalar av;
    switch (strat.kind) {
      case Strategy<Scalar>::Kind::DeltaEps:
        av = (tau && a >= *tau) ? bv : Scalar(1);
        break;
      case Strategy<Scalar>::Kind::Constant:
        av = strat.level;
        break;
      case Strategy<Scalar>::Kind::Custom: {
        av = strat.custom(a, beta);
        // Progressivity probe: the response at time a may not depend on the
        // control after a.
        const Scalar probe = strat.custom(a, beta.flipped_after(b));
        if (probe != av) throw ContractError("custom strategy is not progressive");
        if (std::abs(av) > Scalar(1) + Scalar(1e-12))
          throw ContractError("custom strategy returned a value outside [-1, 1]");
        break;
      }
    }
    traj.x.push_back(traj.x.back() + (xp * av + xm * bv) * (b - a));
    traj.y.push_back(traj.y.back() + (xm * av + xp * bv) * (b - a));
    traj.times.push_back(b);
    traj.alpha.push_back(av);
    traj.beta.push_back(bv);
  }
  return traj;
}

template <class Scalar = double>
struct InductionCheck {
  bool ok = true;
  int witness = -1;               // first violated index, -1 if none
  std::vector<Scalar> margins;    // min{x,y}(t_i) - bound_i
};

// Verifies min{x(t_i), y(t_i)} >= sum_{j<i} |xi(t_{j+1}) - xi(t_j)| - i*eps
// along the partition.  Applies only to trajectories played against
// delta_eps(eps) whose gap never reached eps.
template <class Scalar>
InductionCheck<Scalar> induction_check(const Trajectory<Scalar>& traj,
                                       const Partition<Scalar>& partition, Scalar eps) {
  if (traj.strategy_kind != Strategy<Scalar>::Kind::DeltaEps)
    throw ContractError("induction_check needs a trajectory played against delta_eps");
  if (traj.tau.has_value())
    throw ContractError("induction_check does not apply once the gap reached eps");
  const auto& pt = partition.times();
  if (std::abs(pt(pt.size() - 1) - traj.horizon()) > Scalar(1e-12))
    throw ContractError("partition must end at the trajectory horizon");

  InductionCheck<Scalar> res;
  const Scalar slack = Scalar(1e-9);
  Scalar increments = Scalar(0);
  for (Index i = 0; i < pt.size(); ++i) {
    if (i > 0) increments += std::abs(traj.path(pt(i)) - traj.path(pt(i - 1)));
    const Scalar bound = increments - Scalar(i) * eps;
    const Scalar have = std::min(traj.x_at(pt(i)), traj.y_at(pt(i)));
    res.margins.push_back(have - bound);
    if (res.ok && have < bound - slack) {
      res.ok = false;
      res.witness = static_cast<int>(i);
    }
  }
  return res;
}

template <class Scalar = double>
struct ControlFamily {
  int pieces = 8;             // equal subdivisions of [0, T]
  int levels = 3;             // odd, >= 3
  long long cap = 2'000'000;  // maximum number of controls to enumerate
};

template <class Scalar = double>
struct AdversaryResult {
  PiecewiseConstantControl<Scalar> minimizer;
  Scalar payoff{};
  long long evaluated = 0;
};

// Exhaustive minimizer search over piecewise-constant controls with values in
// the discretized control set.
template <class Scalar>
AdversaryResult<Scalar> adversary_search(const DrivingPath<Scalar>& path,
                                         const Strategy<Scalar>& strat, Scalar R,
                                         const ControlFamily<Scalar>& family) {
  if (family.pieces < 1 || family.pieces > 12)
    throw ConfigError("control family supports 1..12 pieces");
  if (family.levels < 3 || family.levels % 2 == 0)
    throw ConfigError("control family levels must be odd and at least 3");
  long long total = 1;
  for (int i = 0; i < family.pieces; ++i) {
    total *= family.levels;
    if (total > family.cap)
      throw ConfigError("control family search space exceeds the configured cap");
  }

  const Scalar T = path.horizon();
  const ArrayX<Scalar> levels = ArrayX<Scalar>::LinSpaced(family.levels, Scalar(-1), Scalar(1));
  PiecewiseConstantControl<Scalar> beta;
  beta.breaks = ArrayX<Scalar>::LinSpaced(family.pieces + 1, Scalar(0), T);
  beta.values = ArrayX<Scalar>::Zero(family.pieces);

  AdversaryResult<Scalar> best;
  best.payoff = std::numeric_limits<Scalar>::infinity();
  for (long long it = 0; it < total; ++it) {
    long long code = it;
    for (int p = 0; p < family.pieces; ++p) {
      beta.values(p) = levels(code % family.levels);
      code /= family.levels;
    }
    const Trajectory<Scalar> traj = simulate(path, strat, beta);
    const Scalar j = payoff(traj, R);
    ++best.evaluated;
    if (j < best.payoff) {
      best.payoff = j;
      best.minimizer = beta;
    }
  }
  return best;
}

// Closed-loop best response of the minimizer against delta_eps(eps), by
// backward induction over the state (x, y, phase).  Pre-phase the maximizer
// control is pinned at 1; the phase flips when the post-move gap reaches eps,
// after which both coordinates move together with the minimizer.  Used as an
// upper-bound oracle when the open-loop family is too coarse.
template <class Scalar>
Scalar best_response_value(const DrivingPath<Scalar>& path, Scalar eps, Scalar R,
                           const GameConfig<Scalar>& cfg) {
  cfg.validate();
  const Index n = cfg.grid.nodes();
  const Scalar dx = cfg.grid.dx;
  const ArrayX<Scalar> levels = ArrayX<Scalar>::LinSpaced(cfg.control_levels, Scalar(-1), Scalar(1));

  ArrayX<Scalar> coords(n);
  for (Index i = 0; i < n; ++i) coords(i) = cfg.grid.coord(i);

  ArrayXX<Scalar> v_pre = cfg.terminal.values;
  ArrayXX<Scalar> v_post = cfg.terminal.values;

  const auto segs = monotone_decomposition(path);
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    const auto& seg = *it;
    const Index nsub = cfg.substeps_per_segment;
    const Scalar delta = std::abs(seg.delta) / Scalar(nsub);
    const Scalar s = delta / dx;
    for (Index k = 0; k < nsub; ++k) {
      // Post phase: both coordinates move b*delta.
      ArrayXX<Scalar> post_new;
      for (Index lb = 0; lb < levels.size(); ++lb) {
        const Scalar b = levels(lb);
        ArrayXX<Scalar> cand = detail::col_interp(detail::row_interp(v_post, b * s), b * s);
        post_new = lb == 0 ? std::move(cand) : post_new.min(cand).eval();
      }
      // Pre phase: the maximizer coordinate advances by delta, the minimizer
      // coordinate by b*delta; crossing the eps gap hands over to the post
      // phase.
      ArrayXX<Scalar> pre_new;
      const ArrayXX<Scalar> pre_shift =
          seg.sign > 0 ? detail::row_interp(v_pre, s) : detail::col_interp(v_pre, s);
      const ArrayXX<Scalar> post_shift =
          seg.sign > 0 ? detail::row_interp(v_post, s) : detail::col_interp(v_post, s);
      for (Index lb = 0; lb < levels.size(); ++lb) {
        const Scalar b = levels(lb);
        ArrayXX<Scalar> cand_pre = seg.sign > 0 ? detail::col_interp(pre_shift, b * s)
                                                : detail::row_interp(pre_shift, b * s);
        ArrayXX<Scalar> cand_post = seg.sign > 0 ? detail::col_interp(post_shift, b * s)
                                                 : detail::row_interp(post_shift, b * s);
        // Gap after the move at node (i, j).
        ArrayXX<Scalar> gap(n, n);
        for (Index j = 0; j < n; ++j) {
          const Scalar moved_y = seg.sign > 0 ? coords(j) + b * delta : coords(j) + delta;
          const Scalar shift_x = seg.sign > 0 ? delta : b * delta;
          gap.col(j) = (coords + shift_x - moved_y).abs();
        }
        ArrayXX<Scalar> cand = (gap >= eps - Scalar(1e-12)).select(cand_post, cand_pre);
        pre_new = lb == 0 ? std::move(cand) : pre_new.min(cand).eval();
      }
      v_post = std::move(post_new);
      v_pre = std::move(pre_new);
    }
  }
  const Index c = cfg.grid.center();
  return v_pre(c, c);
}

template <class Scalar = double>
struct IsaacsResult {
  Scalar lhs{};
  Scalar rhs{};
  Scalar gap{};
};

// Pointwise check of the sup-inf form of the Hamiltonian:
//   (|p_x| - |p_y|) * xi' = max_a min_b { xi'_+ (a p_x + b p_y)
//                                       + xi'_- (a p_y + b p_x) },
// with a, b running over the discretized control set.
template <class Scalar>
IsaacsResult<Scalar> isaacs_identity(Scalar px, Scalar py, Scalar xi_dot, int levels) {
  if (levels < 3) throw ConfigError("isaacs_identity needs at least 3 control levels");
  const Scalar xp = std::max(xi_dot, Scalar(0)), xm = std::max(-xi_dot, Scalar(0));
  const ArrayX<Scalar> grid = ArrayX<Scalar>::LinSpaced(levels, Scalar(-1), Scalar(1));
  Scalar rhs = -std::numeric_limits<Scalar>::infinity();
  for (Index ia = 0; ia < grid.size(); ++ia) {
    const Scalar a = grid(ia);
    Scalar inner = std::numeric_limits<Scalar>::infinity();
    for (Index ib = 0; ib < grid.size(); ++ib) {
      const Scalar b = grid(ib);
      inner = std::min(inner, xp * (a * px + b * py) + xm * (a * py + b * px));
    }
    rhs = std::max(rhs, inner);
  }
  IsaacsResult<Scalar> res;
  res.lhs = (std::abs(px) - std::abs(py)) * xi_dot;
  res.rhs = rhs;
  res.gap = std::abs(res.lhs - res.rhs);
  return res;
}

}  // namespace roughhj
