#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "roughhj/common.hpp"

namespace roughhj {

// Continuous piecewise-linear driving signal xi on [0, T], stored as knots.
// Evaluation between knots is linear interpolation; evaluation at a knot
// returns the stored value exactly.  Immutable after construction.
template <class Scalar = double>
class DrivingPath {
 public:
  DrivingPath(ArrayX<Scalar> times, ArrayX<Scalar> values)
      : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size() || times_.size() < 2)
      throw ConfigError("driving path needs matching time/value knots, at least two of each");
    if (!(times_(0) == Scalar(0)))
      throw ConfigError("driving path must start at t = 0");
    for (Index i = 0; i + 1 < times_.size(); ++i)
      if (!(times_(i) < times_(i + 1)))
        throw ConfigError("driving path knot times must be strictly increasing");
    if (!values_.isFinite().all())
      throw ConfigError("driving path values must be finite");
  }

  static DrivingPath from_knots(const std::vector<std::pair<Scalar, Scalar>>& knots) {
    ArrayX<Scalar> t(static_cast<Index>(knots.size())), v(static_cast<Index>(knots.size()));
    for (Index i = 0; i < t.size(); ++i) {
      t(i) = knots[static_cast<std::size_t>(i)].first;
      v(i) = knots[static_cast<std::size_t>(i)].second;
    }
    return DrivingPath(std::move(t), std::move(v));
  }

  const ArrayX<Scalar>& times() const { return times_; }
  const ArrayX<Scalar>& values() const { return values_; }
  Index knot_count() const { return times_.size(); }
  Scalar horizon() const { return times_(times_.size() - 1); }

  // Linear interpolation; throws DomainError outside [0, T].
  Scalar operator()(Scalar t) const {
    const Index n = times_.size();
    if (!(t >= Scalar(0)) || !(t <= horizon()))
      throw DomainError("signal evaluated outside [0, T]");
    const Scalar* tb = times_.data();
    Index hi = std::lower_bound(tb, tb + n, t) - tb;  // first knot time >= t
    if (hi < n && times_(hi) == t) return values_(hi);
    const Index lo = hi - 1;
    const Scalar w = (t - times_(lo)) / (times_(hi) - times_(lo));
    return values_(lo) + w * (values_(hi) - values_(lo));
  }

 private:
  ArrayX<Scalar> times_, values_;
};

template <class Scalar>
Scalar eval(const DrivingPath<Scalar>& path, Scalar t) {
  return path(t);
}

// One maximal same-sign stretch of the signal.  Constant stretches are not
// part of any segment; segments tile [0, T] up to those.
template <class Scalar = double>
struct MonotoneSegment {
  Scalar t_start{};
  Scalar t_end{};
  Scalar delta{};  // xi(t_end) - xi(t_start), nonzero
  int sign{};      // +1 or -1, equals sign(delta)
};

// Ordered partition times t0 <= t1 <= ... <= tn with t0 = 0.  Consumers check
// tn against the horizon they pair the partition with.
template <class Scalar = double>
class Partition {
 public:
  explicit Partition(ArrayX<Scalar> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw ConfigError("partition needs at least one increment");
    if (!(times_(0) == Scalar(0))) throw ConfigError("partition must start at 0");
    for (Index i = 0; i + 1 < times_.size(); ++i)
      if (times_(i) > times_(i + 1)) throw ConfigError("partition times must be nondecreasing");
  }

  const ArrayX<Scalar>& times() const { return times_; }
  Index increments() const { return times_.size() - 1; }

 private:
  ArrayX<Scalar> times_;
};

template <class Scalar>
Scalar total_variation(const DrivingPath<Scalar>& path) {
  const auto& v = path.values();
  const Index n = v.size();
  return (v.tail(n - 1) - v.head(n - 1)).abs().sum();
}

// max - min of the signal over [0, t].
template <class Scalar>
Scalar oscillation(const DrivingPath<Scalar>& path, Scalar t) {
  const Scalar vt = path(t);  // domain check included
  Scalar lo = vt, hi = vt;
  for (Index i = 0; i < path.knot_count() && path.times()(i) <= t; ++i) {
    lo = std::min(lo, path.values()(i));
    hi = std::max(hi, path.values()(i));
  }
  return hi - lo;
}

// Maximal same-sign runs of knot increments, in time order.  Zero increments
// terminate a run, so a flat stretch separates segments.  The absolute deltas
// sum exactly to the total variation.
template <class Scalar>
std::vector<MonotoneSegment<Scalar>> monotone_decomposition(const DrivingPath<Scalar>& path) {
  std::vector<MonotoneSegment<Scalar>> out;
  const auto& t = path.times();
  const auto& v = path.values();
  bool open = false;
  MonotoneSegment<Scalar> cur{};
  for (Index i = 0; i + 1 < t.size(); ++i) {
    const Scalar d = v(i + 1) - v(i);
    const int s = d > Scalar(0) ? 1 : (d < Scalar(0) ? -1 : 0);
    if (s == 0) {
      if (open) out.push_back(cur);
      open = false;
      continue;
    }
    if (open && cur.sign == s) {
      cur.t_end = t(i + 1);
      cur.delta += d;
    } else {
      if (open) out.push_back(cur);
      cur = MonotoneSegment<Scalar>{t(i), t(i + 1), d, s};
      open = true;
    }
  }
  if (open) out.push_back(cur);
  return out;
}

// Canonical test path 0 -> amplitude -> 0 -> ... with n_swings legs of equal
// duration.  Total variation is amplitude * n_swings.
template <class Scalar>
DrivingPath<Scalar> zigzag(Scalar amplitude, int n_swings, Scalar T) {
  if (!(amplitude > Scalar(0)) || n_swings < 1 || !(T > Scalar(0)))
    throw ConfigError("zigzag requires positive amplitude, horizon and at least one swing");
  ArrayX<Scalar> t(n_swings + 1), v(n_swings + 1);
  for (Index i = 0; i <= n_swings; ++i) {
    t(i) = T * Scalar(i) / Scalar(n_swings);
    v(i) = (i % 2 == 1) ? amplitude : Scalar(0);
  }
  t(n_swings) = T;
  return DrivingPath<Scalar>(std::move(t), std::move(v));
}

// Piecewise-linear path through a symmetric random walk: n_steps steps of
// size scale * sqrt(T / n_steps), each sign drawn from the top bit of one
// mt19937_64 output.  Bit-for-bit reproducible for a fixed seed.
template <class Scalar>
DrivingPath<Scalar> sample_brownian(std::uint64_t seed, int n_steps, Scalar T, Scalar scale) {
  if (n_steps < 1) throw ConfigError("sample_brownian requires n_steps >= 1");
  if (!(T > Scalar(0))) throw ConfigError("sample_brownian requires T > 0");
  std::mt19937_64 gen(seed);
  const Scalar step = scale * std::sqrt(T / Scalar(n_steps));
  ArrayX<Scalar> t(n_steps + 1), v(n_steps + 1);
  t(0) = Scalar(0);
  v(0) = Scalar(0);
  for (Index i = 0; i < n_steps; ++i) {
    const bool up = (gen() >> 63) != 0;
    t(i + 1) = T * Scalar(i + 1) / Scalar(n_steps);
    v(i + 1) = v(i) + (up ? step : -step);
  }
  t(n_steps) = T;
  return DrivingPath<Scalar>(std::move(t), std::move(v));
}

// Restriction of the path to [0, t].
template <class Scalar>
DrivingPath<Scalar> truncate(const DrivingPath<Scalar>& path, Scalar t) {
  if (!(t > Scalar(0)) || !(t <= path.horizon()))
    throw DomainError("truncation time must lie in (0, T]");
  std::vector<std::pair<Scalar, Scalar>> knots;
  for (Index i = 0; i < path.knot_count() && path.times()(i) < t; ++i)
    knots.emplace_back(path.times()(i), path.values()(i));
  knots.emplace_back(t, path(t));
  return DrivingPath<Scalar>::from_knots(knots);
}

// Driver of the time-reversed evolution: eta(t) = xi(T) - xi(T - t), so that
// eta'(t) = xi'(T - t), eta(0) = 0 and the total variation is preserved.
template <class Scalar>
DrivingPath<Scalar> time_reverse(const DrivingPath<Scalar>& path) {
  const Index n = path.knot_count();
  const Scalar T = path.horizon();
  const Scalar vT = path.values()(n - 1);
  ArrayX<Scalar> t(n), v(n);
  for (Index i = 0; i < n; ++i) {
    t(i) = T - path.times()(n - 1 - i);
    v(i) = vT - path.values()(n - 1 - i);
  }
  return DrivingPath<Scalar>(std::move(t), std::move(v));
}

struct PartitionBoundOptions {
  int max_interior = 20;        // cap on interior partition points
  bool refine_midpoints = false;  // also consider midpoints of linear pieces
};

namespace detail {

// Largest sum of absolute increments over subsequences of `v` that start at
// the first entry, end at the last, and use exactly k intermediate jumps,
// for every k up to max_increments.  Exact dynamic program, O(K^2 * kmax).
template <class Scalar>
ArrayX<Scalar> best_increment_sums(const std::vector<Scalar>& v, Index max_increments) {
  const Index K = static_cast<Index>(v.size());
  const Scalar neg = -std::numeric_limits<Scalar>::infinity();
  ArrayXX<Scalar> best = ArrayXX<Scalar>::Constant(K, max_increments + 1, neg);
  best(0, 0) = Scalar(0);
  for (Index k = 1; k <= max_increments; ++k) {
    for (Index j = k; j < K; ++j) {
      Scalar b = neg;
      for (Index i = k - 1; i < j; ++i) {
        if (best(i, k - 1) == neg) continue;
        const Scalar cand = best(i, k - 1) + std::abs(v[static_cast<std::size_t>(j)] -
                                                      v[static_cast<std::size_t>(i)]);
        b = std::max(b, cand);
      }
      best(j, k) = b;
    }
  }
  ArrayX<Scalar> out(max_increments + 1);
  for (Index k = 0; k <= max_increments; ++k) out(k) = best(K - 1, k);
  return out;
}

}  // namespace detail

// Lower bound for the partition supremum
//   sup over partitions of ( sum_j |xi(t_{j+1}) - xi(t_j)| - R ) / n,
// clamped to [0, 1].  Candidate partitions are subsets of the knot times
// containing both endpoints (optionally augmented with midpoints of linear
// pieces).  Over the candidate set the optimum is computed exactly by dynamic
// programming; when the candidate count exceeds the configured cap the set is
// thinned to turning points, which never lowers the reported value below a
// valid bound.  Nonincreasing in R, and 0 whenever the total variation is at
// most R.
template <class Scalar>
Scalar partition_bound(const DrivingPath<Scalar>& path, Scalar R,
                     PartitionBoundOptions opt = {}) {
  if (!(R >= Scalar(0))) throw DomainError("partition_bound requires R >= 0");
  if (opt.max_interior < 0) throw ConfigError("max_interior must be nonnegative");

  const auto& values = path.values();
  std::vector<Scalar> cand;
  cand.reserve(static_cast<std::size_t>(2 * values.size()));
  for (Index i = 0; i < values.size(); ++i) {
    cand.push_back(values(i));
    if (opt.refine_midpoints && i + 1 < values.size())
      cand.push_back((values(i) + values(i + 1)) / Scalar(2));
  }

  // Thin to turning points (plus endpoints) when over the cap; a point in the
  // interior of a monotone stretch never improves the objective because its
  // contribution is convex along the stretch.
  if (static_cast<Index>(cand.size()) - 2 > opt.max_interior) {
    std::vector<Scalar> turning;
    turning.push_back(cand.front());
    for (std::size_t i = 1; i + 1 < cand.size(); ++i) {
      const Scalar dl = cand[i] - cand[i - 1];
      const Scalar dr = cand[i + 1] - cand[i];
      if ((dl > 0 && dr < 0) || (dl < 0 && dr > 0)) turning.push_back(cand[i]);
    }
    turning.push_back(cand.back());
    cand.swap(turning);
  }
  // Hard guard for very long signals: deterministic stride coarsening of the
  // interior.  The result stays a valid lower bound.
  constexpr std::size_t kMaxCandidates = 2500;
  if (cand.size() > kMaxCandidates) {
    const std::size_t stride = (cand.size() + kMaxCandidates - 1) / kMaxCandidates;
    std::vector<Scalar> thin;
    thin.push_back(cand.front());
    for (std::size_t i = 1; i + 1 < cand.size(); i += stride) thin.push_back(cand[i]);
    thin.push_back(cand.back());
    cand.swap(thin);
  }

  const Index K = static_cast<Index>(cand.size());
  const Index kmax = std::min<Index>(K - 1, opt.max_interior + 1);
  const ArrayX<Scalar> sums = detail::best_increment_sums(cand, kmax);
  Scalar raw = -std::numeric_limits<Scalar>::infinity();
  for (Index k = 1; k <= kmax; ++k) {
    if (!std::isfinite(sums(k))) continue;
    raw = std::max(raw, (sums(k) - R) / Scalar(k));
  }
  if (!std::isfinite(raw)) return Scalar(0);
  return clamp01(raw);
}

}  // namespace roughhj
