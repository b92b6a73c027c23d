#pragma once

#include <cmath>
#include <vector>

#include "roughhj/common.hpp"
#include "roughhj/grid.hpp"

namespace roughhj {

namespace detail {

// Sliding-window extremum over the clamped window [i-k, i+k] ∩ [0, n-1],
// monotone-deque formulation, O(n) amortized for any k.  `better(a, b)` is a
// strict preference (a > b for a maximum filter).
template <class Scalar, class Better>
void sliding_extremum(const Scalar* in, Scalar* out, Index n, Index k, Better better,
                      std::vector<Index>& deque_storage) {
  if (k <= 0) {
    for (Index i = 0; i < n; ++i) out[i] = in[i];
    return;
  }
  deque_storage.resize(static_cast<std::size_t>(n));
  Index* dq = deque_storage.data();
  Index head = 0, tail = 0;  // active candidates in dq[head, tail)
  Index next = 0;            // next input index to admit
  for (Index i = 0; i < n; ++i) {
    const Index hi = std::min(i + k, n - 1);
    for (; next <= hi; ++next) {
      while (tail > head && !better(in[dq[tail - 1]], in[next])) --tail;
      dq[tail++] = next;
    }
    while (dq[head] < i - k) ++head;
    out[i] = in[dq[head]];
  }
}

}  // namespace detail

// out[i] = max / min over the clamped window [i-k, i+k]; k in cells.
template <class Scalar>
ArrayX<Scalar> window_max(const ArrayX<Scalar>& a, Index k) {
  ArrayX<Scalar> out(a.size());
  std::vector<Index> scratch;
  detail::sliding_extremum(a.data(), out.data(), a.size(), k,
                           [](Scalar x, Scalar y) { return x > y; }, scratch);
  return out;
}

template <class Scalar>
ArrayX<Scalar> window_min(const ArrayX<Scalar>& a, Index k) {
  ArrayX<Scalar> out(a.size());
  std::vector<Index> scratch;
  detail::sliding_extremum(a.data(), out.data(), a.size(), k,
                           [](Scalar x, Scalar y) { return x < y; }, scratch);
  return out;
}

namespace detail {

// Applies a sliding extremum along one axis of a grid function, line by line.
// axis 0 slides along rows (the x index), axis 1 along columns (the y index).
template <class Scalar, class Better>
void filter_axis_inplace(ArrayXX<Scalar>& values, int axis, Index k, Better better) {
  if (k <= 0) return;
  std::vector<Index> scratch;
  const Index rows = values.rows(), cols = values.cols();
  if (axis == 0) {
    ArrayX<Scalar> line(rows);
    for (Index j = 0; j < cols; ++j) {
      sliding_extremum(values.col(j).data(), line.data(), rows, k, better, scratch);
      values.col(j) = line;
    }
  } else {
    ArrayX<Scalar> in(cols), out(cols);
    for (Index i = 0; i < rows; ++i) {
      in = values.row(i).transpose();
      sliding_extremum(in.data(), out.data(), cols, k, better, scratch);
      values.row(i) = out.transpose();
    }
  }
}

}  // namespace detail

template <class Scalar>
void dilate_axis_cells_inplace(GridFunction<Scalar>& f, int axis, Index k) {
  if (axis < 0 || axis >= f.grid.dim) throw ConfigError("axis out of range for this grid");
  detail::filter_axis_inplace(f.values, axis, k, [](Scalar a, Scalar b) { return a > b; });
}

template <class Scalar>
void erode_axis_cells_inplace(GridFunction<Scalar>& f, int axis, Index k) {
  if (axis < 0 || axis >= f.grid.dim) throw ConfigError("axis out of range for this grid");
  detail::filter_axis_inplace(f.values, axis, k, [](Scalar a, Scalar b) { return a < b; });
}

// Sliding-window maximum along the axis with half-width k = round(radius/dx)
// cells; the exact semigroup of d_s u = |d_axis u| run for time `radius`.
// Windows are clamped (one-sided) at the boundary.
template <class Scalar>
GridFunction<Scalar> dilate_axis(const GridFunction<Scalar>& f, int axis, Scalar radius) {
  if (!(radius >= Scalar(0))) throw DomainError("dilation radius must be nonnegative");
  GridFunction<Scalar> out = f;
  dilate_axis_cells_inplace(out, axis, static_cast<Index>(std::llround(radius / f.grid.dx)));
  return out;
}

// Sliding-window minimum; the exact semigroup of d_s u = -|d_axis u|.
template <class Scalar>
GridFunction<Scalar> erode_axis(const GridFunction<Scalar>& f, int axis, Scalar radius) {
  if (!(radius >= Scalar(0))) throw DomainError("erosion radius must be nonnegative");
  GridFunction<Scalar> out = f;
  erode_axis_cells_inplace(out, axis, static_cast<Index>(std::llround(radius / f.grid.dx)));
  return out;
}

}  // namespace roughhj
