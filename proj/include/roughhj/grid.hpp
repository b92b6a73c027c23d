#pragma once

#include <cmath>
#include <type_traits>
#include <utility>

#include "roughhj/common.hpp"

namespace roughhj {

// Uniform grid centered at the origin: nodes at (i - c) * dx for
// i = 0 .. 2c, c = round(half_width / dx).  The origin is always a node and
// the per-axis node count is odd.
template <class Scalar = double>
struct Grid {
  int dim = 2;
  Scalar half_width = Scalar(1);
  Scalar dx = Scalar(0.1);

  void validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
    if (!(dx > Scalar(0))) throw ConfigError("grid spacing must be positive");
    if (!(half_width >= dx / Scalar(2))) throw ConfigError("grid half-width too small");
    if (nodes() > Index(1) << 24) throw ConfigError("grid too large");
  }

  Index center() const { return static_cast<Index>(std::llround(half_width / dx)); }
  Index nodes() const { return 2 * center() + 1; }
  Scalar coord(Index i) const { return Scalar(i - center()) * dx; }

  // Nearest node; the coordinate must be grid-aligned within dx/2.
  Index nearest_index(Scalar x) const {
    const Index i = center() + static_cast<Index>(std::llround(x / dx));
    if (i < 0 || i >= nodes()) throw DomainError("coordinate outside the grid");
    return i;
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && half_width == o.half_width && dx == o.dx;
  }
};

// Sampled function on a Grid.  Values are stored as an Eigen array with rows
// indexing the x axis and columns the y axis ((n, 1) in one dimension).
template <class Scalar = double>
struct GridFunction {
  Grid<Scalar> grid;
  ArrayXX<Scalar> values;

  static GridFunction constant(const Grid<Scalar>& g, Scalar c) {
    g.validate();
    const Index n = g.nodes();
    GridFunction f{g, ArrayXX<Scalar>::Constant(n, g.dim == 2 ? n : 1, c)};
    return f;
  }

  template <class F>
  static GridFunction sample(const Grid<Scalar>& g, F&& f) {
    g.validate();
    const Index n = g.nodes();
    GridFunction out{g, ArrayXX<Scalar>(n, g.dim == 2 ? n : 1)};
    if constexpr (std::is_invocable_v<F&, Scalar, Scalar>) {
      if (g.dim != 2) throw ConfigError("two-argument sampler needs a 2d grid");
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) out.values(i, j) = f(g.coord(i), g.coord(j));
    } else {
      if (g.dim != 1) throw ConfigError("one-argument sampler needs a 1d grid");
      for (Index i = 0; i < n; ++i) out.values(i, 0) = f(g.coord(i));
    }
    return out;
  }

  void validate() const {
    grid.validate();
    const Index n = grid.nodes();
    if (values.rows() != n || values.cols() != (grid.dim == 2 ? n : 1))
      throw ConfigError("grid function size does not match its grid");
    if (!values.isFinite().all()) throw ConfigError("grid function values must be finite");
  }

  Scalar at(Scalar x) const {
    if (grid.dim != 1) throw ConfigError("1d lookup on a 2d grid function");
    return values(grid.nearest_index(x), 0);
  }
  Scalar at(Scalar x, Scalar y) const {
    if (grid.dim != 2) throw ConfigError("2d lookup on a 1d grid function");
    return values(grid.nearest_index(x), grid.nearest_index(y));
  }
};

}  // namespace roughhj
