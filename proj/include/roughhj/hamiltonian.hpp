#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "roughhj/common.hpp"

namespace roughhj {

// Hamiltonian H(p) with declared per-axis Lipschitz bounds and structure
// flags.  The bounds are trusted by the schemes (and spot-checked in tests);
// the structure flags state which exact semigroup, if any, applies:
//   - is_convex with dim == 1: H = lipschitz(0) * |p|, sup/inf semigroups.
//   - convex_axis / concave_axis with dim == 2: H is the difference of the
//     two one-variable pieces, each 1-homogeneous with slope lipschitz(axis).
template <class Scalar = double>
struct HamiltonianSpec {
  int dim = 2;
  std::function<Scalar(const VectorX<Scalar>&)> value;
  // Optional vectorized evaluators used by the finite-difference engine.
  std::function<ArrayXX<Scalar>(const ArrayXX<Scalar>&, const ArrayXX<Scalar>&)> value_2d;
  std::function<ArrayXX<Scalar>(const ArrayXX<Scalar>&)> value_1d;
  Eigen::Array<Scalar, 2, 1> lipschitz{Scalar(1), Scalar(1)};  // second entry unused in 1d
  bool zero_at_origin = true;
  bool is_convex = false;
  int convex_axis = -1;
  int concave_axis = -1;
  std::string name = "custom";

  bool saddle() const { return dim == 2 && convex_axis >= 0 && concave_axis >= 0; }
  bool morphological_supported() const { return (dim == 1 && is_convex) || saddle(); }
  Scalar lipschitz_sum() const { return dim == 1 ? lipschitz(0) : lipschitz(0) + lipschitz(1); }
};

// H(px, py) = |px| - |py|: convex in x, concave in y, per-axis slopes (1, 1).
template <class Scalar = double>
HamiltonianSpec<Scalar> h_saddle() {
  HamiltonianSpec<Scalar> h;
  h.dim = 2;
  h.value = [](const VectorX<Scalar>& p) { return std::abs(p(0)) - std::abs(p(1)); };
  h.value_2d = [](const ArrayXX<Scalar>& px, const ArrayXX<Scalar>& py) {
    return ArrayXX<Scalar>(px.abs() - py.abs());
  };
  h.lipschitz << Scalar(1), Scalar(1);
  h.is_convex = false;
  h.convex_axis = 0;
  h.concave_axis = 1;
  h.name = "paper_saddle";
  return h;
}

// H(p) = |p| in one dimension.
template <class Scalar = double>
HamiltonianSpec<Scalar> h_abs_1d() {
  HamiltonianSpec<Scalar> h;
  h.dim = 1;
  h.value = [](const VectorX<Scalar>& p) { return std::abs(p(0)); };
  h.value_1d = [](const ArrayXX<Scalar>& p) { return ArrayXX<Scalar>(p.abs()); };
  h.lipschitz << Scalar(1), Scalar(1);
  h.is_convex = true;
  h.name = "abs_1d";
  return h;
}

template <class Scalar>
Scalar eval(const HamiltonianSpec<Scalar>& h, const VectorX<Scalar>& p) {
  if (p.size() != h.dim) throw ConfigError("gradient dimension does not match Hamiltonian");
  return h.value(p);
}

// Global Lax-Friedrichs numerical flux
//   H((p- + p+)/2) - sum_i alpha_i/2 * (p_i+ - p_i-).
// Consistent (flux(p, p) == H(p) on the same arithmetic path) and monotone:
// nonincreasing in every p+ component and nondecreasing in every p-
// component, provided alpha_i covers the per-axis Lipschitz bound.
template <class Scalar>
Scalar lax_friedrichs_flux(const HamiltonianSpec<Scalar>& h, const VectorX<Scalar>& p_minus,
                           const VectorX<Scalar>& p_plus, const VectorX<Scalar>& alphas) {
  if (p_minus.size() != h.dim || p_plus.size() != h.dim || alphas.size() != h.dim)
    throw ConfigError("flux arguments must match the Hamiltonian dimension");
  for (Index i = 0; i < alphas.size(); ++i)
    if (alphas(i) < h.lipschitz(i))
      throw ConfigError("dissipation coefficient below the Lipschitz bound breaks monotonicity");
  const VectorX<Scalar> mid = (p_minus + p_plus) / Scalar(2);
  Scalar dissipation = Scalar(0);
  for (Index i = 0; i < alphas.size(); ++i)
    dissipation += alphas(i) / Scalar(2) * (p_plus(i) - p_minus(i));
  return h.value(mid) - dissipation;
}

// Built-in Hamiltonians addressable from configuration files.
template <class Scalar = double>
HamiltonianSpec<Scalar> builtin_hamiltonian(const std::string& name) {
  if (name == "paper_saddle") return h_saddle<Scalar>();
  if (name == "abs_1d") return h_abs_1d<Scalar>();
  throw ConfigError("unknown Hamiltonian '" + name + "' (built-ins: paper_saddle, abs_1d)");
}

}  // namespace roughhj
