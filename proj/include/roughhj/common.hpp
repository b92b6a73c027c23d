#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace roughhj {

template <class Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using ArrayXX = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Invalid parameters, grids too small for the requested run, unstable scheme
// configurations.  The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside the mathematical domain of an operation (e.g. evaluating
// a signal outside its horizon).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied object violated a stated contract (e.g. a strategy that
// is not progressive, or a check applied to an ineligible trajectory).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Scalar>
Scalar clamp01(Scalar v) {
  return v < Scalar(0) ? Scalar(0) : (v > Scalar(1) ? Scalar(1) : v);
}

}  // namespace roughhj
