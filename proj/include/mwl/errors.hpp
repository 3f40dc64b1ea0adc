#pragma once

#include <stdexcept>
#include <string>

namespace mwl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Domain violation while evaluating jets or expressions (log of a
/// non-positive value, sqrt of a negative, division by zero).
struct EvalError : Error {
  using Error::Error;
};

/// Chart point (or an FD stencil point around it) left the declared domain.
struct DomainError : Error {
  using Error::Error;
};

/// Degenerate induced metric, missing normal directions, ambient too small.
struct GeometryError : Error {
  using Error::Error;
};

/// Moebius invariants requested at a totally umbilic point.
struct UmbilicError : Error {
  using Error::Error;
};

/// Stereographic pole proximity.
struct PoleError : Error {
  using Error::Error;
};

/// A Moebius transformation sent the point to infinity.
struct InfinityError : Error {
  using Error::Error;
};

/// Normal-frame alignment across an FD stencil failed.
struct AlignmentError : Error {
  using Error::Error;
};

}  // namespace mwl
