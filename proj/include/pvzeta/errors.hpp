#pragma once

#include <stdexcept>
#include <string>

namespace pvz {

// Typed failures surfaced through the public API. Soft conditions
// (near-pole evaluation, loose quadrature) travel as flags on results
// instead; these are hard stops.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfRangeError : Error {
  using Error::Error;
};
struct QuadratureFailureError : Error {
  using Error::Error;
};
struct NearPoleError : Error {
  using Error::Error;
};
struct InconsistentError : Error {
  using Error::Error;
};
struct IllConditionedError : Error {
  using Error::Error;
};
struct NotEigenError : Error {
  using Error::Error;
};
struct UnsupportedRankError : Error {
  using Error::Error;
};
struct IrrationalRootsError : Error {
  using Error::Error;
};
struct NotFoundError : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};

}  // namespace pvz
