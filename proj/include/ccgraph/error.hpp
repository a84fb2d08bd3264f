#pragma once

#include <stdexcept>
#include <string>

namespace ccgraph {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

// Argument outside the domain of an operation (off-manifold point,
// antipodal pair, negative distance, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// The constraint line of the hyperbolic eigenvalue problem misses the
// feasible set.
class InfeasibleEmbedding : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace ccgraph
