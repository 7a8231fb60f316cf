#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace foamlab {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The combinatorial structure of a cluster is broken (degree, walks, ids).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Three carriers through a vertex do not share a second common point.
class NotConcurrent : public Error {
 public:
  using Error::Error;
};

// Pressures disagree along different paths: the cluster is at best a
// quasi-equilibrium.
class PathInconsistent : public Error {
 public:
  PathInconsistent(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

// An iterative method ran out of iterations (or a bracket could not be found).
class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what,
                          std::vector<double> history = {})
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

// An edge degenerated or new geometry collided with old geometry.
class TopologyBreakdown : public Error {
 public:
  using Error::Error;
};

// Malformed cluster document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace foamlab
