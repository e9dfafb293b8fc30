#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plap {

/// Rejected mesh input. `line()` is the 1-based line of the offending record
/// for file input, 0 when the error is not tied to a line.
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A pair (u, v) whose coupling integral is not strictly positive.
class InadmissiblePair : public std::domain_error {
 public:
  explicit InadmissiblePair(double coupling)
      : std::domain_error("inadmissible pair: coupling integral " + std::to_string(coupling) +
                          " is not positive"),
        coupling_(coupling) {}

  double coupling() const noexcept { return coupling_; }

 private:
  double coupling_;
};

/// Inner nonlinear solve failure.
class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Newton failure raised inside an outer eigenvalue iteration.
class EigenSolveError : public std::runtime_error {
 public:
  EigenSolveError(int outer_iteration, const std::string& field, const NewtonError& cause)
      : std::runtime_error("outer iteration " + std::to_string(outer_iteration) + ", field " +
                           field + ": " + cause.what()),
        outer_iteration_(outer_iteration) {}

  int outer_iteration() const noexcept { return outer_iteration_; }

 private:
  int outer_iteration_;
};

}  // namespace plap
