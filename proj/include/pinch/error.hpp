#pragma once

#include <stdexcept>
#include <string>

namespace pinch {

/// Failure categories. The CLI maps each one onto a fixed exit code.
enum class ErrorKind {
  domain,        // argument outside the mathematical domain
  feasibility,   // (eta, S) fails the neck feasibility inequalities
  construction,  // feasible input, but the neck could not be built within bounds
  range,         // point outside the interval an evaluator is defined on
  singularity,   // evaluation at or too near a pole / non-finite sample
  dimension,     // size mismatch in linear algebra
  bracketing,    // root finder endpoints do not bracket a sign change
  certificate,   // mode truncation could not be certified
  io,            // unreadable / unwritable file
  corrupt,       // malformed or invalid input document
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pinch
