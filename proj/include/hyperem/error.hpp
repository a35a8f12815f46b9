#pragma once

#include <stdexcept>
#include <string>

namespace hyperem {

enum class ErrorKind {
  Domain,               // argument outside the operation's domain
  UnsupportedRegime,    // operation not defined for this (n, p) regime
  AboveSpectralGap,     // lambda_pair asked for c > (n-1)^2/4
  InsufficientData,     // too few samples / events for a fit or check
  DegenerateComparison, // intersection count of a trajectory with itself
  BracketExpansion,     // separatrix bracket could not be established
  Validation,           // closed form failed its residual validation
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hyperem
