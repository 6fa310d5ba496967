#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace latgas {

enum class ErrorKind {
  kInvalidArgument,
  kVanishingDenominator,
  kDepthGuardExceeded,
  kMissingPotential,
  kEdgeNotIncident,
  kDegreeExceeded,
  kNoConvergence,
  kSupportTooSmall,
  kParse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Picard iteration gave up; carries the sup-norm residual of every sweep.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::kNoConvergence, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace latgas
