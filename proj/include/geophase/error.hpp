#ifndef GEOPHASE_ERROR_HPP
#define GEOPHASE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace geophase {

enum class ErrorCode {
  NonHermitianInput,
  ZeroMagnitude,
  GapCollapse,
  StepAmbiguity,
  ZeroOverlap,
  StepTooCoarse,
  SchmidtDegenerate,
  NonCyclicBranch,
  VanishingResultant,
  WeightDrift,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every numerical failure in the library is reported through this type; the
// code is what the sweep records in its status column.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geophase

#endif  // GEOPHASE_ERROR_HPP
