#include "geophase/error.hpp"

namespace geophase {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::ZeroMagnitude: return "ZeroMagnitude";
    case ErrorCode::GapCollapse: return "GapCollapse";
    case ErrorCode::StepAmbiguity: return "StepAmbiguity";
    case ErrorCode::ZeroOverlap: return "ZeroOverlap";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::SchmidtDegenerate: return "SchmidtDegenerate";
    case ErrorCode::NonCyclicBranch: return "NonCyclicBranch";
    case ErrorCode::VanishingResultant: return "VanishingResultant";
    case ErrorCode::WeightDrift: return "WeightDrift";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace geophase
