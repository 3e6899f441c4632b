#ifndef GEOPHASE_SUBSYSTEM_HPP
#define GEOPHASE_SUBSYSTEM_HPP

#include <span>
#include <vector>

#include "geophase/holonomy.hpp"
#include "geophase/numerics.hpp"

namespace geophase {

/// One Schmidt branch followed around the loop. Sample phases are raw.
struct SchmidtBranchPath {
  std::vector<double> weights;
  std::vector<Ket2> u;  // subsystem I
  std::vector<Ket2> v;  // subsystem II
};

struct SchmidtPath {
  int parent_label = 0;
  std::vector<SchmidtBranchPath> branches;  // descending weight at s = 0
  double weight_drift = 0.0;

  int rank() const { return static_cast<int>(branches.size()); }
};

inline constexpr double kSchmidtDegenerateGap = 1e-8;
inline constexpr double kMaxWeightDrift = 1e-6;
inline constexpr double kVanishingResultant = 1e-10;

/// Schmidt-decomposes every sample and links branches across steps by the
/// largest |<u_k|u_{k+1}>|. Throws SchmidtDegenerate when two weights come
/// within kSchmidtDegenerateGap (the Schmidt basis is then undefined) or when
/// the rank changes along the loop.
SchmidtPath schmidt_paths(const EigenPath& path, double overlap_threshold = 0.99);

struct BranchPhase {
  double gamma_I = 0.0;
  double gamma_II = 0.0;
};

/// Berry phases (mod 2 pi) of each branch's subsystem-I and subsystem-II
/// vector paths.
std::vector<BranchPhase> branch_phases(const SchmidtPath& sp, double overlap_threshold = 0.99);

/// sum_j p_j gamma_j. Depends on which 2 pi representative each gamma_j is.
double naive_mixed_phase(std::span<const double> weights, std::span<const double> gammas);

struct MixedPhase {
  double phase = 0.0;      // arg sum_j p_j exp(i gamma_j), in (-pi, pi]
  double magnitude = 0.0;  // |sum_j p_j exp(i gamma_j)|
};

MixedPhase proper_mixed_phase(std::span<const double> weights, std::span<const double> gammas);

struct SubsystemPhases {
  int label = 0;
  std::vector<double> weights;  // taken at s = 0
  std::vector<double> gamma_I;
  std::vector<double> gamma_II;
  double naive_I = 0.0;
  double naive_II = 0.0;
  double proper_I = 0.0;
  double proper_II = 0.0;
  double resultant_I = 0.0;
  double resultant_II = 0.0;
  double weight_drift = 0.0;
};

/// Both mixed-phase definitions for subsystems I and II of one composite
/// eigenpath. Throws WeightDrift when the weights vary by more than
/// kMaxWeightDrift along the loop.
SubsystemPhases subsystem_report(const EigenPath& path, double overlap_threshold = 0.99);

}  // namespace geophase

#endif  // GEOPHASE_SUBSYSTEM_HPP
