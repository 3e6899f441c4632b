#include "geophase/subsystem.hpp"

#include <cmath>
#include <sstream>

namespace geophase {

namespace {

void check_weights(std::span<const double> weights, std::span<const double> gammas) {
  if (weights.empty() || weights.size() != gammas.size()) {
    throw Error(ErrorCode::InvalidArgument, "weights and phases must be non-empty and paired");
  }
  double total = 0.0;
  for (const double p : weights) {
    if (p < 0.0) throw Error(ErrorCode::InvalidArgument, "negative weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "weights must sum to one");
  }
}

}  // namespace

SchmidtPath schmidt_paths(const EigenPath& path, double overlap_threshold) {
  const int n = path.steps();
  SchmidtPath out;
  out.parent_label = path.label;

  auto decompose = [&](int k) {
    auto branches = schmidt_decompose<double>(path.samples[k]);
    if (branches.size() == 2 && branches[0].weight - branches[1].weight < kSchmidtDegenerateGap) {
      std::ostringstream os;
      os << "Schmidt weights " << branches[0].weight << " and " << branches[1].weight
         << " coincide at sample " << k << " of level " << path.label;
      throw Error(ErrorCode::SchmidtDegenerate, os.str());
    }
    return branches;
  };

  const auto first = decompose(0);
  const int rank = static_cast<int>(first.size());
  out.branches.resize(first.size());
  for (std::size_t j = 0; j < first.size(); ++j) {
    auto& b = out.branches[j];
    b.weights.reserve(n + 1);
    b.u.reserve(n + 1);
    b.v.reserve(n + 1);
    b.weights.push_back(first[j].weight);
    b.u.push_back(first[j].u);
    b.v.push_back(first[j].v);
  }

  for (int k = 1; k <= n; ++k) {
    const auto current = decompose(k);
    if (static_cast<int>(current.size()) != rank) {
      throw Error(ErrorCode::SchmidtDegenerate,
                  "Schmidt rank changes along the loop of level " + std::to_string(path.label));
    }
    std::vector<bool> taken(current.size(), false);
    for (auto& b : out.branches) {
      int best = -1;
      double best_mag = -1.0;
      for (int j = 0; j < rank; ++j) {
        if (taken[j]) continue;
        const double mag = std::abs(overlap<2>(b.u.back(), current[j].u));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      const double v_mag = std::abs(overlap<2>(b.v.back(), current[best].v));
      if (best_mag < overlap_threshold || v_mag < overlap_threshold) {
        std::ostringstream os;
        os << "Schmidt branch jumps at sample " << k << " of level " << path.label
           << "; increase the number of loop samples N";
        throw Error(ErrorCode::StepAmbiguity, os.str());
      }
      taken[best] = true;
      b.weights.push_back(current[best].weight);
      b.u.push_back(current[best].u);
      b.v.push_back(current[best].v);
      out.weight_drift = std::max(out.weight_drift, std::abs(b.weights.back() - b.weights.front()));
    }
  }
  return out;
}

std::vector<BranchPhase> branch_phases(const SchmidtPath& sp, double overlap_threshold) {
  std::vector<BranchPhase> out;
  out.reserve(sp.branches.size());
  for (const auto& b : sp.branches) {
    if (std::abs(overlap<2>(b.u.back(), b.u.front())) < overlap_threshold ||
        std::abs(overlap<2>(b.v.back(), b.v.front())) < overlap_threshold) {
      throw Error(ErrorCode::NonCyclicBranch, "Schmidt branch of level " +
                                                  std::to_string(sp.parent_label) +
                                                  " does not return to its starting ray");
    }
    out.push_back({berry_phase_mod2pi<2>(b.u), berry_phase_mod2pi<2>(b.v)});
  }
  return out;
}

double naive_mixed_phase(std::span<const double> weights, std::span<const double> gammas) {
  check_weights(weights, gammas);
  double total = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) total += weights[j] * gammas[j];
  return total;
}

MixedPhase proper_mixed_phase(std::span<const double> weights, std::span<const double> gammas) {
  check_weights(weights, gammas);
  std::complex<double> resultant = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    // Reducing first keeps e^{i gamma} identical across 2 pi representatives.
    resultant += weights[j] * std::polar(1.0, wrap_angle(gammas[j]));
  }
  const double magnitude = std::abs(resultant);
  if (magnitude < kVanishingResultant) {
    throw Error(ErrorCode::VanishingResultant, "weighted phase factors cancel; phase undefined");
  }
  return {principal_arg(resultant), magnitude};
}

SubsystemPhases subsystem_report(const EigenPath& path, double overlap_threshold) {
  const SchmidtPath sp = schmidt_paths(path, overlap_threshold);
  if (sp.weight_drift > kMaxWeightDrift) {
    std::ostringstream os;
    os << "Schmidt weights of level " << path.label << " drift by " << sp.weight_drift
       << " around the loop";
    throw Error(ErrorCode::WeightDrift, os.str());
  }
  const auto phases = branch_phases(sp, overlap_threshold);

  SubsystemPhases out;
  out.label = path.label;
  out.weight_drift = sp.weight_drift;
  double total = 0.0;
  for (const auto& b : sp.branches) total += b.weights.front();
  for (std::size_t j = 0; j < phases.size(); ++j) {
    // Normalize away the dropped-branch remainder (below 1e-12).
    out.weights.push_back(sp.branches[j].weights.front() / total);
    out.gamma_I.push_back(phases[j].gamma_I);
    out.gamma_II.push_back(phases[j].gamma_II);
  }
  out.naive_I = naive_mixed_phase(out.weights, out.gamma_I);
  out.naive_II = naive_mixed_phase(out.weights, out.gamma_II);
  const MixedPhase proper_I = proper_mixed_phase(out.weights, out.gamma_I);
  const MixedPhase proper_II = proper_mixed_phase(out.weights, out.gamma_II);
  out.proper_I = proper_I.phase;
  out.proper_II = proper_II.phase;
  out.resultant_I = proper_I.magnitude;
  out.resultant_II = proper_II.magnitude;
  return out;
}

}  // namespace geophase
