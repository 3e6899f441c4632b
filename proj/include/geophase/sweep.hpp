#ifndef GEOPHASE_SWEEP_HPP
#define GEOPHASE_SWEEP_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "geophase/model.hpp"

namespace geophase {

inline constexpr const char* kToolVersion = "0.1.0";

struct SweepConfig {
  double theta = 0.7853981633974483;
  double g_min = 0.0;
  double g_max = 1.0;
  int g_steps = 51;
  CouplingForm coupling_form = CouplingForm::xy;
  int n_time = 4096;
  std::string csv;
  std::string json;
  std::string svg;
  int trials = 100;
  std::uint64_t seed = 42;

  void validate() const;
  double g_at(int i) const;
  ModelParams model_at(int i) const;
};

/// Reads the keys of a JSON object onto `config`; keys mirror the field names.
/// Unknown keys are rejected.
void apply_config_json(const nlohmann::json& j, SweepConfig& config);
nlohmann::json config_to_json(const SweepConfig& config);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One (g, m) cell of the table. Fields a failure prevented from being
/// computed stay NaN and `status` names the error.
struct LevelEntry {
  double gamma_composite = kMissing;
  double gamma_I = kMissing;
  double gamma_II = kMissing;
  double gamma_sum = kMissing;  // proper_I + proper_II, wrapped
  double additivity_gap = kMissing;
  double p1 = kMissing;  // leading Schmidt weight
  double resultant_I = kMissing;
  double resultant_II = kMissing;
  std::string status = "ok";
};

struct PhaseRow {
  double g = 0.0;
  std::array<LevelEntry, 4> levels;
};

using PhaseTable = std::vector<PhaseRow>;

/// Evaluates one (theta, g) point. Numerical failures land in the status of
/// the affected levels instead of propagating.
PhaseRow evaluate_point(const ModelParams& params);

PhaseTable run_sweep(const SweepConfig& config);

// Writers; all throw std::runtime_error naming the path on I/O failure.
std::string format_csv(const PhaseTable& table);
nlohmann::json table_to_json(const PhaseTable& table, const SweepConfig& config);
std::string format_svg(const PhaseTable& table, const SweepConfig& config);

void emit_csv(const PhaseTable& table, const std::filesystem::path& path);
void emit_json(const PhaseTable& table, const SweepConfig& config,
               const std::filesystem::path& path);
void emit_svg(const PhaseTable& table, const SweepConfig& config,
              const std::filesystem::path& path);

}  // namespace geophase

#endif  // GEOPHASE_SWEEP_HPP
