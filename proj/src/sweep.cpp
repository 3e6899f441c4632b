#include "geophase/sweep.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "geophase/holonomy.hpp"
#include "geophase/parallel.hpp"
#include "geophase/subsystem.hpp"

namespace geophase {

namespace {
LevelEntry failed_entry(ErrorCode code) {
  LevelEntry entry;
  entry.status = std::string(to_string(code));
  return entry;
}
}  // namespace

void SweepConfig::validate() const {
  if (!(g_min <= g_max)) throw Error(ErrorCode::InvalidArgument, "g_min must not exceed g_max");
  if (g_steps < 1) throw Error(ErrorCode::InvalidArgument, "g_steps must be >= 1");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  model_at(0).validate();
}

double SweepConfig::g_at(int i) const {
  if (g_steps == 1) return g_min;
  return g_min + (g_max - g_min) * static_cast<double>(i) / static_cast<double>(g_steps - 1);
}

ModelParams SweepConfig::model_at(int i) const {
  return {theta, g_at(i), coupling_form, n_time};
}

void apply_config_json(const nlohmann::json& j, SweepConfig& config) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "theta") config.theta = value.get<double>();
    else if (key == "g_min") config.g_min = value.get<double>();
    else if (key == "g_max") config.g_max = value.get<double>();
    else if (key == "g_steps") config.g_steps = value.get<int>();
    else if (key == "coupling_form") config.coupling_form = parse_coupling_form(value.get<std::string>());
    else if (key == "n_time") config.n_time = value.get<int>();
    else if (key == "csv") config.csv = value.get<std::string>();
    else if (key == "json") config.json = value.get<std::string>();
    else if (key == "svg") config.svg = value.get<std::string>();
    else if (key == "trials") config.trials = value.get<int>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
}

nlohmann::json config_to_json(const SweepConfig& config) {
  return {
      {"theta", config.theta},
      {"g_min", config.g_min},
      {"g_max", config.g_max},
      {"g_steps", config.g_steps},
      {"coupling_form", std::string(to_string(config.coupling_form))},
      {"n_time", config.n_time},
      {"csv", config.csv},
      {"json", config.json},
      {"svg", config.svg},
      {"trials", config.trials},
      {"seed", config.seed},
  };
}

PhaseRow evaluate_point(const ModelParams& params) {
  PhaseRow row;
  row.g = params.g;
  std::array<EigenPath, 4> paths;
  try {
    paths = track_eigenpaths(params);
  } catch (const Error& e) {
    row.levels.fill(failed_entry(e.code()));
    return row;
  }

  for (int m = 0; m < 4; ++m) {
    LevelEntry& entry = row.levels[m];
    try {
      entry.gamma_composite = berry_phase_mod2pi(paths[m]);
      const SubsystemPhases sub = subsystem_report(paths[m]);
      entry.gamma_I = sub.proper_I;
      entry.gamma_II = sub.proper_II;
      entry.gamma_sum = wrap_angle(sub.proper_I + sub.proper_II);
      entry.additivity_gap = circle_distance(entry.gamma_composite, entry.gamma_sum);
      entry.p1 = sub.weights.front();
      entry.resultant_I = sub.resultant_I;
      entry.resultant_II = sub.resultant_II;
    } catch (const Error& e) {
      const double composite = entry.gamma_composite;
      entry = failed_entry(e.code());
      entry.gamma_composite = composite;
    }
  }
  return row;
}

PhaseTable run_sweep(const SweepConfig& config) {
  config.validate();
  PhaseTable table(static_cast<std::size_t>(config.g_steps));
  parallel_for(config.g_steps, [&](int i) { table[i] = evaluate_point(config.model_at(i)); });
  return table;
}

}  // namespace geophase
