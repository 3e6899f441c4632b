#include "geophase/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "geophase/gauge.hpp"
#include "geophase/holonomy.hpp"
#include "geophase/subsystem.hpp"
#include "geophase/sweep.hpp"

namespace geophase {

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.9f", x);
  return buf;
}

nlohmann::json audit_to_json(const AuditReport& report, const ModelParams& params,
                             std::uint64_t seed) {
  nlohmann::json records = nlohmann::json::array();
  for (const TrialRecord& r : report.records) {
    records.push_back({
        {"seed", r.seed},
        {"windings", r.windings},
        {"branch_shift_error", r.branch_shift_error},
        {"naive_shift_error", r.naive_shift_error},
        {"naive_deviation_mod2pi", r.naive_deviation_mod2pi},
        {"naive_deviation_unequal", r.naive_deviation_unequal},
        {"proper_deviation", r.proper_deviation},
        {"magnitude_deviation", r.magnitude_deviation},
        {"composite_deviation", r.composite_deviation},
    });
  }
  return {
      {"metadata",
       {{"tool", "geophase"},
        {"version", kToolVersion},
        {"config",
         {{"theta", params.theta},
          {"g", params.g},
          {"coupling_form", std::string(to_string(params.coupling_form))},
          {"n_time", params.n_time},
          {"trials", report.trials},
          {"seed", seed}}}}},
      {"summary",
       {{"trials", report.trials},
        {"max_branch_shift_error", report.max_branch_shift_error},
        {"max_naive_shift_error", report.max_naive_shift_error},
        {"max_naive_deviation_mod2pi", report.max_naive_deviation_mod2pi},
        {"max_naive_deviation_unequal", report.max_naive_deviation_unequal},
        {"max_proper_deviation", report.max_proper_deviation},
        {"max_magnitude_deviation", report.max_magnitude_deviation},
        {"max_composite_deviation", report.max_composite_deviation},
        {"unequal_entangled_sets", report.unequal_entangled_sets}}},
      {"records", records},
  };
}

void print_audit(std::ostream& out, const AuditReport& r) {
  out << "trials                       " << r.trials << "\n"
      << "max branch shift error       " << sci(r.max_branch_shift_error) << "  (limit 1e-8)\n"
      << "max naive shift error        " << sci(r.max_naive_shift_error) << "  (limit 1e-8)\n"
      << "max naive deviation mod 2pi  " << sci(r.max_naive_deviation_mod2pi) << "\n"
      << "  over unequal windings      " << sci(r.max_naive_deviation_unequal)
      << "  (witness >= 0.1, " << r.unequal_entangled_sets << " sets)\n"
      << "max proper deviation         " << sci(r.max_proper_deviation) << "  (limit 1e-9)\n"
      << "max magnitude deviation      " << sci(r.max_magnitude_deviation) << "  (limit 1e-9)\n"
      << "max composite deviation      " << sci(r.max_composite_deviation) << "  (limit 1e-12)\n";
}

void print_single(std::ostream& out, const ModelParams& params) {
  const auto paths = track_eigenpaths(params);
  out << "theta = " << fixed(params.theta) << "  g = " << fixed(params.g)
      << "  coupling = " << to_string(params.coupling_form) << "  N = " << params.n_time << "\n";
  for (const EigenPath& path : paths) {
    const double composite = berry_phase_mod2pi(path);
    const SubsystemPhases sub = subsystem_report(path);
    const double sum = wrap_angle(sub.proper_I + sub.proper_II);
    out << "\nm = " << path.label << "  E(0) = " << fixed(path.energies.front())
        << "  min gap = " << sci(path.min_gap) << "\n"
        << "  composite gamma          " << fixed(composite) << "\n";
    for (std::size_t j = 0; j < sub.weights.size(); ++j) {
      out << "  branch " << j + 1 << ": p = " << fixed(sub.weights[j])
          << "  gamma_I = " << fixed(sub.gamma_I[j]) << "  gamma_II = " << fixed(sub.gamma_II[j])
          << "\n";
    }
    out << "  naive   sum p gamma  I/II " << fixed(sub.naive_I) << " " << fixed(sub.naive_II)
        << "\n"
        << "  proper  arg sum      I/II " << fixed(sub.proper_I) << " " << fixed(sub.proper_II)
        << "\n"
        << "  resultant            I/II " << fixed(sub.resultant_I) << " "
        << fixed(sub.resultant_II) << "\n"
        << "  gamma_I + gamma_II        " << fixed(sum) << "  additivity gap "
        << sci(circle_distance(composite, sum)) << "\n";
  }
}

void add_model_options(CLI::App* cmd, ModelParams& params, std::string& coupling) {
  cmd->add_option("--theta", params.theta, "polar angle of the drive field (radians)");
  cmd->add_option("--g", params.g, "coupling strength");
  cmd->add_option("--coupling", coupling, "heisenberg | xy | ising_zz");
  cmd->add_option("--n-time", params.n_time, "loop samples N");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Berry phases of a driven two-spin system and its subsystems", "geophase"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // sweep
  SweepConfig sweep;
  std::string sweep_coupling = "xy";
  std::string config_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep g at fixed theta and write tables");
  auto* o_theta = sweep_cmd->add_option("--theta", sweep.theta, "polar angle (radians)");
  auto* o_gmin = sweep_cmd->add_option("--g-min", sweep.g_min, "first coupling value");
  auto* o_gmax = sweep_cmd->add_option("--g-max", sweep.g_max, "last coupling value");
  auto* o_gsteps = sweep_cmd->add_option("--g-steps", sweep.g_steps, "number of g points");
  auto* o_coupling = sweep_cmd->add_option("--coupling", sweep_coupling, "coupling form");
  auto* o_ntime = sweep_cmd->add_option("--n-time", sweep.n_time, "loop samples N");
  auto* o_csv = sweep_cmd->add_option("--csv", sweep.csv, "CSV output path");
  auto* o_json = sweep_cmd->add_option("--json", sweep.json, "JSON output path");
  auto* o_svg = sweep_cmd->add_option("--svg", sweep.svg, "SVG output path");
  sweep_cmd->add_option("--config", config_path, "JSON config; flags override its keys");

  // audit
  ModelParams audit_params{0.7853981633974483, 0.5, CouplingForm::xy, 4096};
  std::string audit_coupling = "xy";
  int trials = 100;
  std::uint64_t seed = 42;
  std::string audit_json;
  auto* audit_cmd = app.add_subcommand("audit", "gauge audit of the two mixed-phase definitions");
  audit_cmd->add_option("--trials", trials, "number of random gauge trials");
  audit_cmd->add_option("--seed", seed, "RNG seed");
  add_model_options(audit_cmd, audit_params, audit_coupling);
  audit_cmd->add_option("--json", audit_json, "write the full report as JSON");

  // single
  ModelParams single_params{0.7853981633974483, 0.5, CouplingForm::xy, 4096};
  std::string single_coupling = "xy";
  auto* single_cmd = app.add_subcommand("single", "phase report for one (theta, g) point");
  add_model_options(single_cmd, single_params, single_coupling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sweep_cmd) {
      SweepConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          err << "error: cannot read config '" << config_path << "'\n";
          return kExitUsage;
        }
        apply_config_json(nlohmann::json::parse(in), config);
      }
      if (o_theta->count()) config.theta = sweep.theta;
      if (o_gmin->count()) config.g_min = sweep.g_min;
      if (o_gmax->count()) config.g_max = sweep.g_max;
      if (o_gsteps->count()) config.g_steps = sweep.g_steps;
      if (o_coupling->count()) config.coupling_form = parse_coupling_form(sweep_coupling);
      if (o_ntime->count()) config.n_time = sweep.n_time;
      if (o_csv->count()) config.csv = sweep.csv;
      if (o_json->count()) config.json = sweep.json;
      if (o_svg->count()) config.svg = sweep.svg;
      config.validate();

      const PhaseTable table = run_sweep(config);
      if (!config.csv.empty()) emit_csv(table, config.csv);
      if (!config.json.empty()) emit_json(table, config, config.json);
      if (!config.svg.empty()) emit_svg(table, config, config.svg);
      if (config.csv.empty() && config.json.empty() && config.svg.empty()) out << format_csv(table);
      int failed = 0;
      for (const PhaseRow& row : table)
        for (const LevelEntry& e : row.levels) failed += e.status != "ok";
      err << "sweep: " << table.size() << " points, " << failed << " failed cells\n";
      return 0;
    }

    if (*audit_cmd) {
      audit_params.coupling_form = parse_coupling_form(audit_coupling);
      audit_params.validate();
      const AuditReport report = gauge_audit(audit_params, trials, seed);
      print_audit(out, report);
      if (!audit_json.empty()) {
        std::ofstream file(audit_json, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open '" + audit_json + "' for writing");
        file << audit_to_json(report, audit_params, seed).dump(2) << "\n";
      }
      const auto violations = audit_violations(report);
      for (const auto& v : violations) err << "contract violated: " << v << "\n";
      return violations.empty() ? 0 : kExitNumerical;
    }

    if (*single_cmd) {
      single_params.coupling_form = parse_coupling_form(single_coupling);
      single_params.validate();
      print_single(out, single_params);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace geophase
