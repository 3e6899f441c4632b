#include "geophase/gauge.hpp"

#include <random>

#include "geophase/parallel.hpp"
#include "geophase/subsystem.hpp"

namespace geophase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Uniform in [lo, hi] by rejection, so no modulo bias.
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return lo + static_cast<int>(x % range);
}

GaugeFunction draw_gauge(std::mt19937_64& rng, int max_winding, int max_harmonics,
                         double amplitude, std::optional<int> force_winding) {
  if (max_winding < 1) throw Error(ErrorCode::InvalidArgument, "max_winding must be >= 1");
  if (max_harmonics < 0 || max_harmonics > kMaxHarmonics) {
    throw Error(ErrorCode::InvalidArgument, "max_harmonics must lie in [0, 8]");
  }
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "amplitude must lie in [0, 1]");
  }
  GaugeFunction gauge;
  const int drawn = uniform_int(rng, -max_winding, max_winding);
  gauge.winding = force_winding.value_or(drawn);
  for (int k = 0; k < max_harmonics; ++k) {
    const double a = uniform_real(rng, -amplitude, amplitude);
    const double b = uniform_real(rng, -amplitude, amplitude);
    gauge.harmonics.emplace_back(a, b);
  }
  return gauge;
}

struct BranchSet {
  std::vector<double> weights;
  std::vector<CyclicPath<2>> paths;
  std::vector<double> base_gammas;
  double base_naive = 0.0;
  MixedPhase base_proper;
};

struct LevelFixture {
  CyclicPath<4> composite;
  double composite_phase = 0.0;
  std::array<BranchSet, 2> subsystems;  // I, II
};

LevelFixture prepare(const EigenPath& path, double overlap_threshold) {
  LevelFixture fx;
  fx.composite = make_cyclic(path);
  fx.composite_phase = berry_phase_mod2pi(path);

  const SchmidtPath sp = schmidt_paths(path, overlap_threshold);
  if (sp.weight_drift > kMaxWeightDrift) {
    throw Error(ErrorCode::WeightDrift, "Schmidt weights drift around the loop");
  }
  double total = 0.0;
  for (const auto& b : sp.branches) total += b.weights.front();
  for (int side = 0; side < 2; ++side) {
    BranchSet& set = fx.subsystems[side];
    for (const auto& b : sp.branches) {
      set.weights.push_back(b.weights.front() / total);
      const auto& samples = side == 0 ? b.u : b.v;
      set.paths.push_back(make_cyclic<2>(samples));
      set.base_gammas.push_back(unwrapped_phase(set.paths.back()));
    }
    set.base_naive = naive_mixed_phase(set.weights, set.base_gammas);
    set.base_proper = proper_mixed_phase(set.weights, set.base_gammas);
  }
  return fx;
}

}  // namespace

double GaugeFunction::operator()(double s) const {
  const double frac = s - std::floor(s);
  double phi = kTwoPi * winding * s;
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    const double angle = kTwoPi * static_cast<double>(i + 1) * frac;
    phi += harmonics[i].first * std::sin(angle) + harmonics[i].second * (std::cos(angle) - 1.0);
  }
  return phi;
}

GaugeFunction random_gauge(std::uint64_t seed, int max_winding, int max_harmonics,
                           double amplitude, std::optional<int> force_winding) {
  std::mt19937_64 rng(seed);
  return draw_gauge(rng, max_winding, max_harmonics, amplitude, force_winding);
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 finalizer over (seed, trial).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<std::string> audit_violations(const AuditReport& report) {
  std::vector<std::string> out;
  auto check = [&](bool ok, const char* what) {
    if (!ok) out.emplace_back(what);
  };
  check(report.max_branch_shift_error <= kBranchShiftTolerance,
        "branch shift differs from 2 pi m by more than 1e-8");
  check(report.max_naive_shift_error <= kNaiveShiftTolerance,
        "naive shift differs from 2 pi sum p m by more than 1e-8");
  check(report.max_proper_deviation <= kProperTolerance,
        "proper mixed phase moved by more than 1e-9");
  check(report.max_magnitude_deviation <= kProperTolerance,
        "resultant magnitude moved by more than 1e-9");
  check(report.max_composite_deviation <= kCompositeTolerance,
        "composite phase moved by more than 1e-12");
  check(report.unequal_entangled_sets == 0 ||
            report.max_naive_deviation_unequal >= kAmbiguityWitness,
        "no trial exhibits a naive deviation of at least 0.1");
  return out;
}

AuditReport gauge_audit(const ModelParams& params, int trials, std::uint64_t seed,
                        const AuditOptions& options) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const auto paths = track_eigenpaths(params, options.tracking);

  std::array<LevelFixture, 4> fixtures;
  for (int m = 0; m < 4; ++m) fixtures[m] = prepare(paths[m], options.tracking.overlap_threshold);

  const std::optional<int> forced =
      options.zero_winding ? std::optional<int>(0) : std::nullopt;

  AuditReport report;
  report.trials = trials;
  report.records.resize(static_cast<std::size_t>(trials));

  parallel_for(trials, [&](int t) {
    TrialRecord& rec = report.records[t];
    rec.seed = trial_seed(seed, t);
    std::mt19937_64 rng(rec.seed);
    auto draw = [&] {
      return draw_gauge(rng, options.max_winding, options.max_harmonics, options.amplitude,
                        forced);
    };

    for (const LevelFixture& fx : fixtures) {
      const GaugeFunction composite_gauge = draw();
      const double composite =
          berry_phase_mod2pi(apply_gauge(fx.composite, composite_gauge));
      rec.composite_deviation =
          std::max(rec.composite_deviation, circle_distance(composite, fx.composite_phase));

      for (const BranchSet& set : fx.subsystems) {
        std::vector<double> gammas;
        std::vector<int> windings;
        double expected_naive_shift = 0.0;
        for (std::size_t j = 0; j < set.paths.size(); ++j) {
          const GaugeFunction gauge = draw();
          const double gamma = unwrapped_phase(apply_gauge(set.paths[j], gauge));
          rec.branch_shift_error =
              std::max(rec.branch_shift_error,
                       std::abs(gamma - set.base_gammas[j] - kTwoPi * gauge.winding));
          expected_naive_shift += set.weights[j] * kTwoPi * gauge.winding;
          gammas.push_back(gamma);
          windings.push_back(gauge.winding);
        }
        rec.windings.insert(rec.windings.end(), windings.begin(), windings.end());

        const double naive = naive_mixed_phase(set.weights, gammas);
        const MixedPhase proper = proper_mixed_phase(set.weights, gammas);
        const double naive_deviation = circle_distance(naive, set.base_naive);
        rec.naive_shift_error = std::max(
            rec.naive_shift_error, std::abs(naive - set.base_naive - expected_naive_shift));
        rec.naive_deviation_mod2pi = std::max(rec.naive_deviation_mod2pi, naive_deviation);
        rec.proper_deviation =
            std::max(rec.proper_deviation, circle_distance(proper.phase, set.base_proper.phase));
        rec.magnitude_deviation = std::max(
            rec.magnitude_deviation, std::abs(proper.magnitude - set.base_proper.magnitude));

        const bool entangled = set.weights.size() > 1;
        const bool unequal = std::adjacent_find(windings.begin(), windings.end(),
                                                std::not_equal_to<>()) != windings.end();
        if (entangled && unequal) {
          ++rec.unequal_entangled_sets;
          rec.naive_deviation_unequal = std::max(rec.naive_deviation_unequal, naive_deviation);
        }
      }
    }
  });

  for (const TrialRecord& rec : report.records) {
    report.max_branch_shift_error = std::max(report.max_branch_shift_error, rec.branch_shift_error);
    report.max_naive_shift_error = std::max(report.max_naive_shift_error, rec.naive_shift_error);
    report.max_naive_deviation_mod2pi =
        std::max(report.max_naive_deviation_mod2pi, rec.naive_deviation_mod2pi);
    report.max_naive_deviation_unequal =
        std::max(report.max_naive_deviation_unequal, rec.naive_deviation_unequal);
    report.max_proper_deviation = std::max(report.max_proper_deviation, rec.proper_deviation);
    report.max_magnitude_deviation =
        std::max(report.max_magnitude_deviation, rec.magnitude_deviation);
    report.max_composite_deviation =
        std::max(report.max_composite_deviation, rec.composite_deviation);
    report.unequal_entangled_sets += rec.unequal_entangled_sets;
  }
  return report;
}

}  // namespace geophase
