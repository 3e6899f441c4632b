#include <numbers>
#include <random>

#include "doctest.h"
#include "geophase/subsystem.hpp"
#include "test_util.hpp"

using namespace geophase;
using std::numbers::pi;
using testing::error_code_of;

namespace {

// Spin-1/2 coherent states along and against n(theta, s).
Ket2 along(double theta, double s) {
  return Ket2(std::cos(theta / 2), std::polar(std::sin(theta / 2), 2 * pi * s));
}
Ket2 against(double theta, double s) {
  return Ket2(-std::sin(theta / 2), std::polar(std::cos(theta / 2), 2 * pi * s));
}

// sqrt(p) |+n>|up> + sqrt(1-p) |-n>|down>, with spin II fixed.
EigenPath entangled_cone(double theta, double p, int n) {
  EigenPath path;
  path.label = 1;
  const Ket2 up(1, 0), down(0, 1);
  for (int k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    path.samples.push_back(std::sqrt(p) * kron<double>(along(theta, s), up) +
                           std::sqrt(1 - p) * kron<double>(against(theta, s), down));
  }
  return path;
}

Operator4 swap_operator() {
  Operator4 swap = Operator4::Zero();
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  return swap;
}

}  // namespace

TEST_CASE("g = 0 eigenpaths are products") {
  for (const auto form : {CouplingForm::heisenberg, CouplingForm::xy}) {
    for (const auto& path : track_eigenpaths({pi / 4, 0.0, form, 512})) {
      const auto sp = schmidt_paths(path);
      CHECK(sp.rank() == 1);
      CHECK(sp.weight_drift <= 1e-8);
      CHECK(sp.parent_label == path.label);
    }
  }
}

TEST_CASE("entangled eigenpaths keep constant weights") {
  for (const auto& path : track_eigenpaths({pi / 4, 0.5, CouplingForm::xy, 512})) {
    const auto sp = schmidt_paths(path);
    REQUIRE(sp.rank() == 2);
    CHECK(sp.weight_drift <= 1e-8);
    CHECK(sp.branches[0].weights.front() > sp.branches[1].weights.front());
    for (const auto& b : sp.branches) CHECK(b.u.size() == path.samples.size());
  }
}

TEST_CASE("equal Schmidt weights raise SchmidtDegenerate") {
  EigenPath bell;
  bell.label = 2;
  for (int k = 0; k <= 64; ++k) {
    Ket4 v(1.0, 0.0, 0.0, std::polar(1.0, 2 * pi * k / 64.0));
    bell.samples.push_back(v / std::sqrt(2.0));
  }
  CHECK(error_code_of([&] { schmidt_paths(bell); }) == ErrorCode::SchmidtDegenerate);
}

TEST_CASE("a rank change raises SchmidtDegenerate") {
  EigenPath path = entangled_cone(0.8, 0.7, 64);
  path.samples[10] = kron<double>(along(0.8, 10 / 64.0), Ket2(1, 0));
  CHECK(error_code_of([&] { schmidt_paths(path); }) == ErrorCode::SchmidtDegenerate);
}

TEST_CASE("branch phases match the cone oracle") {
  const double theta = 1.1, p = 0.8;
  const auto path = entangled_cone(theta, p, 4096);
  const auto sp = schmidt_paths(path);
  REQUIRE(sp.rank() == 2);
  CHECK(sp.branches[0].weights.front() == doctest::Approx(p).epsilon(1e-12));
  const auto phases = branch_phases(sp);
  CHECK(circle_distance(phases[0].gamma_I, -pi * (1 - std::cos(theta))) <= 1e-6);
  CHECK(circle_distance(phases[1].gamma_I, -pi * (1 + std::cos(theta))) <= 1e-6);
  CHECK(std::abs(phases[0].gamma_II) <= 1e-9);
  CHECK(std::abs(phases[1].gamma_II) <= 1e-9);
}

TEST_CASE("branch phases ignore how the composite samples are rephased") {
  const auto path = track_eigenpaths({0.9, 0.4, CouplingForm::xy, 512})[1];
  const auto base = branch_phases(schmidt_paths(path));
  EigenPath rephased = path;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (auto& v : rephased.samples) v *= std::polar(1.0, angle(rng));
  const auto moved = branch_phases(schmidt_paths(rephased));
  REQUIRE(moved.size() == base.size());
  for (std::size_t j = 0; j < base.size(); ++j) {
    CHECK(circle_distance(moved[j].gamma_I, base[j].gamma_I) <= 1e-12);
    CHECK(circle_distance(moved[j].gamma_II, base[j].gamma_II) <= 1e-12);
  }
}

TEST_CASE("swapping the spins swaps the subsystem phases") {
  const Operator4 swap = swap_operator();
  for (const auto& path : track_eigenpaths({pi / 4, 0.5, CouplingForm::xy, 512})) {
    EigenPath swapped = path;
    for (auto& v : swapped.samples) v = swap * v;
    const auto a = subsystem_report(path);
    const auto b = subsystem_report(swapped);
    CHECK(circle_distance(a.proper_I, b.proper_II) <= 1e-12);
    CHECK(circle_distance(a.proper_II, b.proper_I) <= 1e-12);
    CHECK(std::abs(a.resultant_I - b.resultant_II) <= 1e-12);
  }
}

TEST_CASE("mixed phase examples") {
  const std::vector<double> w{0.75, 0.25};
  const std::vector<double> g{0.4, -1.2};
  CHECK(naive_mixed_phase(w, g) == doctest::Approx(0.75 * 0.4 - 0.25 * 1.2));
  const auto mp = proper_mixed_phase(w, g);
  const std::complex<double> z = 0.75 * std::polar(1.0, 0.4) + 0.25 * std::polar(1.0, -1.2);
  CHECK(mp.phase == doctest::Approx(std::arg(z)).epsilon(1e-15));
  CHECK(mp.magnitude == doctest::Approx(std::abs(z)).epsilon(1e-15));

  const std::vector<double> one{1.0}, gamma{2.5};
  CHECK(naive_mixed_phase(one, gamma) == 2.5);
  CHECK(proper_mixed_phase(one, gamma).phase == doctest::Approx(2.5));
  CHECK(proper_mixed_phase(one, gamma).magnitude == doctest::Approx(1.0));
}

TEST_CASE("cancelling phase factors raise VanishingResultant") {
  const std::vector<double> w{0.5, 0.5};
  const std::vector<double> g{0.3, 0.3 + pi};
  CHECK(error_code_of([&] { proper_mixed_phase(w, g); }) == ErrorCode::VanishingResultant);
}

TEST_CASE("malformed weights are rejected") {
  const std::vector<double> g{0.1, 0.2};
  const std::vector<double> short_sum{0.5, 0.4}, negative{1.5, -0.5}, unpaired{1.0};
  CHECK(error_code_of([&] { naive_mixed_phase(short_sum, g); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([&] { proper_mixed_phase(negative, g); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([&] { proper_mixed_phase(unpaired, g); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([&] { naive_mixed_phase({}, {}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("proper phase ignores 2 pi shifts; naive phase moves by 2 pi sum p m") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.01, 0.99), angle(-pi, pi);
  std::uniform_int_distribution<int> winding(-1000, 1000);
  for (int trial = 0; trial < 500; ++trial) {
    const double p = unit(rng);
    const std::vector<double> w{p, 1 - p};
    const std::vector<double> g{angle(rng), angle(rng)};
    const int m0 = winding(rng), m1 = winding(rng);
    const std::vector<double> shifted{g[0] + 2 * pi * m0, g[1] + 2 * pi * m1};

    const auto a = proper_mixed_phase(w, g);
    const auto b = proper_mixed_phase(w, shifted);
    CHECK(circle_distance(a.phase, b.phase) <= 1e-9);
    CHECK(std::abs(a.magnitude - b.magnitude) <= 1e-9);

    const double expected = 2 * pi * (p * m0 + (1 - p) * m1);
    CHECK(std::abs(naive_mixed_phase(w, shifted) - naive_mixed_phase(w, g) - expected) <= 1e-8);
  }
}

TEST_CASE("naive phase is ambiguous exactly when the state is entangled") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.05, 0.95), angle(-pi, pi);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = unit(rng);
    const std::vector<double> w{p, 1 - p};
    const std::vector<double> g{angle(rng), angle(rng)};
    const std::vector<double> shifted{g[0] + 2 * pi, g[1]};
    CHECK(circle_distance(naive_mixed_phase(w, g), naive_mixed_phase(w, shifted)) >= 1e-3);
  }
  const std::vector<double> one{1.0}, gamma{0.7}, gamma_shift{0.7 + 6 * pi};
  CHECK(circle_distance(naive_mixed_phase(one, gamma), naive_mixed_phase(one, gamma_shift)) <=
        1e-12);
}

TEST_CASE("subsystem phases add up to the composite phase only without coupling") {
  for (const auto& path : track_eigenpaths({pi / 4, 0.0, CouplingForm::xy, 4096})) {
    const auto r = subsystem_report(path);
    CHECK(r.weights.size() == 1);
    CHECK(circle_distance(berry_phase_mod2pi(path), r.proper_I + r.proper_II) <= 1e-8);
    CHECK(circle_distance(r.naive_I, r.proper_I) <= 1e-12);
  }
  double widest = 0.0;
  for (const auto& path : track_eigenpaths({pi / 4, 0.5, CouplingForm::xy, 4096})) {
    const auto r = subsystem_report(path);
    CHECK(r.weights.size() == 2);
    CHECK(r.weights[0] < 1 - 1e-6);
    CHECK(r.resultant_I > 0.0);
    CHECK(r.resultant_I <= 1.0 + 1e-12);
    widest = std::max(widest, circle_distance(berry_phase_mod2pi(path), r.proper_I + r.proper_II));
  }
  CHECK(widest > 1e-3);
}

TEST_CASE("drifting weights raise WeightDrift") {
  EigenPath path = entangled_cone(0.8, 0.7, 256);
  for (int k = 0; k <= 256; ++k) {
    const double s = k / 256.0, p = 0.7 + 0.05 * std::sin(2 * pi * s);
    path.samples[k] = std::sqrt(p) * kron<double>(along(0.8, s), Ket2(1, 0)) +
                      std::sqrt(1 - p) * kron<double>(against(0.8, s), Ket2(0, 1));
  }
  CHECK(error_code_of([&] { subsystem_report(path); }) == ErrorCode::WeightDrift);
}
