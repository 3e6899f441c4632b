#ifndef GEOPHASE_HOLONOMY_HPP
#define GEOPHASE_HOLONOMY_HPP

#include <array>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "geophase/model.hpp"
#include "geophase/numerics.hpp"

namespace geophase {

/// One instantaneous eigenstate of H(s) sampled at s_k = k / N, k = 0..N.
/// Sample phases are whatever the eigensolver produced (raw gauge).
struct EigenPath {
  int label = 0;  // 1..4, ascending energy at s = 0
  std::vector<Ket4> samples;
  std::vector<double> energies;
  double min_gap = std::numeric_limits<double>::infinity();
  double min_step_overlap = 1.0;

  int steps() const { return static_cast<int>(samples.size()) - 1; }
};

/// A path whose last sample is bit-identical to its first. Only make_cyclic
/// and apply_gauge produce these.
template <int Dim>
struct CyclicPath {
  int label = 0;
  std::vector<Ket<double, Dim>> samples;

  int steps() const { return static_cast<int>(samples.size()) - 1; }
};

struct TrackingOptions {
  double gap_threshold = 1e-6;
  double overlap_threshold = 0.99;
  // Gaps at or below this (relative to max(1, |H|)) count as exact
  // degeneracies rather than near-crossings.
  double exact_degeneracy = 1e-12;
};

/// Follows the four instantaneous eigenstates of the model around the loop.
///
/// Non-degenerate levels are matched step to step by maximum overlap. A level
/// cluster that is exactly degenerate at every sample is carried as a frame:
/// the previous frame is projected onto the new eigenspace and re-orthonormalized
/// (symmetric orthonormalization), and at s = 0 the frame diagonalizes total
/// S_z compressed onto the eigenspace. Such a cluster is accepted only if its
/// loop holonomy is a multiple of the identity, since otherwise the individual
/// phases depend on the basis.
///
/// Throws GapCollapse when a gap falls below gap_threshold without being an
/// exact, loop-wide degeneracy, and StepAmbiguity when consecutive samples do
/// not match cleanly.
std::array<EigenPath, 4> track_eigenpaths(const ModelParams& params,
                                          const TrackingOptions& options = {});

/// Same, for any loop s -> H(s) sampled at s_k = k / n_time. The loop must
/// close: H(1) is expected to equal H(0).
std::array<EigenPath, 4> track_eigenpaths(const std::function<Operator4(double)>& loop,
                                          int n_time, const TrackingOptions& options = {});

inline constexpr double kZeroOverlap = 1e-12;

template <int Dim>
std::complex<double> overlap(const Ket<double, Dim>& a, const Ket<double, Dim>& b) {
  return a.dot(b);  // conjugates a
}

/// Closed-loop Pancharatnam holonomy -arg( prod_k <psi_k|psi_{k+stride}> <psi_N|psi_0> )
/// over every stride-th sample, in (-pi, pi]. stride must divide N.
template <int Dim>
double pancharatnam_holonomy(std::span<const Ket<double, Dim>> samples, int stride = 1) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 1 || stride < 1 || n % stride != 0) {
    throw Error(ErrorCode::InvalidArgument, "stride must divide the number of loop steps");
  }
  std::complex<double> product = 1.0;
  auto accumulate = [&](const Ket<double, Dim>& a, const Ket<double, Dim>& b) {
    const std::complex<double> o = overlap<Dim>(a, b);
    const double mag = std::abs(o);
    if (mag < kZeroOverlap) {
      throw Error(ErrorCode::ZeroOverlap, "consecutive samples are orthogonal");
    }
    // Unit factors keep the running product away from underflow.
    product *= o / mag;
  };
  for (int k = 0; k < n; k += stride) accumulate(samples[k], samples[k + stride]);
  accumulate(samples[n], samples[0]);
  return -principal_arg(product);
}

/// Richardson correction (Phi_N - Phi_{N/2}) / 3 for the O(1/N^2) error of
/// the discrete holonomy on a smooth loop. The difference is taken on the
/// circle, so the correction is small and rephasing-invariant. Odd N gets no
/// correction.
template <int Dim>
double richardson_correction(std::span<const Ket<double, Dim>> samples) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 2 || n % 2 != 0) return 0.0;
  const double fine = pancharatnam_holonomy<Dim>(samples, 1);
  const double coarse = pancharatnam_holonomy<Dim>(samples, 2);
  return wrap_angle(fine - coarse) / 3.0;
}

/// Berry phase modulo 2 pi, in (-pi, pi]. Invariant under independent
/// rephasing of every sample.
template <int Dim>
double berry_phase_mod2pi(std::span<const Ket<double, Dim>> samples) {
  return wrap_angle(pancharatnam_holonomy<Dim>(samples, 1) + richardson_correction<Dim>(samples));
}

inline double berry_phase_mod2pi(const EigenPath& path) {
  return berry_phase_mod2pi<4>(path.samples);
}

template <int Dim>
double berry_phase_mod2pi(const CyclicPath<Dim>& path) {
  return berry_phase_mod2pi<Dim>(path.samples);
}

/// Per-step connection values -arg <psi_k|psi_{k+1}>, k = 0..N-1.
template <int Dim>
std::vector<double> step_phases(std::span<const Ket<double, Dim>> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const std::complex<double> o = overlap<Dim>(samples[k], samples[k + 1]);
    if (std::abs(o) < kZeroOverlap) {
      throw Error(ErrorCode::ZeroOverlap, "consecutive samples are orthogonal");
    }
    out.push_back(-principal_arg(o));
  }
  return out;
}

/// Parallel-transports the path and spreads the residual holonomy evenly over
/// the steps, then closes it exactly (psi_N := psi_0). Every step of the result
/// carries the same connection value Phi_N / N, where Phi_N is the raw
/// discrete holonomy, so the unwrapped phase of the result has zero winding.
template <int Dim>
CyclicPath<Dim> make_cyclic(std::span<const Ket<double, Dim>> samples, int label = 0) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "path needs at least one step");
  const double holonomy = pancharatnam_holonomy<Dim>(samples, 1);

  CyclicPath<Dim> out;
  out.label = label;
  out.samples.resize(samples.size());
  out.samples[0] = samples[0];
  for (int k = 0; k < n; ++k) {
    const std::complex<double> o = overlap<Dim>(out.samples[k], samples[k + 1]);
    out.samples[k + 1] = samples[k + 1] * (std::conj(o) / std::abs(o));
  }
  for (int k = 1; k < n; ++k) {
    out.samples[k] *= std::polar(1.0, -holonomy * static_cast<double>(k) / n);
  }
  out.samples[n] = out.samples[0];
  return out;
}

template <int Dim>
CyclicPath<Dim> make_cyclic(const CyclicPath<Dim>& path) {
  return make_cyclic<Dim>(std::span<const Ket<double, Dim>>(path.samples), path.label);
}

inline CyclicPath<4> make_cyclic(const EigenPath& path) {
  return make_cyclic<4>(std::span<const Ket4>(path.samples), path.label);
}

/// Representative-dependent phase: the sum of per-step connection values plus
/// the Richardson correction. Congruent to berry_phase_mod2pi; a gauge with
/// winding m shifts it by exactly 2 pi m.
template <int Dim>
double unwrapped_phase(const CyclicPath<Dim>& path) {
  const std::span<const Ket<double, Dim>> samples(path.samples);
  if (samples.size() < 2 || samples.back() != samples.front()) {
    throw Error(ErrorCode::InvalidArgument, "path is not exactly cyclic");
  }
  double total = 0.0;
  for (const double step : step_phases<Dim>(samples)) {
    if (std::abs(step) >= std::numbers::pi / 2) {
      throw Error(ErrorCode::StepTooCoarse,
                  "per-step phase reaches pi/2; increase the number of loop samples N");
    }
    total += step;
  }
  return total + richardson_correction<Dim>(samples);
}

}  // namespace geophase

#endif  // GEOPHASE_HOLONOMY_HPP
