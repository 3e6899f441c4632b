#ifndef GEOPHASE_MODEL_HPP
#define GEOPHASE_MODEL_HPP

#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "geophase/numerics.hpp"

namespace geophase {

enum class CouplingForm { heisenberg, xy, ising_zz };

std::string_view to_string(CouplingForm form) noexcept;
CouplingForm parse_coupling_form(std::string_view name);

/// A conical field loop of unit magnitude on spin I, coupled to spin II.
struct ModelParams {
  double theta = 0.0;  // polar angle of the drive, [0, pi]
  double g = 0.0;      // coupling strength in units of the field magnitude
  CouplingForm coupling_form = CouplingForm::xy;
  int n_time = 4096;  // loop samples N; the path carries N + 1 states

  void validate() const;
};

namespace pauli {
Operator2 identity();
Operator2 x();
Operator2 y();
Operator2 z();
}  // namespace pauli

/// n(s) = (sin(theta) cos(2 pi s), sin(theta) sin(2 pi s), cos(theta)).
Eigen::Vector3d field_direction(double theta, double s);

Operator4 coupling_operator(CouplingForm form);

/// H(s) = n(s).sigma x 1 + g C. The loop angle is reduced to s mod 1 before
/// evaluating the trig functions so that H(s + 1) reproduces H(s) bit for bit.
Operator4 hamiltonian(const ModelParams& params, double s);

/// Total S_z = (sigma_z x 1 + 1 x sigma_z) / 2, the generator of the loop.
Operator4 total_sz();

/// max_s || H(s) - U(s) H(0) U(s)^dagger ||_max with U(s) = exp(-i 2 pi s S_z).
double covariance_check(const ModelParams& params, int samples = 64);

}  // namespace geophase

#endif  // GEOPHASE_MODEL_HPP
