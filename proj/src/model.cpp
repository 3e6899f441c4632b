#include "geophase/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace geophase {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
using Complex = std::complex<double>;
}  // namespace

std::string_view to_string(CouplingForm form) noexcept {
  switch (form) {
    case CouplingForm::heisenberg: return "heisenberg";
    case CouplingForm::xy: return "xy";
    case CouplingForm::ising_zz: return "ising_zz";
  }
  return "unknown";
}

CouplingForm parse_coupling_form(std::string_view name) {
  if (name == "heisenberg") return CouplingForm::heisenberg;
  if (name == "xy") return CouplingForm::xy;
  if (name == "ising_zz") return CouplingForm::ising_zz;
  throw Error(ErrorCode::InvalidArgument, "unknown coupling form '" + std::string(name) + "'");
}

void ModelParams::validate() const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, pi]");
  }
  if (!std::isfinite(g)) throw Error(ErrorCode::InvalidArgument, "g must be finite");
  if (n_time < 16) throw Error(ErrorCode::InvalidArgument, "n_time must be at least 16");
}

namespace pauli {
Operator2 identity() { return Operator2::Identity(); }
Operator2 x() {
  Operator2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Operator2 y() {
  Operator2 m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
Operator2 z() {
  Operator2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Eigen::Vector3d field_direction(double theta, double s) {
  const double phi = kTwoPi * (s - std::floor(s));
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

Operator4 coupling_operator(CouplingForm form) {
  using namespace pauli;
  switch (form) {
    case CouplingForm::heisenberg:
      return kron(x(), x()) + kron(y(), y()) + kron(z(), z());
    case CouplingForm::xy:
      return kron(x(), x()) + kron(y(), y());
    case CouplingForm::ising_zz:
      return kron(z(), z());
  }
  return Operator4::Zero();
}

Operator4 hamiltonian(const ModelParams& params, double s) {
  const Eigen::Vector3d n = field_direction(params.theta, s);
  Operator2 drive;
  drive << n.z(), Complex(n.x(), -n.y()), Complex(n.x(), n.y()), -n.z();
  return kron(drive, pauli::identity()) + params.g * coupling_operator(params.coupling_form);
}

Operator4 total_sz() {
  return 0.5 * (kron(pauli::z(), pauli::identity()) + kron(pauli::identity(), pauli::z()));
}

double covariance_check(const ModelParams& params, int samples) {
  const Operator4 h0 = hamiltonian(params, 0.0);
  const Eigen::Vector4d sz = total_sz().diagonal().real();
  double worst = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double s = static_cast<double>(k) / samples;
    Ket4 phases;
    for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, -kTwoPi * s * sz(i));
    const Operator4 u = phases.asDiagonal();
    const Operator4 rotated = u * h0 * u.adjoint();
    worst = std::max(worst, max_abs(hamiltonian(params, s) - rotated));
  }
  return worst;
}

}  // namespace geophase
