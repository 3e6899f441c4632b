#ifndef GEOPHASE_NUMERICS_HPP
#define GEOPHASE_NUMERICS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "geophase/error.hpp"

namespace geophase {

template <typename Scalar, int Dim>
using Ket = Eigen::Matrix<std::complex<Scalar>, Dim, 1>;

template <typename Scalar, int Dim>
using Operator = Eigen::Matrix<std::complex<Scalar>, Dim, Dim>;

using Ket2 = Ket<double, 2>;
using Ket4 = Ket<double, 4>;
using Operator2 = Operator<double, 2>;
using Operator4 = Operator<double, 4>;

/// Largest entry magnitude; the scale every relative tolerance is taken against.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar, int Dim>
struct Eigensystem {
  Eigen::Matrix<Scalar, Dim, 1> eigenvalues;  // ascending
  Operator<Scalar, Dim> eigenvectors;         // column k pairs with eigenvalues(k)
};

/// Cyclic complex Jacobi diagonalization of a small Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot element with a diagonal
/// unitary, then applies a real Givens rotation. Sweeps stop once the
/// off-diagonal Frobenius norm falls below machine precision relative to the
/// matrix scale. Output ordering is by ascending eigenvalue; ties keep the
/// column order the sweeps produced, which is a deterministic function of the
/// input bits. Degenerate eigenspaces come back in an arbitrary orthonormal
/// basis.
template <typename Scalar, int Dim>
Eigensystem<Scalar, Dim> hermitian_eigensystem(const Operator<Scalar, Dim>& h) {
  using Complex = std::complex<Scalar>;
  const Scalar scale = max_abs(h);
  if (hermiticity_defect(h) > Scalar(1e-14) * scale) {
    throw Error(ErrorCode::NonHermitianInput, "matrix deviates from its adjoint");
  }

  Operator<Scalar, Dim> a = h;
  Operator<Scalar, Dim> v = Operator<Scalar, Dim>::Identity(h.rows(), h.cols());
  const int n = static_cast<int>(h.rows());
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  auto off_norm = [&] {
    Scalar acc = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) acc += std::norm(a(p, q));
    return std::sqrt(acc);
  };

  for (int sweep = 0; sweep < 64 && off_norm() > eps * scale; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Scalar mag = std::abs(a(p, q));
        if (mag == Scalar(0)) continue;
        const Complex phase = a(p, q) / mag;
        const Scalar app = a(p, p).real();
        const Scalar aqq = a(q, q).real();
        const Scalar theta = (aqq - app) / (Scalar(2) * mag);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        // G = diag(1, conj(phase)) on (p, q) followed by the real rotation.
        const Complex gpp = c, gpq = s;
        const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

        for (int k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = Complex(0);
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (int k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  Eigensystem<Scalar, Dim> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]).normalized();
  }
  return out;
}

template <typename Scalar>
struct SchmidtBranch {
  Scalar weight;
  Ket<Scalar, 2> u;  // subsystem I
  Ket<Scalar, 2> v;  // subsystem II
};

template <typename Scalar>
using SchmidtDecomposition = std::vector<SchmidtBranch<Scalar>>;

inline constexpr double kSchmidtDropThreshold = 1e-12;

/// Amplitudes ordered |uu>, |ud>, |du>, |dd>; the first spin is subsystem I.
template <typename Scalar>
Operator<Scalar, 2> amplitude_matrix(const Ket<Scalar, 4>& psi) {
  Operator<Scalar, 2> m;
  m << psi(0), psi(1), psi(2), psi(3);
  return m;
}

/// Schmidt decomposition of a two-qubit pure state via the reduced density
/// matrix of subsystem I. Branches are ordered by descending weight and
/// branches below kSchmidtDropThreshold are dropped. The partner vectors are
/// contractions v = (<u| x 1)|psi> / sqrt(p), so sum_j sqrt(p_j) u_j x v_j
/// reproduces psi with no leftover phase.
template <typename Scalar>
SchmidtDecomposition<Scalar> schmidt_decompose(const Ket<Scalar, 4>& psi) {
  const Operator<Scalar, 2> m = amplitude_matrix(psi);
  Operator<Scalar, 2> rho = m * m.adjoint();
  // Force exact Hermiticity; the product is Hermitian only up to rounding.
  rho = (rho + rho.adjoint()).eval() * Scalar(0.5);
  const auto es = hermitian_eigensystem<Scalar, 2>(rho);

  SchmidtDecomposition<Scalar> out;
  for (int k = 1; k >= 0; --k) {
    const Scalar p = es.eigenvalues(k);
    if (p < Scalar(kSchmidtDropThreshold)) continue;
    const Ket<Scalar, 2> u = es.eigenvectors.col(k);
    Ket<Scalar, 2> v = m.transpose() * u.conjugate();
    v /= std::sqrt(p);
    out.push_back({p, u, v.normalized()});
  }
  return out;
}

template <typename Scalar>
Ket<Scalar, 4> kron(const Ket<Scalar, 2>& a, const Ket<Scalar, 2>& b) {
  Ket<Scalar, 4> out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

template <typename Scalar>
Operator<Scalar, 4> kron(const Operator<Scalar, 2>& a, const Operator<Scalar, 2>& b) {
  Operator<Scalar, 4> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Principal argument in (-pi, pi]. std::arg maps -1 - 0i to -pi; that point is
/// folded onto +pi.
template <typename Scalar>
Scalar principal_arg(std::complex<Scalar> z) {
  if (std::abs(z) <= Scalar(1e-15)) {
    throw Error(ErrorCode::ZeroMagnitude, "argument of a vanishing complex number");
  }
  const Scalar a = std::arg(z);
  return a <= -std::numbers::pi_v<Scalar> ? std::numbers::pi_v<Scalar> : a;
}

/// Representative of an angle in (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar x) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar r = std::remainder(x, two_pi);
  if (r <= -std::numbers::pi_v<Scalar>) r += two_pi;
  return r;
}

/// Geodesic distance on the unit circle, in [0, pi].
template <typename Scalar>
Scalar circle_distance(Scalar a, Scalar b) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  return std::min(std::abs(std::remainder(a - b, two_pi)), std::numbers::pi_v<Scalar>);
}

}  // namespace geophase

#endif  // GEOPHASE_NUMERICS_HPP
