#pragma once

// Independent reference computations. Nothing here calls into the library
// beyond its plain value types.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

/// Arithmetic-geometric mean with the "right" square root at every step
/// (|a' - b'| <= |a' + b'|).
inline cplx agm(cplx a, cplx b) {
  for (int k = 0; k < 60 && std::abs(a - b) > 1e-16 * std::abs(a); ++k) {
    const cplx a1 = 0.5 * (a + b);
    cplx b1 = std::sqrt(a * b);
    if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;
    a = a1;
    b = b1;
  }
  return a;
}

/// Representative of tau in the standard fundamental domain of SL2(Z).
inline cplx reduce_tau(cplx tau) {
  if (tau.imag() < 0) tau = -tau;
  for (int k = 0; k < 100; ++k) {
    tau -= std::round(tau.real());
    if (std::abs(tau) >= 1.0 - 1e-15) break;
    tau = -1.0 / tau;
  }
  return tau;
}

/// Distance of two moduli in the fundamental domain, allowing for the
/// identified boundary arcs.
inline double modulus_distance(cplx a, cplx b) {
  a = reduce_tau(a);
  b = reduce_tau(b);
  double d = std::abs(a - b);
  for (double shift : {-1.0, 1.0}) d = std::min(d, std::abs(a + shift - b));
  d = std::min(d, std::abs(-std::conj(a) - b));
  return d;
}

/// tau of y^2 = (x - e1)(x - e2)(x - e3) from the two half-periods
/// pi / (2 M(sqrt(e1 - e3), sqrt(e1 - e2))) and i pi / (2 M(sqrt(e1 - e3), sqrt(e2 - e3))).
inline cplx elliptic_tau(cplx e1, cplx e2, cplx e3) {
  const cplx w1 = pi / (2.0 * agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2)));
  const cplx w2 = cplx(0, 1) * pi / (2.0 * agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)));
  return reduce_tau(w2 / w1);
}

/// Composite Simpson rule for a complex integrand on [a, b].
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

/// Enneper surface with x(0) = 0: Re of the antiderivative of
/// (1/2 (1 - z^2), i/2 (1 + z^2), z).
inline Eigen::Vector3d enneper(cplx z) {
  const cplx I(0, 1);
  return {std::real(0.5 * z - z * z * z / 6.0), std::real(I * (0.5 * z + z * z * z / 6.0)), std::real(0.5 * z * z)};
}

/// Residual of the implicit catenoid (x - 1)^2 + y^2 = cosh^2 z traced by the
/// gallery data g = z + 1, phi_3 = dz / (z + 1), anchored at z = 0.
inline double catenoid_residual(const Eigen::Vector3d& x) {
  const double c = std::cosh(x.z());
  return std::abs((x.x() - 1.0) * (x.x() - 1.0) + x.y() * x.y() - c * c) / (c * c);
}

/// Stern's diatomic sequence fusc(0..n) by its defining recurrence.
inline std::vector<std::int64_t> fusc_table(std::int64_t n) {
  std::vector<std::int64_t> f(std::size_t(n) + 2, 0);
  f[1] = 1;
  for (std::int64_t k = 2; k <= n + 1; ++k) f[k] = k % 2 ? f[k / 2] + f[k / 2 + 1] : f[k / 2];
  return f;
}

/// Distance from u to { r v + x : <x, v> = 0, |x| >= 1/n } by minimising over
/// the rim circle and the plane separately.
inline double distance_to_holed_plane(const Eigen::Vector3d& u, const Eigen::Vector3d& v, double r, double n) {
  const Eigen::Vector3d centre = r * v;
  const Eigen::Vector3d d = u - centre;
  const double h = d.dot(v);
  const Eigen::Vector3d in_plane = d - h * v;
  const double rho = in_plane.norm();
  if (rho >= 1.0 / n) return std::abs(h);
  // Nearest rim point lies along the in-plane direction (any direction if rho = 0).
  Eigen::Vector3d dir = in_plane;
  if (rho == 0.0) dir = v.unitOrthogonal();
  const Eigen::Vector3d rim = centre + dir.normalized() / n;
  return (u - rim).norm();
}

/// Number of zeros of h on the finite part of a curve, as the winding number
/// of prod_k h(z, w_k(z)) along |z| = R; the product is symmetric in the
/// sheets so no continuation is needed.
inline int zeros_by_winding(const std::function<std::vector<cplx>(cplx)>& fiber,
                            const std::function<cplx(cplx, cplx)>& h, double R, int samples = 20000) {
  double turn = 0.0;
  cplx prev{};
  for (int k = 0; k <= samples; ++k) {
    const cplx z = std::polar(R, 2.0 * pi * k / samples);
    cplx prod = 1.0;
    for (cplx w : fiber(z)) prod *= h(z, w);
    if (k > 0) turn += std::arg(prod / prev);
    prev = prod;
  }
  return static_cast<int>(std::lround(turn / (2.0 * pi)));
}

}  // namespace oracle
