#pragma once

#include <string>
#include <utility>
#include <vector>

#include "minsurf/common.hpp"
#include "minsurf/curve.hpp"
#include "minsurf/newton.hpp"
#include "minsurf/wdata.hpp"

namespace minsurf {

/// xi_j = sum_i normalization(j, i) z^i dz / w, i = 0..nu-1, dual to the
/// a-cycles.
struct HolomorphicBasis {
  int nu = 0;
  Eigen::MatrixXcd normalization;

  /// Coefficients of xi_j dz at q.
  Eigen::VectorXcd operator()(const CurvePoint& q) const;
  /// Coefficients of the raw forms z^i / w at q.
  static Eigen::VectorXcd raw(int nu, const CurvePoint& q);
};

struct PeriodMatrix {
  Eigen::MatrixXcd pi;
};

struct PeriodData {
  HolomorphicBasis basis;
  PeriodMatrix matrix;
  std::vector<Cycle> cycles;
  /// Raw periods: a_raw(i, k) is the integral of z^i dz / w over a_k.
  Eigen::MatrixXcd a_raw, b_raw;
};

/// Integrates the raw basis over canonical_cycles, adaptively when
/// refinement < 0 and with a fixed Gauss rule of 2^refinement pieces per
/// traced step otherwise. Throws SingularAPeriods when cond(a_raw) > 1e10.
PeriodData period_matrix(const AlgebraicCurve& curve, int refinement = -1);

/// Largest |pi - pi^T| entry.
double symmetry_defect(const PeriodMatrix& P);
/// Smallest eigenvalue of Im pi.
double min_imaginary_eigenvalue(const PeriodMatrix& P);

/// Lattice generated over Z by the columns of (I, Pi), viewed in R^{2 nu}.
class JacobianLattice {
 public:
  explicit JacobianLattice(const PeriodMatrix& P);

  const Eigen::MatrixXcd& generators() const { return gen_; }
  /// Coordinates t with v = generators * t.
  Eigen::VectorXd coordinates(const Eigen::VectorXcd& v) const;
  /// Representative with coordinates in [0, 1).
  Eigen::VectorXcd reduce(const Eigen::VectorXcd& v) const;
  /// Euclidean distance to the nearest lattice vector, searching offsets in
  /// [-3, 3]^{2 nu} around the rounded coordinates.
  double distance(const Eigen::VectorXcd& v) const;

 private:
  Eigen::MatrixXcd gen_;
  Eigen::MatrixXd real_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct Divisor {
  std::vector<std::pair<CurvePoint, int>> entries;
  int degree() const;

  friend Divisor operator+(Divisor a, const Divisor& b);
  friend Divisor operator-(Divisor a, Divisor b);
};

/// Divisor of the polynomial function h: its finite zeros and the balancing
/// pole over infinity. With two places over infinity h must not involve w.
Divisor divisor_of(const AlgebraicCurve& curve, const Poly2& h);

struct AbelImage {
  Eigen::VectorXcd raw;
  Eigen::VectorXcd reduced;
};

/// sum n_j (integral from E to Q_j of xi), reduced modulo the lattice.
AbelImage abel_map(const AlgebraicCurve& curve, const PeriodData& periods, const CurvePoint& E, const Divisor& D);

struct PrincipalTest {
  bool principal = false;
  int degree = 0;
  double lattice_distance = 0.0;
};

PrincipalTest is_principal(const AlgebraicCurve& curve, const PeriodData& periods, const Divisor& D);

/// Branch points, with the place over infinity when deg q is odd; empty for
/// genus one, where the count bound is vacuous.
std::vector<CurvePoint> weierstrass_points(const AlgebraicCurve& curve);

enum class AnsatzMode { Linear, Exponential };

/// Which part of a period a target prescribes.
enum class TargetKind { Full, RealPart, ImagPart };

struct PeriodTarget {
  cplx value{0.0};
  TargetKind kind = TargetKind::Full;
};

/// theta(x) = (kappa + sum x_j f_j) dz or exp(g + sum x_j f_j) kappa dz, with
/// complex unknowns x and a fixed exponent g (`offset`, exponential mode only).
struct PeriodAnsatz {
  AlgebraicCurve curve = AlgebraicCurve::rational();
  AnsatzMode mode = AnsatzMode::Linear;
  RationalOnCurve kappa;
  RationalOnCurve offset;
  std::vector<RationalOnCurve> basis;
  std::vector<Cycle> cycles;
};

/// Periods of theta(x) over the ansatz cycles, on a fixed Gauss rule.
class PeriodMap {
 public:
  PeriodMap(const PeriodAnsatz& ansatz, int refinement = 1);
  Eigen::VectorXcd operator()(const Eigen::VectorXcd& x) const;
  int unknowns() const { return static_cast<int>(basis_size_); }

 private:
  struct Node {
    cplx weight;
    cplx kappa;
    Eigen::VectorXcd f;
  };
  AnsatzMode mode_;
  std::size_t basis_size_;
  std::vector<std::vector<Node>> nodes_;
};

struct PeriodSolution {
  Eigen::VectorXcd x;
  NewtonResult newton;
};

/// Damped Newton from x = 0 on the real residual assembled from the targets.
PeriodSolution solve_periods(const PeriodAnsatz& ansatz, const std::vector<PeriodTarget>& targets,
                             const NewtonOptions& opt = {}, int refinement = 1);

/// Perturbs phi_3 = (kappa + sum x_j f_j) dz with the Gauss map of W fixed,
/// so that Im of the period of F dz over cycle k equals flux[k] and Re
/// vanishes.
struct FluxPrescription {
  WeierstrassData data;
  Eigen::VectorXcd x;
  NewtonResult newton;
  ValidationReport report;
  /// The perturbed data fails validation.
  bool regression = false;
};

FluxPrescription prescribe_flux(const WeierstrassData& W, const PeriodAnsatz& family, const std::vector<Vec3>& flux,
                                const NewtonOptions& opt = {}, int refinement = 1);

}  // namespace minsurf
