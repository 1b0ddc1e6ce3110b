#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "minsurf/common.hpp"

namespace minsurf {

/// Dense polynomial sum_{i,j} a(i,j) z^i w^j. Row index is the z-power,
/// column index the w-power. Storage is trimmed so that the last row and
/// column each hold a nonzero coefficient; the zero polynomial is a 1x1 zero.
template <typename Scalar>
class BivariatePolynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BivariatePolynomial() : a_(Coeffs::Zero(1, 1)) {}
  explicit BivariatePolynomial(Coeffs a) : a_(std::move(a)) { trim(); }

  static BivariatePolynomial constant(Scalar c) {
    Coeffs a(1, 1);
    a(0, 0) = c;
    return BivariatePolynomial(std::move(a));
  }
  static BivariatePolynomial monomial(int i, int j, Scalar c = Scalar(1)) {
    Coeffs a = Coeffs::Zero(i + 1, j + 1);
    a(i, j) = c;
    return BivariatePolynomial(std::move(a));
  }
  /// Univariate polynomial in z from ascending coefficients.
  static BivariatePolynomial in_z(const std::vector<Scalar>& c) {
    Coeffs a = Coeffs::Zero(std::max<std::size_t>(c.size(), 1), 1);
    for (std::size_t i = 0; i < c.size(); ++i) a(i, 0) = c[i];
    return BivariatePolynomial(std::move(a));
  }

  int deg_z() const { return static_cast<int>(a_.rows()) - 1; }
  int deg_w() const { return static_cast<int>(a_.cols()) - 1; }
  bool is_zero() const { return a_.rows() == 1 && a_.cols() == 1 && a_(0, 0) == Scalar(0); }
  const Coeffs& coeffs() const { return a_; }

  Scalar coeff(int i, int j) const {
    if (i < 0 || j < 0 || i > deg_z() || j > deg_w()) return Scalar(0);
    return a_(i, j);
  }

  double max_abs_coeff() const { return a_.cwiseAbs().maxCoeff(); }

  template <typename T>
  T operator()(const T& z, const T& w) const {
    // Horner in w, with Horner in z for each w-coefficient.
    T acc(0);
    for (int j = deg_w(); j >= 0; --j) {
      T cz(0);
      for (int i = deg_z(); i >= 0; --i) cz = cz * z + T(a_(i, j));
      acc = acc * w + cz;
    }
    return acc;
  }

  /// Sum of |a_ij| |z|^i |w|^j, the natural scale for rounding in evaluation.
  double term_magnitude(const cplx& z, const cplx& w) const {
    double az = std::abs(z), aw = std::abs(w), acc = 0.0;
    for (int j = deg_w(); j >= 0; --j) {
      double cz = 0.0;
      for (int i = deg_z(); i >= 0; --i) cz = cz * az + std::abs(a_(i, j));
      acc = acc * aw + cz;
    }
    return acc;
  }

  BivariatePolynomial dz() const {
    if (deg_z() == 0) return BivariatePolynomial();
    Coeffs d(deg_z(), deg_w() + 1);
    for (int i = 1; i <= deg_z(); ++i) d.row(i - 1) = a_.row(i) * Scalar(i);
    return BivariatePolynomial(std::move(d));
  }
  BivariatePolynomial dw() const {
    if (deg_w() == 0) return BivariatePolynomial();
    Coeffs d(deg_z() + 1, deg_w());
    for (int j = 1; j <= deg_w(); ++j) d.col(j - 1) = a_.col(j) * Scalar(j);
    return BivariatePolynomial(std::move(d));
  }

  /// Coefficients of w^0..w^deg_w at a fixed z.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w_coefficients(const Scalar& z) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(deg_w() + 1);
    for (int j = 0; j <= deg_w(); ++j) {
      Scalar cz(0);
      for (int i = deg_z(); i >= 0; --i) cz = cz * z + a_(i, j);
      c(j) = cz;
    }
    return c;
  }

  friend BivariatePolynomial operator+(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    Coeffs s = Coeffs::Zero(std::max(p.a_.rows(), q.a_.rows()), std::max(p.a_.cols(), q.a_.cols()));
    s.topLeftCorner(p.a_.rows(), p.a_.cols()) += p.a_;
    s.topLeftCorner(q.a_.rows(), q.a_.cols()) += q.a_;
    return BivariatePolynomial(std::move(s));
  }
  friend BivariatePolynomial operator-(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    return p + q * Scalar(-1);
  }
  friend BivariatePolynomial operator*(const BivariatePolynomial& p, Scalar c) {
    return BivariatePolynomial(Coeffs(p.a_ * c));
  }
  friend BivariatePolynomial operator*(Scalar c, const BivariatePolynomial& p) { return p * c; }
  friend BivariatePolynomial operator*(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    Coeffs r = Coeffs::Zero(p.a_.rows() + q.a_.rows() - 1, p.a_.cols() + q.a_.cols() - 1);
    for (int i = 0; i < p.a_.rows(); ++i)
      for (int j = 0; j < p.a_.cols(); ++j) {
        if (p.a_(i, j) == Scalar(0)) continue;
        r.block(i, j, q.a_.rows(), q.a_.cols()) += p.a_(i, j) * q.a_;
      }
    return BivariatePolynomial(std::move(r));
  }

  friend bool operator==(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    return p.a_.rows() == q.a_.rows() && p.a_.cols() == q.a_.cols() && p.a_ == q.a_;
  }

 private:
  void trim() {
    if (a_.size() == 0) {
      a_ = Coeffs::Zero(1, 1);
      return;
    }
    Eigen::Index r = a_.rows(), c = a_.cols();
    while (r > 1 && a_.row(r - 1).isZero(0)) --r;
    while (c > 1 && a_.col(c - 1).isZero(0)) --c;
    if (r != a_.rows() || c != a_.cols()) a_ = Coeffs(a_.topLeftCorner(r, c));
  }

  Coeffs a_;
};

using Poly2 = BivariatePolynomial<cplx>;

/// d(p, q) = sum |a_ij - b_ij| over the union of supports.
template <typename Scalar>
double coefficient_distance(const BivariatePolynomial<Scalar>& p, const BivariatePolynomial<Scalar>& q) {
  const auto rows = std::max(p.coeffs().rows(), q.coeffs().rows());
  const auto cols = std::max(p.coeffs().cols(), q.coeffs().cols());
  double d = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      d += std::abs(p.coeff(static_cast<int>(i), static_cast<int>(j)) -
                    q.coeff(static_cast<int>(i), static_cast<int>(j)));
  return d;
}

// --- univariate helpers (ascending coefficient vectors) ---

using UPoly = Eigen::VectorXcd;

/// Drops leading coefficients below rel_tol * max|c|.
UPoly trim_leading(const UPoly& c, double rel_tol = 0.0);

cplx horner(const UPoly& c, cplx x);

/// k-th derivative divided by k!, evaluated at x.
cplx taylor_coefficient(const UPoly& c, cplx x, int k);

/// All complex roots (companion matrix eigenvalues, Newton-polished).
std::vector<cplx> roots(const UPoly& c);

/// Multiplicity of x as a root: smallest k with |c^(k)(x)/k!| above tolerance.
int root_multiplicity(const UPoly& c, cplx x, double rel_tol = 1e-7);

/// Quotient of c by (z - x)^m, remainder dropped.
UPoly deflate(const UPoly& c, cplx x, int m = 1);

/// Coefficients of a polynomial of degree < n from its values at
/// radius * exp(2 pi i k / n), k = 0..n-1.
UPoly interpolate_on_circle(const std::vector<cplx>& values, double radius);

/// Newton refinement of an m-fold root estimate, run on the (m-1)-th
/// derivative where the root is simple.
cplx polish_root(const UPoly& c, cplx x, int multiplicity);

/// Determinant of the Sylvester matrix (coefficients taken as given, no
/// trimming).
cplx resultant(const UPoly& f, const UPoly& g);

struct RootCluster {
  cplx center;
  int multiplicity;
};

/// Groups numerically coincident roots; the cluster mean is a far better
/// estimate of a multiple root than any single member.
std::vector<RootCluster> cluster_roots(const std::vector<cplx>& r, double rel_tol = 1e-3);

}  // namespace minsurf
