#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minsurf/common.hpp"
#include "minsurf/poly.hpp"

namespace minsurf {

/// Rational: the genus-zero model p = w - z^2 (z is a global coordinate on
/// the sphere). Hyperelliptic: p = w^2 - q(z) with q squarefree.
enum class CurveForm { Rational, Hyperelliptic, General };

std::string_view to_string(CurveForm form);

struct CurvePoint {
  cplx z{0.0};
  cplx w{0.0};
  double residual = 0.0;
  /// Place over z = infinity. When the curve has two such places the sign of
  /// Re(w) selects one of them.
  bool at_infinity = false;
};

struct StepControl {
  double max_step = 0.1;
  int max_depth = 40;
};

/// z-plane polyline together with the sheet it starts on.
struct SheetPath {
  std::vector<cplx> vertices;
  CurvePoint start;
  StepControl control{};
};

struct Cycle {
  std::string id;
  SheetPath path;
};

class AlgebraicCurve {
 public:
  static AlgebraicCurve rational();
  /// w^2 - q(z), q given by ascending coefficients.
  static AlgebraicCurve hyperelliptic(const UPoly& q);
  static AlgebraicCurve general(Poly2 p);
  /// Recognises the rational and hyperelliptic normal shapes, otherwise general.
  static AlgebraicCurve from_polynomial(const Poly2& p);

  const Poly2& polynomial() const { return p_; }
  CurveForm form() const { return form_; }
  /// Known only for the rational and hyperelliptic forms.
  std::optional<int> genus() const { return genus_; }
  /// Finite critical values of the projection z (discriminant zeros).
  const std::vector<cplx>& branch_values() const { return branch_; }
  /// q(z) for the hyperelliptic form.
  const UPoly& q() const { return q_; }
  int sheets() const { return p_.deg_w(); }
  double coefficient_scale() const { return 1.0 + p_.max_abs_coeff(); }
  double clearance() const { return clearance_; }
  /// Hyperelliptic with deg q odd: a single (branched) place over infinity.
  bool infinity_is_branch() const;
  /// Leading w-coefficient is a nonzero constant, i.e. w is integral over C[z].
  bool monic_in_w() const;

  std::vector<cplx> fiber(cplx z) const;
  double distance_to_branch(cplx z) const;
  double residual_tolerance(cplx z, cplx w) const;
  /// Total derivative dw/dz along the curve.
  cplx dw_dz(cplx z, cplx w) const;

 private:
  AlgebraicCurve(Poly2 p, CurveForm form);
  void compute_branch_values();

  Poly2 p_;
  Poly2 pz_;
  Poly2 pw_;
  CurveForm form_ = CurveForm::General;
  std::optional<int> genus_;
  UPoly q_;
  std::vector<cplx> branch_;
  double clearance_ = 1e-3;
};

CurvePoint lift(const AlgebraicCurve& curve, cplx z0, cplx w_guess);

/// Polyline vertices with every segment rerouted along circular arcs around
/// branch values it passes too close to.
std::vector<cplx> route_around_branches(const AlgebraicCurve& curve, const std::vector<cplx>& vertices);

/// Dense predictor-corrector samples along the (rerouted) path; consecutive
/// samples are joined by straight segments lying inside one sheet.
std::vector<CurvePoint> trace(const AlgebraicCurve& curve, const SheetPath& path);

CurvePoint continue_along(const AlgebraicCurve& curve, const SheetPath& path);

SheetPath reversed(const AlgebraicCurve& curve, const SheetPath& path);

/// Closed path formed by running `first` then `second`; both must start at the
/// same curve point and be closed.
Cycle concatenate(const AlgebraicCurve& curve, const Cycle& first, const Cycle& second);

using Permutation = std::vector<int>;

/// perm[k] = index of the fiber point reached from fiber point k; fiber order
/// is that of `curve.fiber(loop.vertices.front())`.
Permutation monodromy(const AlgebraicCurve& curve, const SheetPath& loop);

Permutation compose(const Permutation& first, const Permutation& then);

/// Normalised shape: Deg_z(p) - 1 = Deg_w(p) = nu + 1 with nu = Deg_w(p) - 1,
/// constant leading w-coefficient, and a single place over infinity where z
/// and w have poles of orders nu + 1 and nu + 2.
bool is_normalized(const AlgebraicCurve& curve);

/// Degree of z^l w^j as a meromorphic function on a normalised curve.
int degree_of_projection(const AlgebraicCurve& curve, int l, int j);

/// Pole orders of z and w at the place(s) over infinity, for curves where
/// that is determined by the form (rational, hyperelliptic, normalised).
struct InfinityOrders {
  int places = 1;
  int z_order = 1;
  int w_order = 2;
};
InfinityOrders infinity_orders(const AlgebraicCurve& curve);

/// Pole order at infinity of a polynomial after reduction modulo the curve.
int pole_order_at_infinity(const AlgebraicCurve& curve, const Poly2& h);

/// Reduces h modulo p so that Deg_w(h) < Deg_w(p); requires monic_in_w().
Poly2 reduce_mod_curve(const AlgebraicCurve& curve, const Poly2& h);

/// N(z) = prod_k h(z, w_k(z)) over the fiber, as ascending coefficients.
UPoly norm_polynomial(const AlgebraicCurve& curve, const Poly2& h);

struct CurveZero {
  CurvePoint point;
  int multiplicity = 1;
};

/// Zeros of h on the finite part of the curve.
std::vector<CurveZero> zeros_on_curve(const AlgebraicCurve& curve, const Poly2& h);

/// a_j, j = 1..nu, followed by b_j; a_j . b_k = delta_jk.
std::vector<Cycle> canonical_cycles(const AlgebraicCurve& curve);

/// Signed count of transversal crossings of two closed sheet paths at equal
/// curve points. Positive when (tangent of c1, tangent of c2) is positively
/// oriented.
int intersection_number(const AlgebraicCurve& curve, const SheetPath& c1, const SheetPath& c2);

/// Heuristic reducibility flag: some sheet is a polynomial in z of low
/// degree, detected on sample lines.
bool irreducibility_warning(const AlgebraicCurve& curve);

/// Winding number of a closed polygon around a point.
int winding_number(const std::vector<cplx>& polygon, cplx point);

}  // namespace minsurf
