#include "minsurf/wdata.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <random>

namespace minsurf {

namespace {

constexpr int kNoPole = INT_MAX / 4;

Poly2 reduce_if_possible(const AlgebraicCurve& curve, const Poly2& h) {
  return curve.monic_in_w() ? reduce_mod_curve(curve, h) : h;
}

bool negligible(const Poly2& h, double scale) { return h.max_abs_coeff() <= 1e-12 * scale; }

/// Removes common roots of two univariate polynomials (stored as w-free
/// bivariate ones).
void cancel_common_roots(Poly2& num, Poly2& den) {
  UPoly a = num.coeffs().col(0), b = den.coeffs().col(0);
  if (b.size() < 2 || num.is_zero()) return;
  for (const RootCluster& c : cluster_roots(roots(b))) {
    const cplx x = polish_root(b, c.center, c.multiplicity);
    const int m = std::min(c.multiplicity, a.size() > 1 ? root_multiplicity(a, x) : 0);
    if (m == 0) continue;
    a = deflate(a, x, m);
    b = deflate(b, x, m);
  }
  num = Poly2(Poly2::Coeffs(a));
  den = Poly2(Poly2::Coeffs(b));
}

bool same_point(const CurvePoint& p, const CurvePoint& q) {
  return std::abs(p.z - q.z) <= 1e-6 * (1.0 + std::abs(p.z)) && std::abs(p.w - q.w) <= 1e-6 * (1.0 + std::abs(p.w));
}

double geometric_mean_abs(const std::vector<cplx>& v) {
  double acc = 0.0;
  for (cplx x : v) {
    if (x == cplx(0.0)) return 0.0;
    acc += std::log(std::abs(x));
  }
  return std::exp(acc / double(v.size()));
}

/// Order of vanishing from samples at two scales: |h| ~ scale^order.
int order_from_scales(double m_large, double m_small, double ratio) {
  if (m_large == 0.0 && m_small == 0.0) return kNoPole;
  if (m_small == 0.0) return kNoPole;
  return static_cast<int>(std::lround(std::log(m_small / m_large) / std::log(ratio)));
}

/// z(t) = b + t^2 with w = t on w^2 = q(z), for t small.
CurvePoint branch_chart(const AlgebraicCurve& curve, cplx b, cplx t) {
  const UPoly& q = curve.q();
  const cplx dq = taylor_coefficient(q, b, 1);
  cplx z = b + t * t / dq;
  for (int it = 0; it < 50; ++it) {
    const cplx step = (horner(q, z) - t * t) / taylor_coefficient(q, z, 1);
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return {z, t, std::abs(curve.polynomial()(z, t)), false};
}

struct Place {
  CurvePoint point;
  bool branch = false;
};

/// Order of each component function at a finite place, plus the order of dz.
std::vector<int> finite_orders(const AlgebraicCurve& curve, const std::vector<const RationalOnCurve*>& fs,
                               const Place& place, int& dz_order) {
  constexpr int kAngles = 8;
  const double scale = std::min(1.0, 0.1 * curve.distance_to_branch(place.point.z));
  std::vector<int> out;
  std::vector<std::vector<cplx>> big(fs.size()), small(fs.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < kAngles; ++k) {
      const cplx u = std::polar(1.0, 2.0 * kPi * (k + 0.5) / kAngles);
      CurvePoint x;
      if (place.branch) {
        const double r = pass == 0 ? 1e-2 : 1e-3;
        x = branch_chart(curve, place.point.z, r * u);
      } else {
        const double r = (pass == 0 ? 1e-3 : 1e-4) * scale;
        x = lift(curve, place.point.z + r * u, place.point.w);
      }
      for (std::size_t j = 0; j < fs.size(); ++j) (pass == 0 ? big : small)[j].push_back((*fs[j])(x));
    }
  }
  for (std::size_t j = 0; j < fs.size(); ++j)
    out.push_back(order_from_scales(geometric_mean_abs(big[j]), geometric_mean_abs(small[j]), 0.1));
  dz_order = place.branch ? 1 : 0;
  return out;
}

double special_radius(const AlgebraicCurve& curve) {
  double r = 1.0;
  for (cplx b : curve.branch_values()) r = std::max(r, 1.0 + std::abs(b));
  return r;
}

/// Orders at the place(s) over infinity, in a local coordinate t with
/// |z| = |t|^(-z_order). `sign` selects one of two places (0 when single).
std::vector<int> infinity_place_orders(const AlgebraicCurve& curve, const std::vector<const RationalOnCurve*>& fs,
                                       int sign, double radius, int& dz_order) {
  const InfinityOrders io = infinity_orders(curve);
  constexpr int kAngles = 8;
  const double r1 = 1e3 * radius, r2 = 1e4 * radius;
  std::vector<std::vector<cplx>> big(fs.size()), small(fs.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < kAngles; ++k) {
      const cplx z = (pass == 0 ? r1 : r2) * std::polar(1.0, 2.0 * kPi * (k + 0.5) / kAngles);
      std::vector<cplx> fib = curve.fiber(z);
      if (sign != 0) {
        // pick the sheet with w ~ sign * sqrt(lead) z^(d/2)
        const UPoly& q = curve.q();
        const int d = static_cast<int>(q.size()) - 1;
        const cplx ref = double(sign) * std::sqrt(q(d)) * std::pow(z, d / 2);
        auto best = std::min_element(fib.begin(), fib.end(),
                                     [&](cplx a, cplx b) { return std::abs(a - ref) < std::abs(b - ref); });
        fib = {*best};
      }
      for (cplx w : fib) {
        const CurvePoint x{z, w, 0.0, false};
        for (std::size_t j = 0; j < fs.size(); ++j) (pass == 0 ? big : small)[j].push_back((*fs[j])(x));
      }
    }
  }
  std::vector<int> out;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const int o = order_from_scales(geometric_mean_abs(big[j]), geometric_mean_abs(small[j]), r1 / r2);
    // |h| ~ |z|^e means order -z_order * e in t; order_from_scales returned -e
    out.push_back(o == kNoPole ? kNoPole : o * io.z_order);
  }
  dz_order = -(io.z_order + 1);
  return out;
}

bool is_pole(const std::vector<int>& orders, int dz_order) {
  for (int o : orders)
    if (o != kNoPole && o + dz_order < 0) return true;
  return false;
}

}  // namespace

RationalOnCurve::RationalOnCurve() : RationalOnCurve(Poly2(), Poly2::constant(1.0)) {}

RationalOnCurve::RationalOnCurve(Poly2 numerator, Poly2 denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw Error(ErrorCode::InvalidArgument, "denominator is the zero polynomial");
  num_z_ = num_.dz();
  num_w_ = num_.dw();
  den_z_ = den_.dz();
  den_w_ = den_.dw();
}

RationalOnCurve RationalOnCurve::polynomial(Poly2 numerator) {
  return RationalOnCurve(std::move(numerator), Poly2::constant(1.0));
}

cplx RationalOnCurve::derivative(const AlgebraicCurve& curve, const CurvePoint& q) const {
  const cplx wp = curve.dw_dz(q.z, q.w);
  const cplx n = num_(q.z, q.w), d = den_(q.z, q.w);
  const cplx dn = num_z_(q.z, q.w) + num_w_(q.z, q.w) * wp;
  const cplx dd = den_z_(q.z, q.w) + den_w_(q.z, q.w) * wp;
  return (dn * d - n * dd) / (d * d);
}

CurvePoint WeierstrassData::basepoint() const {
  return {0.0, 0.0, std::abs(curve.polynomial()(cplx(0.0), cplx(0.0))), false};
}

WeierstrassData from_gauss_height(SurfaceSignature signature, AlgebraicCurve curve, const RationalOnCurve& g,
                                  const RationalOnCurve& h, Vec3 translation) {
  const Poly2& a = g.numerator();
  const Poly2& b = g.denominator();
  const Poly2& c = h.numerator();
  const Poly2& d = h.denominator();
  // f1 = c (b^2 - a^2) / (2 a b d), f2 = i c (b^2 + a^2) / (2 a b d), f3 = c / d
  const Poly2 den = a * b * d * cplx(2.0);
  const Poly2 n1 = c * (b * b - a * a);
  const Poly2 n2 = c * (b * b + a * a) * kI;
  auto make = [&](const Poly2& n, const Poly2& m) {
    Poly2 nr = reduce_if_possible(curve, n), mr = reduce_if_possible(curve, m);
    if (curve.form() == CurveForm::Rational) cancel_common_roots(nr, mr);
    return RationalOnCurve(nr, mr);
  };
  std::array<RationalOnCurve, 3> f{make(n1, den), make(n2, den), make(c, d)};
  return WeierstrassData{signature, std::move(curve), std::move(f), translation};
}

RationalOnCurve gauss_map(const WeierstrassData& W) {
  const auto& f = W.f;
  const Poly2& n1 = f[0].numerator();
  const Poly2& d1 = f[0].denominator();
  const Poly2& n2 = f[1].numerator();
  const Poly2& d2 = f[1].denominator();
  const Poly2& n3 = f[2].numerator();
  const Poly2& d3 = f[2].denominator();
  const Poly2 lower = n1 * d2 - n2 * d1 * kI;
  Poly2 num = reduce_if_possible(W.curve, n3 * d1 * d2);
  Poly2 den = reduce_if_possible(W.curve, d3 * lower);
  const double scale = 1.0 + (d3.max_abs_coeff() * (n1.max_abs_coeff() * d2.max_abs_coeff() +
                                                    n2.max_abs_coeff() * d1.max_abs_coeff()));
  if (negligible(den, scale)) throw Error(ErrorCode::DegenerateGauss, "f1 - i f2 vanishes identically");
  if (negligible(num, 1.0 + n3.max_abs_coeff() * d1.max_abs_coeff() * d2.max_abs_coeff())) num = Poly2();
  if (W.curve.form() == CurveForm::Rational) cancel_common_roots(num, den);
  // normalise so the largest denominator coefficient is one
  const cplx lead = [&] {
    const auto& c = den.coeffs();
    Eigen::Index i, j;
    c.cwiseAbs().maxCoeff(&i, &j);
    return c(i, j);
  }();
  return RationalOnCurve(num * (1.0 / lead), den * (1.0 / lead));
}

std::optional<int> gauss_degree_algebraic(const WeierstrassData& W) {
  InfinityOrders io;
  try {
    io = infinity_orders(W.curve);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (io.places != 1 || !W.curve.monic_in_w()) return std::nullopt;
  const RationalOnCurve g = gauss_map(W);
  const Poly2& a = g.numerator();
  const Poly2& b = g.denominator();
  if (a.is_zero()) return 0;
  const int pa = std::max(0, pole_order_at_infinity(W.curve, a));
  const int pb = std::max(0, pole_order_at_infinity(W.curve, b));
  int common = 0;
  if (pa > 0 && pb > 0) {
    const auto za = zeros_on_curve(W.curve, a);
    const auto zb = zeros_on_curve(W.curve, b);
    for (const auto& x : za)
      for (const auto& y : zb)
        if (same_point(x.point, y.point)) common += std::min(x.multiplicity, y.multiplicity);
  }
  return std::max(pa, pb) - common;
}

std::array<int, 2> gauss_degree_numeric(const WeierstrassData& W, std::uint64_t seed) {
  const RationalOnCurve g = gauss_map(W);
  const Poly2& a = g.numerator();
  const Poly2& b = g.denominator();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::array<int, 2> counts{};
  for (int& count : counts) {
    Vec3 v(normal(rng), normal(rng), normal(rng));
    v.normalize();
    const cplx c = cplx(v(0), v(1)) / (1.0 - v(2));
    const Poly2 h = a - b * c;
    count = 0;
    if (h.deg_z() == 0 && h.deg_w() == 0) continue;
    for (const CurveZero& zero : zeros_on_curve(W.curve, h)) {
      const CurvePoint& p = zero.point;
      if (std::abs(b(p.z, p.w)) <= 1e-8 * (1.0 + b.term_magnitude(p.z, p.w))) continue;
      count += zero.multiplicity;
    }
  }
  return counts;
}

double conformality_residual(const WeierstrassData& W, const std::vector<CurvePoint>& samples) {
  double worst = 0.0;
  for (const CurvePoint& q : samples) {
    const Vec3c f = W.F(q);
    const double scale = f.cwiseAbs2().maxCoeff();
    if (scale == 0.0 || !std::isfinite(scale)) continue;
    worst = std::max(worst, std::abs(f(0) * f(0) + f(1) * f(1) + f(2) * f(2)) / scale);
  }
  return worst;
}

PolarSet find_polar_set(const WeierstrassData& W) {
  const AlgebraicCurve& curve = W.curve;
  std::vector<const RationalOnCurve*> fs;
  for (const auto& f : W.f)
    if (!f.numerator().is_zero()) fs.push_back(&f);
  PolarSet out;
  if (fs.empty()) return out;

  std::vector<Place> candidates;
  for (const RationalOnCurve* f : fs) {
    const Poly2& den = f->denominator();
    if (den.deg_z() == 0 && den.deg_w() == 0) continue;
    for (const CurveZero& zero : zeros_on_curve(curve, den)) {
      Place pl{zero.point, curve.distance_to_branch(zero.point.z) < 10.0 * curve.clearance()};
      if (pl.branch) {
        if (curve.form() != CurveForm::Hyperelliptic)
          throw Error(ErrorCode::Unsupported, "pole at a branch point of a general curve");
        pl.point.w = 0.0;
        for (cplx b : curve.branch_values())
          if (std::abs(b - pl.point.z) < 10.0 * curve.clearance()) pl.point.z = b;
      }
      bool dup = false;
      for (const Place& c : candidates) dup = dup || same_point(c.point, pl.point);
      if (!dup) candidates.push_back(pl);
    }
  }
  double radius = special_radius(curve);
  for (const Place& pl : candidates) {
    int dz_order = 0;
    const std::vector<int> orders = finite_orders(curve, fs, pl, dz_order);
    if (is_pole(orders, dz_order)) {
      out.points.push_back(pl.point);
      radius = std::max(radius, 1.0 + std::abs(pl.point.z));
    }
  }
  const InfinityOrders io = infinity_orders(curve);
  const std::vector<int> signs = io.places == 1 ? std::vector<int>{0} : std::vector<int>{1, -1};
  for (int sign : signs) {
    int dz_order = 0;
    const std::vector<int> orders = infinity_place_orders(curve, fs, sign, radius, dz_order);
    if (is_pole(orders, dz_order)) {
      CurvePoint inf{cplx(std::numeric_limits<double>::infinity(), 0.0), double(sign == 0 ? 1 : sign), 0.0, true};
      out.points.push_back(inf);
    }
  }
  out.cardinality = static_cast<int>(out.points.size());
  return out;
}

PolarSet polar_set(const WeierstrassData& W) {
  PolarSet ps = find_polar_set(W);
  if (ps.cardinality != W.signature.s)
    throw Error(ErrorCode::CountMismatch, "polar set has " + std::to_string(ps.cardinality) + " points, signature declares " +
                                              std::to_string(W.signature.s));
  return ps;
}

double moduli_distance(const WeierstrassData& A, const WeierstrassData& B) {
  if (!(A.signature == B.signature)) throw Error(ErrorCode::SignatureMismatch, "moduli distance needs equal signatures");
  double d = coefficient_distance(A.curve.polynomial(), B.curve.polynomial());
  for (int j = 0; j < 3; ++j)
    d += coefficient_distance(A.f[j].numerator(), B.f[j].numerator()) +
         coefficient_distance(A.f[j].denominator(), B.f[j].denominator());
  return d;
}

double affine_moduli_distance(const WeierstrassData& A, const WeierstrassData& B) {
  return moduli_distance(A, B) + (A.translation - B.translation).norm();
}

}  // namespace minsurf
