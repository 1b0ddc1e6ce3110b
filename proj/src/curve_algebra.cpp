#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "minsurf/curve.hpp"

namespace minsurf {

namespace {

UPoly column_z(const Poly2::Coeffs& a, Eigen::Index j) {
  return a.col(j);
}

UPoly multiply(const UPoly& a, const UPoly& b) {
  UPoly r = UPoly::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i, b.size()) += a(i) * b;
  return r;
}

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

bool is_normalized(const AlgebraicCurve& curve) {
  const Poly2& p = curve.polynomial();
  const int n = p.deg_w();
  const int nu = n - 1;
  if (nu < 0 || p.deg_z() != nu + 2 || !curve.monic_in_w()) return false;
  if (p.coeff(nu + 2, 0) == cplx(0.0)) return false;
  // all other monomials strictly below the edge joining (nu+2, 0) and (0, nu+1)
  const int edge = (nu + 1) * (nu + 2);
  for (int i = 0; i <= p.deg_z(); ++i)
    for (int j = 0; j <= n; ++j) {
      if (p.coeff(i, j) == cplx(0.0)) continue;
      if ((i == nu + 2 && j == 0) || (i == 0 && j == n)) continue;
      if (i * (nu + 1) + j * (nu + 2) >= edge) return false;
    }
  return true;
}

int degree_of_projection(const AlgebraicCurve& curve, int l, int j) {
  if (l < 0 || j < 0) throw Error(ErrorCode::InvalidArgument, "monomial powers must be nonnegative");
  if (!is_normalized(curve)) throw Error(ErrorCode::NotNormalized, "curve is not in normalised shape");
  const int nu = curve.polynomial().deg_w() - 1;
  return l * (nu + 1) + j * (nu + 2);
}

InfinityOrders infinity_orders(const AlgebraicCurve& curve) {
  switch (curve.form()) {
    case CurveForm::Rational:
      return {1, 1, 2};
    case CurveForm::Hyperelliptic: {
      const int d = static_cast<int>(curve.q().size()) - 1;
      if (d % 2 == 1) return {1, 2, d};
      return {2, 1, d / 2};
    }
    case CurveForm::General:
      if (is_normalized(curve)) {
        const int n = curve.polynomial().deg_w();
        return {1, n, n + 1};
      }
      break;
  }
  throw Error(ErrorCode::Unsupported, "pole orders at infinity unknown for this curve");
}

Poly2 reduce_mod_curve(const AlgebraicCurve& curve, const Poly2& h) {
  if (!curve.monic_in_w()) throw Error(ErrorCode::Unsupported, "reduction needs a constant leading w-coefficient");
  const Poly2& p = curve.polynomial();
  const int n = p.deg_w();
  if (h.deg_w() < n) return h;
  const cplx lead = p.coeff(0, n);
  const auto& pa = p.coeffs();
  // columns of h as polynomials in z
  std::vector<UPoly> cols;
  for (int j = 0; j <= h.deg_w(); ++j) cols.push_back(column_z(h.coeffs(), j));
  for (int j = h.deg_w(); j >= n; --j) {
    const UPoly top = cols[j];
    cols[j] = UPoly::Zero(1);
    for (int k = 0; k < n; ++k) {
      const UPoly ak = column_z(pa, k);
      const UPoly term = multiply(top, ak) / lead;
      UPoly& dst = cols[j - n + k];
      if (dst.size() < term.size()) {
        UPoly grown = UPoly::Zero(term.size());
        grown.head(dst.size()) = dst;
        dst = grown;
      }
      dst.head(term.size()) -= term;
    }
  }
  Eigen::Index rows = 1;
  for (int j = 0; j < n; ++j) rows = std::max(rows, cols[j].size());
  Poly2::Coeffs r = Poly2::Coeffs::Zero(rows, n);
  for (int j = 0; j < n; ++j) r.col(j).head(cols[j].size()) = cols[j];
  return Poly2(r);
}

int pole_order_at_infinity(const AlgebraicCurve& curve, const Poly2& h) {
  const Poly2 r = reduce_mod_curve(curve, h);
  const InfinityOrders o = infinity_orders(curve);
  const double scale = r.max_abs_coeff();
  int best = std::numeric_limits<int>::min() / 4;
  if (scale == 0.0) return best;
  for (int i = 0; i <= r.deg_z(); ++i)
    for (int j = 0; j <= r.deg_w(); ++j)
      if (std::abs(r.coeff(i, j)) > 1e-14 * scale) best = std::max(best, i * o.z_order + j * o.w_order);
  return best;
}

UPoly norm_polynomial(const AlgebraicCurve& curve, const Poly2& h) {
  if (!curve.monic_in_w()) throw Error(ErrorCode::Unsupported, "norm needs a constant leading w-coefficient");
  const Poly2& p = curve.polynomial();
  const int n = p.deg_w();
  // growth exponent of the sheets: |w| <~ |z|^slope
  double slope = 0.0;
  for (int j = 0; j < n; ++j) {
    int dj = -1;
    for (int i = 0; i <= p.deg_z(); ++i)
      if (p.coeff(i, j) != cplx(0.0)) dj = i;
    if (dj >= 0) slope = std::max(slope, double(dj) / double(n - j));
  }
  double hdeg = 0.0;
  for (int i = 0; i <= h.deg_z(); ++i)
    for (int j = 0; j <= h.deg_w(); ++j)
      if (h.coeff(i, j) != cplx(0.0)) hdeg = std::max(hdeg, i + j * slope);
  const int bound = static_cast<int>(std::ceil(n * hdeg - 1e-9));
  const int m = next_pow2(std::max(2 * (bound + 1), 16));
  std::vector<cplx> vals(m);
  for (int k = 0; k < m; ++k) {
    const cplx z = std::polar(1.0, 2.0 * kPi * k / m);
    cplx prod = 1.0;
    for (cplx w : curve.fiber(z)) prod *= h(z, w);
    vals[k] = prod;
  }
  UPoly c = interpolate_on_circle(vals, 1.0).head(bound + 1);
  return trim_leading(c, 1e-11);
}

std::vector<CurveZero> zeros_on_curve(const AlgebraicCurve& curve, const Poly2& h) {
  std::vector<CurveZero> out;
  const UPoly norm = norm_polynomial(curve, h);
  if (norm.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::InvalidArgument, "function vanishes identically on the curve");
  for (const RootCluster& cl : cluster_roots(roots(norm))) {
    const cplx z = polish_root(norm, cl.center, cl.multiplicity);
    std::vector<cplx> hits;
    double best = std::numeric_limits<double>::infinity();
    cplx best_w{};
    for (cplx w : curve.fiber(z)) {
      const double v = std::abs(h(z, w));
      const double tol = 1e-6 * (1.0 + h.term_magnitude(z, w));
      if (v < best) {
        best = v;
        best_w = w;
      }
      if (v > tol) continue;
      bool dup = false;
      for (cplx u : hits) dup = dup || std::abs(u - w) <= 1e-5 * (1.0 + std::abs(w));
      if (!dup) hits.push_back(w);
    }
    if (hits.empty()) hits.push_back(best_w);
    const int share = cl.multiplicity / static_cast<int>(hits.size());
    int extra = cl.multiplicity % static_cast<int>(hits.size());
    for (cplx w : hits) {
      CurveZero cz;
      cz.point = {z, w, std::abs(curve.polynomial()(z, w)), false};
      cz.multiplicity = share + (extra > 0 ? 1 : 0);
      if (extra > 0) --extra;
      if (cz.multiplicity > 0) out.push_back(cz);
    }
  }
  return out;
}

bool irreducibility_warning(const AlgebraicCurve& curve) {
  const Poly2& p = curve.polynomial();
  const int n = p.deg_w();
  if (n < 2) return false;
  // Track every sheet around a circle; a sheet that closes up and whose
  // samples are interpolated by a polynomial of degree <= deg_z(p) points to
  // a factor w - r(z).
  constexpr int kSamples = 256;
  const double radius = 1.5 + std::accumulate(curve.branch_values().begin(), curve.branch_values().end(), 0.0,
                                              [](double acc, cplx b) { return std::max(acc, std::abs(b)); });
  std::vector<std::vector<cplx>> tracks;
  for (cplx w0 : curve.fiber(radius)) tracks.push_back({w0});
  for (int k = 1; k <= kSamples; ++k) {
    const cplx z = radius * std::polar(1.0, 2.0 * kPi * k / kSamples);
    const auto fib = curve.fiber(z);
    for (auto& t : tracks) {
      cplx best = fib.front();
      for (cplx w : fib)
        if (std::abs(w - t.back()) < std::abs(best - t.back())) best = w;
      t.push_back(best);
    }
  }
  for (const auto& t : tracks) {
    if (std::abs(t.back() - t.front()) > 1e-8 * (1.0 + std::abs(t.front()))) continue;
    std::vector<cplx> vals(t.begin(), t.end() - 1);
    UPoly c = interpolate_on_circle(vals, radius);
    const double total = c.cwiseAbs().sum();
    double high = 0.0;
    for (Eigen::Index i = p.deg_z() + 1; i < c.size(); ++i) high += std::abs(c(i)) * std::pow(radius, double(i));
    double low = 0.0;
    for (Eigen::Index i = 0; i <= std::min<Eigen::Index>(p.deg_z(), c.size() - 1); ++i) low += std::abs(c(i)) * std::pow(radius, double(i));
    if (total > 0.0 && high <= 1e-8 * low) return true;
  }
  return false;
}

}  // namespace minsurf
