#include "minsurf/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace minsurf {

namespace {

// Kronrod 15-point abscissae (descending, last is 0) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Eigen::VectorXcd kronrod;
  double error;
};

Panel gauss_kronrod(const ParamIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b), half = 0.5 * (b - a);
  const Eigen::VectorXcd fc = f(c);
  Eigen::VectorXcd k = kWgk[7] * fc;
  Eigen::VectorXcd g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Eigen::VectorXcd s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  k *= half;
  g *= half;
  if (!k.allFinite()) throw Error(ErrorCode::NoConvergence, "integrand is not finite on the interval");
  return {k, (k - g).cwiseAbs().maxCoeff()};
}

Eigen::VectorXcd adaptive(const ParamIntegrand& f, double a, double b, double tol, int depth, const AdaptiveOptions& opt,
                          const Panel& panel) {
  const double floor = 1e-14 * panel.kronrod.cwiseAbs().maxCoeff();
  if (panel.error <= std::max(tol, floor)) return panel.kronrod;
  if (depth >= opt.max_depth) throw Error(ErrorCode::NoConvergence, "adaptive quadrature exceeded its depth limit");
  const double m = 0.5 * (a + b);
  const Panel left = gauss_kronrod(f, a, m);
  const Panel right = gauss_kronrod(f, m, b);
  return adaptive(f, a, m, 0.5 * tol, depth + 1, opt, left) + adaptive(f, m, b, 0.5 * tol, depth + 1, opt, right);
}

template <typename Visit>
void for_each_step(const AlgebraicCurve& curve, const SheetPath& path, Visit&& visit) {
  const auto pts = trace(curve, path);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) visit(pts[k], pts[k + 1]);
}

// p(b + u, w) as a polynomial in (u, w).
Poly2 shift_z(const Poly2& p, cplx b) {
  Poly2::Coeffs a = p.coeffs();
  const auto n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = n - 2; i >= k; --i) a.row(i) += b * a.row(i + 1);
  return Poly2(a);
}

// Point over b + u with w refined from the guess in the shifted chart, where
// p_w is small too, so Newton runs until its step stalls.
CurvePoint chart_point(const Poly2& shifted, const Poly2& shifted_w, cplx b, cplx u, cplx w) {
  for (int it = 0; it < 60; ++it) {
    const cplx f = shifted(u, w), d = shifted_w(u, w);
    if (f == cplx(0.0) || d == cplx(0.0)) break;
    const cplx step = f / d;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) break;
  }
  return {b + u, w, 0.0, false};
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

Eigen::VectorXcd integrate_adaptive(const ParamIntegrand& f, double a, double b, const AdaptiveOptions& opt) {
  if (a == b) return Eigen::VectorXcd::Zero(f(a).size());
  return adaptive(f, a, b, opt.abs_tol, 0, opt, gauss_kronrod(f, a, b));
}

Eigen::VectorXcd integrate_path(const AlgebraicCurve& curve, const SheetPath& path, const FormIntegrand& h,
                                const AdaptiveOptions& opt) {
  Eigen::VectorXcd total;
  for_each_step(curve, path, [&](const CurvePoint& p, const CurvePoint& q) {
    const cplx dz = q.z - p.z;
    if (dz == cplx(0.0)) return;
    const ParamIntegrand f = [&](double s) -> Eigen::VectorXcd {
      const CurvePoint x = s == 0.0 ? p : s == 1.0 ? q : lift(curve, p.z + s * dz, p.w + s * (q.w - p.w));
      return h(x) * dz;
    };
    const Eigen::VectorXcd piece = integrate_adaptive(f, 0.0, 1.0, opt);
    if (total.size() == 0) total = piece;
    else total += piece;
  });
  if (total.size() == 0) {
    const CurvePoint start = lift(curve, path.vertices.front(), path.start.w);
    total = Eigen::VectorXcd::Zero(h(start).size());
  }
  return total;
}

Eigen::VectorXcd integrate_from_branch(const AlgebraicCurve& curve, cplx b, const CurvePoint& end,
                                       const FormIntegrand& h, const AdaptiveOptions& opt) {
  const cplx dz = end.z - b;
  const Eigen::Index n = h(end).size();
  const Poly2 shifted = shift_z(curve.polynomial(), b), shifted_w = shifted.dw();
  const ParamIntegrand f = [&](double s) -> Eigen::VectorXcd {
    if (s == 0.0) return Eigen::VectorXcd::Zero(n);
    const CurvePoint x = s == 1.0 ? end : chart_point(shifted, shifted_w, b, dz * (s * s), end.w * s);
    return h(x) * (2.0 * s * dz);
  };
  return integrate_adaptive(f, 0.0, 1.0, opt);
}

double integrate_length(const AlgebraicCurve& curve, const SheetPath& path,
                        const std::function<double(const CurvePoint&)>& density, const AdaptiveOptions& opt) {
  double total = 0.0;
  for_each_step(curve, path, [&](const CurvePoint& p, const CurvePoint& q) {
    const cplx dz = q.z - p.z;
    if (dz == cplx(0.0)) return;
    const ParamIntegrand f = [&](double s) -> Eigen::VectorXcd {
      const CurvePoint x = s == 0.0 ? p : s == 1.0 ? q : lift(curve, p.z + s * dz, p.w + s * (q.w - p.w));
      return Eigen::VectorXcd::Constant(1, density(x) * std::abs(dz));
    };
    total += integrate_adaptive(f, 0.0, 1.0, opt)(0).real();
  });
  return total;
}

PathRule build_path_rule(const AlgebraicCurve& curve, const SheetPath& path, int refinement, int order) {
  if (refinement < 0) throw Error(ErrorCode::InvalidArgument, "refinement must be nonnegative");
  const GaussRule g = gauss_legendre(order);
  const int pieces = 1 << refinement;
  PathRule rule;
  const auto pts = trace(curve, path);
  rule.end = pts.back();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const CurvePoint& p = pts[k];
    const CurvePoint& q = pts[k + 1];
    const cplx dz = q.z - p.z;
    if (dz == cplx(0.0)) continue;
    for (int piece = 0; piece < pieces; ++piece) {
      const double s0 = double(piece) / pieces, half = 0.5 / pieces;
      for (int i = 0; i < order; ++i) {
        const double s = s0 + half * (1.0 + g.nodes[i]);
        const CurvePoint x = lift(curve, p.z + s * dz, p.w + s * (q.w - p.w));
        rule.nodes.push_back({x, g.weights[i] * half * dz});
      }
    }
  }
  return rule;
}

Eigen::VectorXcd apply_rule(const PathRule& rule, const FormIntegrand& h) {
  if (rule.nodes.empty()) return Eigen::VectorXcd::Zero(h(rule.end).size());
  Eigen::VectorXcd total = rule.nodes.front().weight * h(rule.nodes.front().point);
  for (std::size_t k = 1; k < rule.nodes.size(); ++k) total += rule.nodes[k].weight * h(rule.nodes[k].point);
  return total;
}

}  // namespace minsurf
