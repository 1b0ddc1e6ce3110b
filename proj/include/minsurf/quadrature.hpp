#pragma once

#include <functional>
#include <vector>

#include "minsurf/common.hpp"
#include "minsurf/curve.hpp"

namespace minsurf {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

using ParamIntegrand = std::function<Eigen::VectorXcd(double)>;

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod (7/15) integral of a vector-valued function over
/// [a, b]. Throws NoConvergence when an interval cannot be resolved within
/// max_depth bisections.
Eigen::VectorXcd integrate_adaptive(const ParamIntegrand& f, double a, double b, const AdaptiveOptions& opt = {});

/// Integrand of a 1-form h(z, w) dz; returns the coefficients h.
using FormIntegrand = std::function<Eigen::VectorXcd(const CurvePoint&)>;

/// Adaptive integral of h dz along a sheet path, sub-step by sub-step of the
/// traced polyline.
Eigen::VectorXcd integrate_path(const AlgebraicCurve& curve, const SheetPath& path, const FormIntegrand& h,
                                const AdaptiveOptions& opt = {});

/// Integral of h dz from the simple branch point b to `end` in the chart
/// z = b + (end.z - b) s^2, where w ~ end.w s. No other branch value may lie
/// within |end.z - b| of b.
Eigen::VectorXcd integrate_from_branch(const AlgebraicCurve& curve, cplx b, const CurvePoint& end,
                                       const FormIntegrand& h, const AdaptiveOptions& opt = {});

/// Adaptive integral of density |dz| along a sheet path.
double integrate_length(const AlgebraicCurve& curve, const SheetPath& path,
                        const std::function<double(const CurvePoint&)>& density, const AdaptiveOptions& opt = {});

/// A fixed quadrature rule along a traced path: sum_k weight_k h(point_k)
/// approximates the integral of h dz. Each traced step is split into
/// 2^refinement pieces carrying `order` Gauss-Legendre nodes.
struct PathNode {
  CurvePoint point;
  cplx weight;
};

struct PathRule {
  std::vector<PathNode> nodes;
  CurvePoint end;
};

PathRule build_path_rule(const AlgebraicCurve& curve, const SheetPath& path, int refinement = 0, int order = 16);

Eigen::VectorXcd apply_rule(const PathRule& rule, const FormIntegrand& h);

}  // namespace minsurf
