#include "minsurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "minsurf/quadrature.hpp"

namespace minsurf {

namespace {

Eigen::VectorXcd as_vector(const Vec3c& v) { return Eigen::VectorXcd(v); }

FormIntegrand form_of(const WeierstrassData& W) {
  return [&W](const CurvePoint& q) { return as_vector(W.F(q)); };
}

double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

std::vector<cplx> finite_pole_z(const WeierstrassData& W) {
  std::vector<cplx> out;
  for (const auto& pole : find_polar_set(W).points)
    if (!pole.at_infinity) out.push_back(pole.z);
  return out;
}

double distance_to_poles(const std::vector<cplx>& poles, const std::vector<cplx>& polyline) {
  double best = std::numeric_limits<double>::infinity();
  for (cplx pole : poles) {
    for (std::size_t k = 0; k + 1 < polyline.size(); ++k)
      best = std::min(best, distance_to_segment(pole, polyline[k], polyline[k + 1]));
    if (polyline.size() == 1) best = std::min(best, std::abs(pole - polyline.front()));
  }
  return best;
}

// Paths within clearance of a pole, and integration failures next to one,
// are reported as PathThroughPole.
template <typename Body>
auto pole_aware(const AlgebraicCurve& curve, const std::vector<cplx>& poles, const std::vector<cplx>& polyline,
                Body&& body) {
  const double d = distance_to_poles(poles, polyline);
  if (d < curve.clearance()) throw Error(ErrorCode::PathThroughPole, "integration path passes through a pole of F dz");
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoConvergence && d < 1e-2)
      throw Error(ErrorCode::PathThroughPole, "integration path passes too close to a pole of F dz");
    throw;
  }
}

bool is_branch_value(const AlgebraicCurve& curve, cplx z) {
  for (cplx b : curve.branch_values())
    if (std::abs(z - b) <= 1e-12 * (1.0 + std::abs(b))) return true;
  return false;
}

bool same_lift(cplx w, cplx target) { return std::abs(w - target) <= 1e-6 * (1.0 + std::abs(target)); }

cplx spherical_derivative_ratio(const RationalOnCurve& g, const AlgebraicCurve& curve, const CurvePoint& q) {
  const cplx value = g(q);
  return g.derivative(curve, q) / (1.0 + std::norm(value));
}

// Univariate coefficients of p(z, z^2).
UPoly on_rational_curve(const Poly2& p) {
  UPoly c = UPoly::Zero(p.deg_z() + 2 * p.deg_w() + 1);
  for (int i = 0; i <= p.deg_z(); ++i)
    for (int j = 0; j <= p.deg_w(); ++j) c[i + 2 * j] += p.coeff(i, j);
  return trim_leading(c);
}

double chordal(cplx a, cplx b) { return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b))); }

double chordal_to_infinity(cplx a) { return 2.0 / std::sqrt(1.0 + std::norm(a)); }

double ring_integral(const std::function<double(cplx)>& density, double r) {
  if (r == 0.0) return 2.0 * kPi * density(0.0);
  auto trapezoid = [&](int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += density(std::polar(r, 2.0 * kPi * k / n));
    return 2.0 * kPi * s / n;
  };
  double prev = trapezoid(64);
  for (int n = 128; n <= 8192; n *= 2) {
    const double next = trapezoid(n);
    if (std::abs(next - prev) <= 1e-13 * (1.0 + std::abs(next))) return next;
    prev = next;
  }
  return prev;
}

}  // namespace

ImmersionPoint evaluate(const WeierstrassData& W, const CurvePoint& q, const SheetPath& path, std::string path_id) {
  if (q.at_infinity) throw Error(ErrorCode::AtPole, "cannot evaluate the immersion at a puncture over infinity");
  if (path.vertices.empty() || std::abs(path.vertices.front()) > 1e-14)
    throw Error(ErrorCode::InvalidArgument, "evaluation path must start at z = 0");
  if (std::abs(path.vertices.back() - q.z) > 1e-12 * (1.0 + std::abs(q.z)))
    throw Error(ErrorCode::InvalidArgument, "evaluation path must end over q");

  ImmersionPoint out;
  out.source = q;
  out.path_id = std::move(path_id);
  const AlgebraicCurve& curve = W.curve;

  const Vec3c integral = pole_aware(curve, finite_pole_z(W), path.vertices, [&]() -> Vec3c {
    if (path.vertices.size() == 1) return Vec3c::Zero();
    if (!is_branch_value(curve, 0.0)) {
      SheetPath p = path;
      p.start = W.basepoint();
      if (!same_lift(continue_along(curve, p).w, q.w))
        throw Error(ErrorCode::InvalidArgument, "evaluation path ends on a different sheet than q");
      return integrate_path(curve, p, form_of(W));
    }
    // The basepoint is a branch point: leave it in a local chart, then pick
    // the sheet that ends at q.
    double gap = std::abs(path.vertices[1]);
    for (cplx b : curve.branch_values())
      if (std::abs(b) > 1e-12) gap = std::min(gap, 0.25 * std::abs(b));
    const cplx z1 = path.vertices[1] * (0.5 * gap / std::abs(path.vertices[1]));
    SheetPath rest = path;
    rest.vertices.front() = z1;
    for (cplx w1 : curve.fiber(z1)) {
      rest.start = lift(curve, z1, w1);
      if (!same_lift(continue_along(curve, rest).w, q.w)) continue;
      const Eigen::VectorXcd tail = integrate_path(curve, rest, form_of(W));
      return Vec3c(integrate_from_branch(curve, 0.0, rest.start, form_of(W)) + tail);
    }
    throw Error(ErrorCode::InvalidArgument, "evaluation path ends on a different sheet than q");
  });
  out.position = W.translation + integral.real();
  return out;
}

MetricSample metric_at(const WeierstrassData& W, const CurvePoint& q) {
  if (q.at_infinity) throw Error(ErrorCode::AtPole, "metric requested at a puncture over infinity");
  const Vec3c F = W.F(q);
  if (!F.allFinite()) throw Error(ErrorCode::AtPole, "metric requested at a pole of F dz");
  MetricSample m;
  m.at = q;
  m.ds2_coeff = 0.5 * F.squaredNorm();

  const cplx f = F(0) - kI * F(1);
  const cplx f_bar = F(0) + kI * F(1);
  const double f3 = std::abs(F(2));
  // |f3|^2 / |f| equals |f1 + i f2| on conformal data; fall back to it at g = inf.
  const double af = std::abs(f);
  const double upper = af > 0.0 ? f3 * f3 / af : std::abs(f_bar);
  m.ds2_from_gauss = 0.25 * (af + upper) * (af + upper);

  // Spherical derivative of g = f3 / f, taken through 1/g = f / f3 where |g| > 1.
  const AlgebraicCurve& C = W.curve;
  const cplx d0 = W.f[0].derivative(C, q), d1 = W.f[1].derivative(C, q), d2 = W.f[2].derivative(C, q);
  const cplx df = d0 - kI * d1;
  double sigma;
  if (f3 <= af) {
    const cplx g = F(2) / f;
    sigma = std::abs((d2 * f - F(2) * df) / (f * f)) / (1.0 + std::norm(g));
  } else {
    const cplx h = f / F(2);
    sigma = std::abs((df * F(2) - f * d2) / (F(2) * F(2))) / (1.0 + std::norm(h));
  }
  m.gauss_curv = -4.0 * sigma * sigma / m.ds2_coeff;
  return m;
}

TotalCurvature total_curvature(const WeierstrassData& W, double radius) {
  if (W.curve.form() != CurveForm::Rational)
    throw Error(ErrorCode::Unsupported, "numeric total curvature is implemented on the rational curve only");
  const RationalOnCurve g = gauss_map(W);
  const auto counts = gauss_degree_numeric(W);
  if (counts[0] != counts[1]) throw Error(ErrorCode::DegenerateGauss, "Gauss-map preimage counts disagree");
  const auto algebraic = gauss_degree_algebraic(W);
  if (algebraic && *algebraic != counts[0])
    throw Error(ErrorCode::DegenerateGauss, "algebraic and numeric Gauss-map degrees disagree");
  const int degree = counts[0];

  TotalCurvature out;
  out.exact = -4.0 * kPi * degree;

  const std::function<double(cplx)> density = [&](cplx z) {
    const CurvePoint q{z, z * z, 0.0, false};
    const double s = std::abs(spherical_derivative_ratio(g, W.curve, q));
    return 4.0 * s * s;
  };

  const UPoly num = on_rational_curve(g.numerator()), den = on_rational_curve(g.denominator());
  const int dn = int(num.size()) - 1, dd = int(den.size()) - 1;
  const bool infinite_at_infinity = dn > dd;
  const cplx at_infinity = dn == dd ? num(dn) / den(dd) : cplx(0.0);
  auto tail_bound = [&](double R) {
    double delta = 0.0;
    for (int k = 0; k < 256; ++k) {
      const cplx z = std::polar(R, 2.0 * kPi * k / 256);
      const cplx v = g({z, z * z, 0.0, false});
      delta = std::max(delta, infinite_at_infinity ? chordal_to_infinity(v) : chordal(v, at_infinity));
    }
    return degree * kPi * delta * delta;
  };

  if (radius <= 0.0) {
    radius = 4.0;
    while (tail_bound(radius) > 1e-4 * 4.0 * kPi && radius < 1e6) radius *= 2.0;
  }
  out.radius = radius;
  out.tail_bound = tail_bound(radius);

  const AdaptiveOptions opt{1e-10, 40};
  const double split = std::min(1.0, radius);
  const ParamIntegrand inner = [&](double r) -> Eigen::VectorXcd {
    return Eigen::VectorXcd::Constant(1, ring_integral(density, r) * r);
  };
  double area = integrate_adaptive(inner, 0.0, split, opt)(0).real();
  if (radius > split) {
    const ParamIntegrand outer = [&](double s) -> Eigen::VectorXcd {
      const double r = std::exp(s);
      return Eigen::VectorXcd::Constant(1, ring_integral(density, r) * r * r);
    };
    area += integrate_adaptive(outer, std::log(split), std::log(radius), opt)(0).real();
  }
  out.numeric = -area;
  return out;
}

FluxVector flux(const WeierstrassData& W, const Cycle& cycle) {
  const auto& v = cycle.path.vertices;
  if (v.size() < 2 || std::abs(v.front() - v.back()) > 1e-12 * (1.0 + std::abs(v.front())))
    throw Error(ErrorCode::InvalidArgument, "flux needs a closed cycle");
  // Half the difference of the two orientations, so that reversing the cycle
  // negates the result bit for bit.
  const SheetPath back = reversed(W.curve, cycle.path);
  const Eigen::VectorXcd integral = pole_aware(W.curve, finite_pole_z(W), v, [&]() -> Eigen::VectorXcd {
    return 0.5 * (integrate_path(W.curve, cycle.path, form_of(W)) - integrate_path(W.curve, back, form_of(W)));
  });
  return {cycle.id, integral.imag()};
}

cplx MeshGrid::node(int row, int col) const {
  if (kind == Kind::Polar) {
    const double r = rows > 1 ? inner + (outer - inner) * row / (rows - 1) : inner;
    return center + std::polar(r, 2.0 * kPi * col / cols);
  }
  const double x = cols > 1 ? lo.real() + (hi.real() - lo.real()) * col / (cols - 1) : lo.real();
  const double y = rows > 1 ? lo.imag() + (hi.imag() - lo.imag()) * row / (rows - 1) : lo.imag();
  return {x, y};
}

Mesh mesh(const WeierstrassData& W, const MeshGrid& grid, PathTree tree) {
  Mesh out;
  if (grid.empty()) return out;
  const AlgebraicCurve& curve = W.curve;
  const int rows = grid.rows, cols = grid.cols;
  auto index = [cols](int r, int c) { return r * cols + c; };

  std::vector<cplx> z(std::size_t(rows) * cols);
  const double snap = 2.0 * curve.clearance();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      cplx p = grid.node(r, c);
      for (cplx b : curve.branch_values()) {
        const double d = std::abs(p - b);
        if (d < snap) p = b + (d > 0.0 ? (p - b) / d : cplx(1.0)) * snap;
      }
      z[index(r, c)] = p;
    }

  std::vector<CurvePoint> finite_poles;
  std::vector<cplx> pole_z;
  for (const auto& pole : find_polar_set(W).points)
    if (!pole.at_infinity) {
      finite_poles.push_back(pole);
      pole_z.push_back(pole.z);
    }
  auto check_clearance = [&](const CurvePoint& q) {
    for (const auto& pole : finite_poles)
      if (std::abs(q.z - pole.z) < curve.clearance() && same_lift(q.w, pole.w))
        throw Error(ErrorCode::InvalidArgument, "grid vertex lies within clearance of a pole");
  };

  out.vertices.assign(z.size(), Vec3::Zero());
  out.param_grid.assign(z.size(), CurvePoint{});

  // Root: basepoint -> approach -> node(0, 0).
  {
    SheetPath root;
    root.vertices.push_back(0.0);
    root.vertices.insert(root.vertices.end(), grid.approach.begin(), grid.approach.end());
    root.vertices.push_back(z[0]);
    root.start = W.basepoint();
    CurvePoint q0;
    if (is_branch_value(curve, 0.0)) {
      const cplx z1 = root.vertices[1] * (0.25 * curve.distance_to_branch(root.vertices[1]) /
                                          std::max(std::abs(root.vertices[1]), 1e-300));
      SheetPath rest = root;
      rest.vertices.front() = z1;
      rest.start = lift(curve, z1, curve.fiber(z1).front());
      q0 = continue_along(curve, rest);
    } else {
      q0 = continue_along(curve, root);
    }
    check_clearance(q0);
    out.param_grid[0] = q0;
    out.vertices[0] = evaluate(W, q0, root).position;
  }

  auto step = [&](int from, int to) {
    SheetPath edge;
    edge.vertices = {z[from], z[to]};
    edge.start = out.param_grid[from];
    const CurvePoint q = continue_along(curve, edge);
    check_clearance(q);
    const Eigen::VectorXcd d = pole_aware(curve, pole_z, edge.vertices, [&] { return integrate_path(curve, edge, form_of(W)); });
    out.param_grid[to] = q;
    out.vertices[to] = out.vertices[from] + d.real();
  };

  if (tree == PathTree::RowsFirst) {
    for (int c = 1; c < cols; ++c) step(index(0, c - 1), index(0, c));
    for (int c = 0; c < cols; ++c)
      for (int r = 1; r < rows; ++r) step(index(r - 1, c), index(r, c));
  } else {
    for (int r = 1; r < rows; ++r) step(index(r - 1, 0), index(r, 0));
    for (int r = 0; r < rows; ++r)
      for (int c = 1; c < cols; ++c) step(index(r, c - 1), index(r, c));
  }

  const bool periodic = grid.kind == MeshGrid::Kind::Polar;
  const int col_cells = periodic ? (cols > 2 ? cols : 0) : cols - 1;
  auto emit = [&](int a, int b, int c) {
    const double area = 0.5 * (out.vertices[b] - out.vertices[a]).cross(out.vertices[c] - out.vertices[a]).norm();
    if (area > 1e-14) out.faces.push_back({a, b, c});
  };
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < col_cells; ++c) {
      const int c2 = (c + 1) % cols;
      const int a = index(r, c), b = index(r, c2), d = index(r + 1, c2), e = index(r + 1, c);
      emit(a, b, d);
      emit(a, d, e);
    }
  return out;
}

void write_obj(std::ostream& out, const Mesh& m) {
  char line[128];
  for (const Vec3& v : m.vertices) {
    std::snprintf(line, sizeof line, "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    out << line;
  }
  for (const auto& f : m.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

CompletenessReport completeness_probe(const WeierstrassData& W, const SheetPath& ray, bool to_infinity, int levels) {
  CompletenessReport out;
  const auto& v = ray.vertices;
  if (v.size() < 2 || levels < 3) return out;
  const std::function<double(const CurvePoint&)> density = [&W](const CurvePoint& q) {
    return std::sqrt(0.5 * W.F(q).squaredNorm());
  };

  const cplx target = v.back(), before = v[v.size() - 2];
  auto truncation = [&](int level) {
    return to_infinity ? target * std::ldexp(1.0, level) : target + (before - target) * std::ldexp(1.0, -level);
  };

  SheetPath prefix = ray;
  prefix.vertices.back() = truncation(to_infinity ? 0 : 1);
  auto tolerance = [](double scale) { return AdaptiveOptions{1e-11 * (1.0 + scale), 40}; };
  double length = integrate_length(W.curve, prefix, density, tolerance(0.0));
  CurvePoint at = continue_along(W.curve, prefix);
  out.lengths.push_back(length);
  for (int level = (to_infinity ? 1 : 2); int(out.lengths.size()) < levels; ++level) {
    SheetPath piece;
    piece.vertices = {at.z, truncation(level)};
    piece.start = at;
    length += integrate_length(W.curve, piece, density, tolerance(length));
    at = continue_along(W.curve, piece);
    out.lengths.push_back(length);
  }
  const std::size_t n = out.lengths.size();
  const double last = out.lengths[n - 1] - out.lengths[n - 2];
  const double previous = out.lengths[n - 2] - out.lengths[n - 3];
  out.unbounded = last > 0.0 && last >= 0.75 * previous;
  return out;
}

}  // namespace minsurf
