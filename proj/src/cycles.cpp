#include <algorithm>
#include <cmath>
#include <limits>

#include "minsurf/curve.hpp"

namespace minsurf {

namespace {

double cross(cplx a, cplx b) { return (std::conj(a) * b).imag(); }

double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double distance_to_polyline(cplx p, const std::vector<cplx>& pts) {
  if (pts.size() == 1) return std::abs(p - pts.front());
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) d = std::min(d, distance_to_segment(p, pts[k], pts[k + 1]));
  return d;
}

void append_arc(std::vector<cplx>& out, cplx centre, double radius, double from, double sweep, int n) {
  for (int k = 1; k <= n; ++k) out.push_back(centre + radius * std::polar(1.0, from + sweep * k / n));
}

/// Counter-clockwise loop at distance eps around a polyline, starting and
/// ending at the same vertex. Convex corners get round joins, concave ones
/// miter points.
std::vector<cplx> capsule(const std::vector<cplx>& pts, double eps) {
  constexpr int kCap = 16;
  std::vector<cplx> loop;
  if (pts.size() == 1) {
    loop.push_back(pts[0] + eps);
    append_arc(loop, pts[0], eps, 0.0, 2.0 * kPi, 4 * kCap);
    loop.back() = loop.front();
    return loop;
  }
  const std::size_t k_last = pts.size() - 1;
  auto seg_normal = [&](std::size_t s) { return kI * (pts[s + 1] - pts[s]) / std::abs(pts[s + 1] - pts[s]); };
  auto miter = [&](std::size_t k) {
    const cplx n1 = seg_normal(k - 1), n2 = seg_normal(k);
    const cplx m = (n1 + n2) / std::abs(n1 + n2);
    return m / (std::conj(m) * n1).real();
  };
  auto turn = [&](std::size_t k) { return std::arg(seg_normal(k) / seg_normal(k - 1)); };
  // right side, forward
  loop.push_back(pts[0] - eps * seg_normal(0));
  for (std::size_t k = 1; k < k_last; ++k) {
    const double t = turn(k);
    if (t > 0.0) {
      loop.push_back(pts[k] - eps * seg_normal(k - 1));
      append_arc(loop, pts[k], eps, std::arg(-seg_normal(k - 1)), t, kCap);
    } else {
      loop.push_back(pts[k] - eps * miter(k));
    }
  }
  loop.push_back(pts[k_last] - eps * seg_normal(k_last - 1));
  append_arc(loop, pts[k_last], eps, std::arg(-seg_normal(k_last - 1)), kPi, kCap);
  // left side, backward
  for (std::size_t k = k_last - 1; k >= 1; --k) {
    const double t = turn(k);
    if (t < 0.0) {
      loop.push_back(pts[k] + eps * seg_normal(k));
      append_arc(loop, pts[k], eps, std::arg(seg_normal(k)), -t, kCap);
    } else {
      loop.push_back(pts[k] + eps * miter(k));
    }
  }
  loop.push_back(pts[0] + eps * seg_normal(0));
  append_arc(loop, pts[0], eps, std::arg(seg_normal(0)), kPi, kCap);
  loop.back() = loop.front();
  return loop;
}

bool is_simple(const std::vector<cplx>& loop) {
  const std::size_t n = loop.size() - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const cplx p = loop[i], d1 = loop[i + 1] - p, r = loop[j], d2 = loop[j + 1] - r;
      const double c = cross(d1, d2);
      if (c == 0.0) continue;
      const double s = cross(r - p, d2) / c, t = cross(r - p, d1) / c;
      if (s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0) return false;
    }
  return true;
}

bool contains(const std::vector<cplx>& set, cplx b) { return std::find(set.begin(), set.end(), b) != set.end(); }

/// Largest offset for which a capsule around `inside` safely avoids the other
/// branch values.
double offset_bound(const AlgebraicCurve& curve, const std::vector<cplx>& inside) {
  double eps = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < inside.size(); ++k) eps = std::min(eps, 0.25 * std::abs(inside[k + 1] - inside[k]));
  for (cplx b : curve.branch_values())
    if (!contains(inside, b)) eps = std::min(eps, 0.4 * distance_to_polyline(b, inside));
  return std::isfinite(eps) ? eps : 0.5;
}

std::vector<cplx> enclosing_loop(const AlgebraicCurve& curve, const std::vector<cplx>& inside, double eps) {
  const auto& all = curve.branch_values();
  for (int attempt = 0; attempt < 20; ++attempt, eps *= 0.5) {
    const auto loop = capsule(inside, eps);
    bool ok = is_simple(loop);
    for (cplx b : all) {
      if (!ok) break;
      const bool in = contains(inside, b);
      if (winding_number(loop, b) != (in ? 1 : 0)) ok = false;
      for (std::size_t k = 0; ok && k + 1 < loop.size(); ++k)
        if (distance_to_segment(b, loop[k], loop[k + 1]) < 3.0 * curve.clearance()) ok = false;
      if (!ok) break;
    }
    if (ok) return loop;
  }
  throw Error(ErrorCode::Unsupported, "could not separate branch values with a simple loop");
}

}  // namespace

int winding_number(const std::vector<cplx>& polygon, cplx point) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < polygon.size(); ++k) total += std::arg((polygon[k + 1] - point) / (polygon[k] - point));
  if (polygon.size() > 1 && polygon.back() != polygon.front())
    total += std::arg((polygon.front() - point) / (polygon.back() - point));
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int intersection_number(const AlgebraicCurve& curve, const SheetPath& c1, const SheetPath& c2) {
  const auto t1 = trace(curve, c1);
  const auto t2 = trace(curve, c2);
  int total = 0;
  for (std::size_t i = 0; i + 1 < t1.size(); ++i) {
    const cplx p = t1[i].z, d1 = t1[i + 1].z - p;
    const double xmin1 = std::min(p.real(), t1[i + 1].z.real()), xmax1 = std::max(p.real(), t1[i + 1].z.real());
    const double ymin1 = std::min(p.imag(), t1[i + 1].z.imag()), ymax1 = std::max(p.imag(), t1[i + 1].z.imag());
    for (std::size_t j = 0; j + 1 < t2.size(); ++j) {
      const cplx r = t2[j].z, d2 = t2[j + 1].z - r;
      if (std::max(r.real(), t2[j + 1].z.real()) < xmin1 || std::min(r.real(), t2[j + 1].z.real()) > xmax1 ||
          std::max(r.imag(), t2[j + 1].z.imag()) < ymin1 || std::min(r.imag(), t2[j + 1].z.imag()) > ymax1)
        continue;
      const double c = cross(d1, d2);
      if (std::abs(c) <= 1e-300) continue;
      const double s = cross(r - p, d2) / c;
      const double t = cross(r - p, d1) / c;
      if (s < 0.0 || s >= 1.0 || t < 0.0 || t >= 1.0) continue;
      const cplx z = p + s * d1;
      const cplx w1 = lift(curve, z, t1[i].w + s * (t1[i + 1].w - t1[i].w)).w;
      const cplx w2 = lift(curve, z, t2[j].w + t * (t2[j + 1].w - t2[j].w)).w;
      if (std::abs(w1 - w2) <= 1e-6 * (1.0 + std::abs(w1))) total += c > 0.0 ? 1 : -1;
    }
  }
  return total;
}

std::vector<Cycle> canonical_cycles(const AlgebraicCurve& curve) {
  if (curve.form() == CurveForm::Rational) return {};
  if (curve.form() != CurveForm::Hyperelliptic)
    throw Error(ErrorCode::Unsupported, "canonical cycles are built for hyperelliptic curves only");
  const int nu = *curve.genus();
  if (nu == 0) return {};
  const auto& e = curve.branch_values();
  std::vector<std::vector<cplx>> a_sets, b_sets;
  for (int j = 1; j <= nu; ++j) {
    a_sets.push_back({e[2 * j - 2], e[2 * j - 1]});
    b_sets.emplace_back(e.begin() + (2 * j - 1), e.begin() + (2 * nu + 1));
  }
  // A common offset scaled differently per loop keeps the loops from
  // running along each other.
  double base = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nu; ++j) base = std::min({base, offset_bound(curve, a_sets[j]), offset_bound(curve, b_sets[j])});
  auto make = [&](const std::string& id, const std::vector<cplx>& inside, double eps) {
    Cycle c;
    c.id = id;
    c.path.vertices = enclosing_loop(curve, inside, eps);
    const cplx z0 = c.path.vertices.front();
    c.path.start = lift(curve, z0, curve.fiber(z0).front());
    return c;
  };
  std::vector<Cycle> a, b;
  for (int j = 1; j <= nu; ++j) {
    a.push_back(make("a" + std::to_string(j), a_sets[j - 1], 0.3 * base));
    b.push_back(make("b" + std::to_string(j), b_sets[j - 1], (0.5 + 0.5 / j) * base));
  }
  for (int j = 0; j < nu; ++j) {
    const int s = intersection_number(curve, a[j].path, b[j].path);
    if (s == -1) std::reverse(b[j].path.vertices.begin(), b[j].path.vertices.end());
    else if (s != 1) throw Error(ErrorCode::Unsupported, "a/b loop pair does not intersect once");
  }
  std::vector<Cycle> out = a;
  out.insert(out.end(), b.begin(), b.end());
  for (int i = 0; i < 2 * nu; ++i)
    for (int k = i + 1; k < 2 * nu; ++k) {
      const int expected = (k == i + nu) ? 1 : 0;
      if (intersection_number(curve, out[i].path, out[k].path) != expected)
        throw Error(ErrorCode::Unsupported, "constructed loops are not a symplectic basis");
    }
  return out;
}

}  // namespace minsurf
