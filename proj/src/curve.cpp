#include "minsurf/curve.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace minsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

std::string_view to_string(CurveForm form) {
  switch (form) {
    case CurveForm::Rational: return "rational";
    case CurveForm::Hyperelliptic: return "hyperelliptic";
    case CurveForm::General: return "general";
  }
  return "general";
}

AlgebraicCurve::AlgebraicCurve(Poly2 p, CurveForm form)
    : p_(std::move(p)), pz_(p_.dz()), pw_(p_.dw()), form_(form) {}

AlgebraicCurve AlgebraicCurve::rational() {
  Poly2::Coeffs a = Poly2::Coeffs::Zero(3, 2);
  a(0, 1) = 1.0;
  a(2, 0) = -1.0;
  AlgebraicCurve c(Poly2(a), CurveForm::Rational);
  c.genus_ = 0;
  return c;
}

AlgebraicCurve AlgebraicCurve::hyperelliptic(const UPoly& q_in) {
  UPoly q = trim_leading(q_in, 0.0);
  const auto d = static_cast<int>(q.size()) - 1;
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "hyperelliptic curve needs deg q >= 1");
  Poly2::Coeffs a = Poly2::Coeffs::Zero(std::max(d + 1, 1), 3);
  for (int i = 0; i <= d; ++i) a(i, 0) = -q(i);
  a(0, 2) = 1.0;
  AlgebraicCurve c(Poly2(a), CurveForm::Hyperelliptic);
  c.q_ = q;
  c.genus_ = (d - 1) / 2;
  c.compute_branch_values();
  return c;
}

AlgebraicCurve AlgebraicCurve::general(Poly2 p) {
  if (p.deg_w() < 1) throw Error(ErrorCode::InvalidArgument, "curve polynomial must involve w");
  AlgebraicCurve c(std::move(p), CurveForm::General);
  c.compute_branch_values();
  return c;
}

AlgebraicCurve AlgebraicCurve::from_polynomial(const Poly2& p) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero polynomial");
  const auto& a = p.coeffs();
  if (p.deg_w() == 1 && p.deg_z() == 2 && a(0, 1) == cplx(1.0) && a(2, 0) == cplx(-1.0) &&
      std::abs(a(0, 0)) + std::abs(a(1, 0)) + std::abs(a(1, 1)) + std::abs(a(2, 1)) == 0.0)
    return rational();
  if (p.deg_w() == 2 && a.col(1).isZero(0) && a(0, 2) != cplx(0.0) &&
      a.col(2).tail(a.rows() - 1).isZero(0) && p.deg_z() >= 1) {
    UPoly q = -a.col(0) / a(0, 2);
    AlgebraicCurve c = hyperelliptic(q);
    c.p_ = p;
    c.pz_ = p.dz();
    c.pw_ = p.dw();
    return c;
  }
  return general(p);
}

void AlgebraicCurve::compute_branch_values() {
  std::vector<cplx> crit;
  if (form_ == CurveForm::Hyperelliptic) {
    crit = roots(q_);
    for (std::size_t i = 0; i < crit.size(); ++i)
      for (std::size_t j = i + 1; j < crit.size(); ++j)
        if (std::abs(crit[i] - crit[j]) <= 1e-8 * (1.0 + std::abs(crit[i])))
          throw Error(ErrorCode::NotSquarefree, "q has a repeated root");
  } else if (form_ == CurveForm::General && p_.deg_w() >= 2) {
    const int n = p_.deg_w();
    const int bound = (2 * n - 1) * p_.deg_z();
    const int m = next_pow2(std::max(2 * (bound + 1), 16));
    std::vector<cplx> vals(m);
    for (int k = 0; k < m; ++k) {
      const cplx z = std::polar(1.0, 2.0 * kPi * k / m);
      UPoly f = p_.w_coefficients(z);
      UPoly g = pw_.w_coefficients(z);
      // keep formal degrees n and n-1 so the determinant stays polynomial in z
      if (g.size() < n) {
        UPoly gg = UPoly::Zero(n);
        gg.head(g.size()) = g;
        g = gg;
      }
      vals[k] = resultant(f, g);
    }
    UPoly disc = interpolate_on_circle(vals, 1.0).head(bound + 1);
    disc = trim_leading(disc, 1e-10);
    if (disc.cwiseAbs().maxCoeff() == 0.0)
      throw Error(ErrorCode::NotSquarefree, "discriminant vanishes identically");
    crit = roots(disc);
    UPoly lead(p_.deg_z() + 1);
    for (int i = 0; i <= p_.deg_z(); ++i) lead(i) = p_.coeff(i, n);
    for (cplx r : roots(trim_leading(lead, 1e-14))) crit.push_back(r);
    std::vector<cplx> dedup;
    for (const auto& cl : cluster_roots(crit, 1e-6)) dedup.push_back(cl.center);
    crit = dedup;
  }
  std::sort(crit.begin(), crit.end(), lex_less);
  branch_ = crit;
  double diam = 0.0, rad = 0.0;
  for (std::size_t i = 0; i < branch_.size(); ++i) {
    rad = std::max(rad, std::abs(branch_[i]));
    for (std::size_t j = i + 1; j < branch_.size(); ++j) diam = std::max(diam, std::abs(branch_[i] - branch_[j]));
  }
  clearance_ = diam > 0.0 ? 1e-3 * diam : 1e-3 * (1.0 + rad);
}

bool AlgebraicCurve::infinity_is_branch() const {
  return form_ == CurveForm::Hyperelliptic && (q_.size() - 1) % 2 == 1;
}

bool AlgebraicCurve::monic_in_w() const {
  const int n = p_.deg_w();
  if (p_.coeff(0, n) == cplx(0.0)) return false;
  for (int i = 1; i <= p_.deg_z(); ++i)
    if (p_.coeff(i, n) != cplx(0.0)) return false;
  return true;
}

std::vector<cplx> AlgebraicCurve::fiber(cplx z) const {
  std::vector<cplx> out;
  switch (form_) {
    case CurveForm::Rational:
      out.push_back(z * z);
      return out;
    case CurveForm::Hyperelliptic: {
      const cplx s = std::sqrt(horner(q_, z));
      out = {s, -s};
      return out;
    }
    case CurveForm::General:
      out = roots(trim_leading(p_.w_coefficients(z), 1e-15));
      std::sort(out.begin(), out.end(), lex_less);
      return out;
  }
  return out;
}

double AlgebraicCurve::distance_to_branch(cplx z) const {
  double d = kInf;
  for (cplx b : branch_) d = std::min(d, std::abs(z - b));
  return d;
}

double AlgebraicCurve::residual_tolerance(cplx z, cplx w) const {
  return 1e-12 * (1.0 + p_.term_magnitude(z, w));
}

cplx AlgebraicCurve::dw_dz(cplx z, cplx w) const { return -pz_(z, w) / pw_(z, w); }

CurvePoint lift(const AlgebraicCurve& curve, cplx z0, cplx w_guess) {
  if (curve.distance_to_branch(z0) < curve.clearance())
    throw Error(ErrorCode::AtBranchPoint, "lift requested within branch clearance");
  const Poly2& p = curve.polynomial();
  const Poly2 pw = p.dw();
  cplx w = w_guess;
  for (int it = 0; it < 60; ++it) {
    const cplx f = p(z0, w);
    const double tol = curve.residual_tolerance(z0, w);
    if (std::abs(f) <= tol) return {z0, w, std::abs(f), false};
    const cplx d = pw(z0, w);
    if (d == cplx(0.0)) break;
    const cplx step = f / d;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
      const double r = std::abs(p(z0, w));
      if (r <= 1e3 * curve.residual_tolerance(z0, w)) return {z0, w, r, false};
      break;
    }
  }
  throw Error(ErrorCode::NoConvergence, "Newton lift did not converge");
}

std::vector<cplx> route_around_branches(const AlgebraicCurve& curve, const std::vector<cplx>& vertices) {
  const auto& branch = curve.branch_values();
  const double clear = curve.clearance();
  for (cplx v : vertices)
    if (curve.distance_to_branch(v) < clear)
      throw Error(ErrorCode::AtBranchPoint, "path vertex inside branch clearance");
  if (branch.empty() || vertices.size() < 2) return vertices;

  const double radius = 2.0 * clear;
  constexpr int kArcPoints = 16;
  std::vector<cplx> out{vertices.front()};
  for (std::size_t s = 0; s + 1 < vertices.size(); ++s) {
    const cplx a = vertices[s], b = vertices[s + 1];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    const cplx u = (b - a) / len;
    struct Hit {
      double t;
      cplx centre;
      double offset;
    };
    std::vector<Hit> hits;
    for (cplx c : branch) {
      const cplx rel = (c - a) * std::conj(u);
      const double t = rel.real();
      if (std::abs(rel.imag()) < radius && t > 0.0 && t < len) hits.push_back({t, c, rel.imag()});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
    for (const Hit& h : hits) {
      const double half = std::sqrt(radius * radius - h.offset * h.offset);
      const cplx entry = a + (h.t - half) * u;
      const cplx exit = a + (h.t + half) * u;
      // pass on the side of the centre the segment runs on; right side if through it
      const double side = h.offset >= 0.0 ? 1.0 : -1.0;
      const cplx mid_dir = -side * kI * u;
      auto ccw_angle = [](cplx from, cplx to) {
        double t = std::arg(to / from);
        return t < 0.0 ? t + 2.0 * kPi : t;
      };
      const double th_e = std::arg(entry - h.centre);
      const double ccw_exit = ccw_angle(entry - h.centre, exit - h.centre);
      const double ccw_mid = ccw_angle(entry - h.centre, mid_dir);
      // counter-clockwise if that sweep passes through the mid direction
      const double sweep = ccw_mid < ccw_exit ? ccw_exit : ccw_exit - 2.0 * kPi;
      out.push_back(entry);
      for (int k = 1; k < kArcPoints; ++k)
        out.push_back(h.centre + radius * std::polar(1.0, th_e + sweep * k / kArcPoints));
      out.push_back(exit);
    }
    out.push_back(b);
  }
  return out;
}

std::vector<CurvePoint> trace(const AlgebraicCurve& curve, const SheetPath& path) {
  if (path.vertices.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  const cplx z0 = path.vertices.front();
  CurvePoint cur = lift(curve, z0, path.start.w);
  if (std::abs(cur.w - path.start.w) > 1e-6 * (1.0 + std::abs(cur.w)) || std::abs(z0 - path.start.z) > 1e-12 * (1.0 + std::abs(z0)))
    throw Error(ErrorCode::InvalidArgument, "path start does not lie on the curve over the first vertex");
  std::vector<CurvePoint> out{cur};
  const auto route = route_around_branches(curve, path.vertices);
  const Poly2& p = curve.polynomial();
  const Poly2 pw = p.dw();
  const bool single_sheet = curve.sheets() <= 1;

  for (std::size_t s = 0; s + 1 < route.size(); ++s) {
    const cplx target = route[s + 1];
    while (cur.z != target) {
      const double remaining = std::abs(target - cur.z);
      const cplx dir = (target - cur.z) / remaining;
      double h = std::min({remaining, path.control.max_step, 0.3 * curve.distance_to_branch(cur.z)});
      const cplx slope = single_sheet ? cplx(0.0) : curve.dw_dz(cur.z, cur.w);
      bool accepted = false;
      bool ambiguous = false;
      for (int depth = 0; depth <= path.control.max_depth; ++depth, h *= 0.5) {
        const bool last = h >= remaining;
        const cplx z1 = last ? target : cur.z + h * dir;
        const cplx wp = single_sheet ? cur.w : cur.w + (z1 - cur.z) * slope;
        cplx w = wp;
        bool converged = false;
        for (int it = 0; it < 8; ++it) {
          const cplx f = p(z1, w);
          if (std::abs(f) <= curve.residual_tolerance(z1, w)) {
            converged = true;
            break;
          }
          const cplx d = pw(z1, w);
          if (d == cplx(0.0)) break;
          w -= f / d;
        }
        if (!converged) continue;
        if (!single_sheet) {
          double sep = kInf;
          for (cplx r : curve.fiber(z1)) {
            const double dist = std::abs(r - w);
            if (dist > 1e-9 * (1.0 + std::abs(w))) sep = std::min(sep, dist);
          }
          if (std::abs(w - wp) > 0.25 * sep) {
            ambiguous = true;
            continue;
          }
        }
        cur = {z1, w, std::abs(p(z1, w)), false};
        accepted = true;
        break;
      }
      if (!accepted) {
        if (ambiguous) throw Error(ErrorCode::SheetJump, "corrector lost track of the sheet");
        throw Error(ErrorCode::PathTooCoarse, "step refinement exhausted");
      }
      out.push_back(cur);
    }
  }
  return out;
}

CurvePoint continue_along(const AlgebraicCurve& curve, const SheetPath& path) { return trace(curve, path).back(); }

SheetPath reversed(const AlgebraicCurve& curve, const SheetPath& path) {
  SheetPath r;
  r.vertices.assign(path.vertices.rbegin(), path.vertices.rend());
  r.start = continue_along(curve, path);
  r.control = path.control;
  return r;
}

Cycle concatenate(const AlgebraicCurve& curve, const Cycle& first, const Cycle& second) {
  const CurvePoint end1 = continue_along(curve, first.path);
  const auto& s1 = first.path.start;
  const auto& s2 = second.path.start;
  const double tol = 1e-8 * (1.0 + std::abs(s1.w));
  if (std::abs(end1.z - s1.z) > tol || std::abs(end1.w - s1.w) > tol)
    throw Error(ErrorCode::InvalidArgument, "first cycle is not closed");
  if (std::abs(s2.z - s1.z) > tol || std::abs(s2.w - s1.w) > tol)
    throw Error(ErrorCode::InvalidArgument, "cycles do not share a base point");
  Cycle c;
  c.id = first.id + "*" + second.id;
  c.path = first.path;
  c.path.vertices.insert(c.path.vertices.end(), second.path.vertices.begin() + 1, second.path.vertices.end());
  return c;
}

Permutation monodromy(const AlgebraicCurve& curve, const SheetPath& loop) {
  const cplx base = loop.vertices.front();
  if (std::abs(loop.vertices.back() - base) > 1e-12 * (1.0 + std::abs(base)))
    throw Error(ErrorCode::InvalidArgument, "monodromy loop is not closed");
  const auto fib = curve.fiber(base);
  Permutation perm(fib.size(), -1);
  for (std::size_t k = 0; k < fib.size(); ++k) {
    SheetPath path = loop;
    path.start = {base, fib[k], 0.0, false};
    const CurvePoint end = continue_along(curve, path);
    std::size_t best = 0;
    for (std::size_t j = 1; j < fib.size(); ++j)
      if (std::abs(fib[j] - end.w) < std::abs(fib[best] - end.w)) best = j;
    perm[k] = static_cast<int>(best);
  }
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != static_cast<int>(k)) throw Error(ErrorCode::SheetJump, "continuation did not permute the fiber");
  return perm;
}

Permutation compose(const Permutation& first, const Permutation& then) {
  Permutation r(first.size());
  for (std::size_t k = 0; k < first.size(); ++k) r[k] = then[first[k]];
  return r;
}

}  // namespace minsurf
