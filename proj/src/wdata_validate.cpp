#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "minsurf/quadrature.hpp"
#include "minsurf/wdata.hpp"

namespace minsurf {

namespace {

constexpr double kConformalityTol = 1e-12;
constexpr double kPeriodTol = 1e-8;
constexpr double kRegularityFloor = 1e-10;
constexpr double kCircleRadius = 1e-2;

double radical_inverse(int index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<cplx> finite_polar_z(const WeierstrassData& W) {
  std::vector<cplx> out;
  try {
    for (const CurvePoint& p : find_polar_set(W).points)
      if (!p.at_infinity) out.push_back(p.z);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unsupported) throw;
  }
  return out;
}

std::vector<cplx> special_z(const WeierstrassData& W) {
  std::vector<cplx> s = finite_polar_z(W);
  for (cplx b : W.curve.branch_values()) s.push_back(b);
  return s;
}

double distance_to_set(cplx z, const std::vector<cplx>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (cplx s : set) d = std::min(d, std::abs(z - s));
  return d;
}

double sample_radius(const std::vector<cplx>& special) {
  double r = 1.0;
  for (cplx s : special) r = std::max(r, 1.0 + std::abs(s));
  return 2.0 * r;
}

void push_fiber(const AlgebraicCurve& curve, cplx z, std::vector<CurvePoint>& out) {
  if (curve.distance_to_branch(z) < 2.0 * curve.clearance()) return;
  for (cplx w : curve.fiber(z)) out.push_back(lift(curve, z, w));
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    CheckResult r;
    r.name = name;
    r.status = e.code() == ErrorCode::Unsupported ? CheckStatus::Unverified : CheckStatus::Fail;
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.detail = e.what();
    return r;
  }
}

/// True when num and den share a nonconstant polynomial factor.
bool share_factor(const Poly2& num, const Poly2& den) {
  if (num.is_zero()) return false;
  const double scale = 1e-9 * (1.0 + num.max_abs_coeff()) * (1.0 + den.max_abs_coeff());
  // factor in z alone: a common root of every nonzero w-coefficient of both
  std::vector<UPoly> cols;
  for (const Poly2* q : {&num, &den})
    for (Eigen::Index j = 0; j < q->coeffs().cols(); ++j)
      if (!q->coeffs().col(j).isZero(0)) cols.push_back(trim_leading(q->coeffs().col(j)));
  const bool all_nonconstant = std::all_of(cols.begin(), cols.end(), [](const UPoly& c) { return c.size() > 1; });
  if (all_nonconstant) {
    for (const RootCluster& c : cluster_roots(roots(cols.back()))) {
      const bool common = std::all_of(cols.begin(), cols.end(), [&](const UPoly& col) {
        return std::abs(horner(col, c.center)) <= scale * std::pow(1.0 + std::abs(c.center), double(col.size()));
      });
      if (common) return true;
    }
  }
  // factor involving w: the w-resultant vanishes identically
  if (num.deg_w() == 0 || den.deg_w() == 0) return false;
  const cplx probes[] = {{0.37, 0.61}, {-0.83, 0.29}, {0.55, -0.71}};
  for (cplx z : probes) {
    const UPoly a = num.w_coefficients(z), b = den.w_coefficients(z);
    const double norm = std::pow(a.norm(), double(b.size() - 1)) * std::pow(b.norm(), double(a.size() - 1));
    if (std::abs(resultant(a, b)) > 1e-10 * norm) return false;
  }
  return true;
}

/// Points where every f_j may vanish: zeros of the numerators, off the poles.
std::vector<CurvePoint> numerator_zeros(const WeierstrassData& W, const std::vector<cplx>& poles) {
  std::vector<CurvePoint> out;
  for (const auto& f : W.f) {
    const Poly2& n = f.numerator();
    if (n.is_zero() || (n.deg_z() == 0 && n.deg_w() == 0)) continue;
    for (const CurveZero& z : zeros_on_curve(W.curve, n)) {
      if (distance_to_set(z.point.z, poles) < 1e-6) continue;
      if (W.curve.distance_to_branch(z.point.z) < W.curve.clearance()) continue;
      out.push_back(lift(W.curve, z.point.z, z.point.w));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Unverified: return "unverified";
  }
  return "unverified";
}

bool ValidationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

const CheckResult& ValidationReport::operator[](std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(ErrorCode::InvalidArgument, "no check named " + std::string(name));
}

std::vector<CurvePoint> validation_samples(const WeierstrassData& W, int per_sheet) {
  const AlgebraicCurve& curve = W.curve;
  const std::vector<cplx> poles = finite_polar_z(W);
  const std::vector<cplx> special = special_z(W);
  const double radius = sample_radius(special);
  std::vector<CurvePoint> out;
  int accepted = 0;
  for (int k = 1; accepted < per_sheet && k < 64 * per_sheet; ++k) {
    const double u = radical_inverse(k, 2), v = radical_inverse(k, 3);
    const cplx z = radius * std::sqrt(u) * std::polar(1.0, 2.0 * kPi * v);
    if (distance_to_set(z, special) < 2.0 * kCircleRadius) continue;
    const std::size_t before = out.size();
    push_fiber(curve, z, out);
    if (out.size() > before) ++accepted;
  }
  for (cplx s : special)
    for (int k = 0; k < 64; ++k) {
      const cplx z = s + kCircleRadius * std::polar(1.0, 2.0 * kPi * k / 64.0);
      if (distance_to_set(z, poles) < 0.5 * kCircleRadius) continue;
      push_fiber(curve, z, out);
    }
  for (const CurvePoint& q : numerator_zeros(W, poles)) out.push_back(q);
  return out;
}

std::vector<CurvePoint> random_samples(const WeierstrassData& W, int count, std::uint64_t seed) {
  const std::vector<cplx> special = special_z(W);
  const double radius = sample_radius(special);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CurvePoint> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx z = radius * std::sqrt(unit(rng)) * std::polar(1.0, 2.0 * kPi * unit(rng));
    const double sheet = unit(rng);
    if (distance_to_set(z, special) < kCircleRadius) continue;
    if (W.curve.distance_to_branch(z) < 2.0 * W.curve.clearance()) continue;
    const auto fib = W.curve.fiber(z);
    const auto idx = std::min<std::size_t>(fib.size() - 1, static_cast<std::size_t>(sheet * fib.size()));
    out.push_back(lift(W.curve, z, fib[idx]));
  }
  return out;
}

double regularity_margin(const WeierstrassData& W, const std::vector<CurvePoint>& samples) {
  const bool hyper = W.curve.form() == CurveForm::Hyperelliptic;
  double worst = std::numeric_limits<double>::infinity();
  for (const CurvePoint& q : samples) {
    const Vec3c f = W.F(q);
    double s = f.squaredNorm();
    if (!std::isfinite(s)) continue;
    if (hyper) {
      // |dz/dt|^2 = 4 |z - b| in the chart z = b + t^2
      double nearest = std::numeric_limits<double>::infinity();
      for (cplx b : W.curve.branch_values()) nearest = std::min(nearest, std::abs(q.z - b));
      if (nearest < 5.0 * kCircleRadius) s *= 4.0 * nearest;
    }
    worst = std::min(worst, s);
  }
  return worst;
}

bool regularity_check(const WeierstrassData& W, const std::vector<CurvePoint>& samples) {
  return regularity_margin(W, samples) > kRegularityFloor;
}

std::vector<Cycle> period_cycles(const WeierstrassData& W) {
  const AlgebraicCurve& curve = W.curve;
  std::vector<Cycle> out = canonical_cycles(curve);
  const PolarSet ps = find_polar_set(W);
  std::vector<cplx> special = curve.branch_values();
  for (const CurvePoint& p : ps.points)
    if (!p.at_infinity) special.push_back(p.z);
  int index = 0;
  for (const CurvePoint& p : ps.points) {
    if (p.at_infinity) continue;
    double gap = std::numeric_limits<double>::infinity();
    for (cplx s : special)
      if (std::abs(s - p.z) > 10.0 * curve.clearance()) gap = std::min(gap, std::abs(s - p.z));
    const double r = std::min(0.5, 0.25 * gap);
    const bool at_branch = curve.distance_to_branch(p.z) < 10.0 * curve.clearance();
    constexpr int kSides = 64;
    const int turns = at_branch ? 2 : 1;
    Cycle c;
    c.id = "pole" + std::to_string(++index);
    for (int k = 0; k <= turns * kSides; ++k) c.path.vertices.push_back(p.z + r * std::polar(1.0, 2.0 * kPi * k / kSides));
    c.path.vertices.back() = c.path.vertices.front();
    if (at_branch) {
      const cplx z0 = c.path.vertices.front();
      c.path.start = lift(curve, z0, curve.fiber(z0).front());
    } else {
      SheetPath ray;
      ray.vertices = {p.z + 1e-3 * r, p.z + r};
      ray.start = lift(curve, ray.vertices.front(), p.w);
      c.path.start = continue_along(curve, ray);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Vec3> period_residual(const WeierstrassData& W, const std::vector<Cycle>& cycles) {
  std::vector<Vec3> out;
  const FormIntegrand h = [&](const CurvePoint& q) -> Eigen::VectorXcd { return W.F(q); };
  for (const Cycle& c : cycles) out.push_back(integrate_path(W.curve, c.path, h).real());
  return out;
}

ValidationReport validate(const WeierstrassData& W) {
  ValidationReport report;
  const AlgebraicCurve& curve = W.curve;
  const SurfaceSignature& sig = W.signature;
  const Poly2& p = curve.polynomial();

  report.checks.push_back(guarded("polynomial", [&] {
    CheckResult r{"polynomial", CheckStatus::Pass, 0.0, ""};
    const bool degrees = p.deg_w() == sig.nu + 1 && p.deg_z() == sig.nu + 2;
    r.residual = std::abs(p.deg_w() - (sig.nu + 1)) + std::abs(p.deg_z() - (sig.nu + 2));
    if (!degrees) {
      r.status = CheckStatus::Fail;
      r.detail = "Deg_z = " + std::to_string(p.deg_z()) + ", Deg_w = " + std::to_string(p.deg_w()) +
                 ", expected " + std::to_string(sig.nu + 2) + ", " + std::to_string(sig.nu + 1);
    } else if (irreducibility_warning(curve)) {
      r.status = CheckStatus::Fail;
      r.detail = "a sheet is a polynomial in z: the polynomial factors";
    } else {
      r.detail = "degrees match; irreducibility checked heuristically";
    }
    return r;
  }));

  report.checks.push_back(guarded("curve", [&] {
    CheckResult r{"curve", CheckStatus::Pass, 0.0, ""};
    const double at_origin = std::abs(p(cplx(0.0), cplx(0.0)));
    r.residual = at_origin;
    if (at_origin > curve.residual_tolerance(0.0, 0.0)) {
      r.status = CheckStatus::Fail;
      r.detail = "(0,0) is not on the curve";
      return r;
    }
    if (!is_normalized(curve)) {
      r.status = CheckStatus::Fail;
      r.detail = "z and w do not have a single common pole of orders nu+1, nu+2";
      return r;
    }
    if (!curve.genus()) {
      r.status = CheckStatus::Unverified;
      r.detail = "genus not computed for general curves";
    } else if (*curve.genus() != sig.nu) {
      r.status = CheckStatus::Fail;
      r.detail = "genus " + std::to_string(*curve.genus()) + " differs from nu";
    } else {
      r.detail = "genus " + std::to_string(sig.nu) + ", single pole at infinity, basepoint on curve";
    }
    return r;
  }));

  report.checks.push_back(guarded("coefficients", [&] {
    CheckResult r{"coefficients", CheckStatus::Pass, 0.0, "Deg_w <= nu, no common factors"};
    int worst = 0;
    for (const auto& f : W.f) worst = std::max({worst, f.numerator().deg_w(), f.denominator().deg_w()});
    r.residual = std::max(0, worst - sig.nu);
    if (worst > sig.nu) {
      r.status = CheckStatus::Fail;
      r.detail = "Deg_w " + std::to_string(worst) + " exceeds nu";
      return r;
    }
    for (int j = 0; j < 3; ++j)
      if (share_factor(W.f[j].numerator(), W.f[j].denominator())) {
        r.status = CheckStatus::Fail;
        r.detail = "numerator and denominator of f" + std::to_string(j + 1) + " share a factor";
      }
    return r;
  }));

  const std::vector<CurvePoint> samples = validation_samples(W);

  report.checks.push_back(guarded("conformality", [&] {
    CheckResult r{"conformality", CheckStatus::Pass, conformality_residual(W, samples), ""};
    const std::optional<int> alg = gauss_degree_algebraic(W);
    const std::array<int, 2> num = gauss_degree_numeric(W);
    r.detail = "deg g: algebraic " + (alg ? std::to_string(*alg) : std::string("n/a")) + ", preimage counts " +
               std::to_string(num[0]) + ", " + std::to_string(num[1]);
    if (r.residual > kConformalityTol) {
      r.status = CheckStatus::Fail;
      r.detail = "sum f_j^2 != 0; " + r.detail;
    } else if (num[0] != num[1] || (alg && *alg != num[0])) {
      r.status = CheckStatus::Fail;
      r.detail = "degree methods disagree; " + r.detail;
    } else if (num[0] != sig.k) {
      r.status = CheckStatus::Fail;
      r.detail = "deg g = " + std::to_string(num[0]) + " != k; " + r.detail;
    } else if (!alg) {
      r.status = CheckStatus::Unverified;
    }
    return r;
  }));

  report.checks.push_back(guarded("polar-set", [&] {
    CheckResult r{"polar-set", CheckStatus::Pass, 0.0, ""};
    const PolarSet ps = find_polar_set(W);
    for (const auto& q : ps.points) {
      if (q.at_infinity) continue;
      if (std::abs(q.z) < 1e-8 && std::abs(q.w) < 1e-8) {
        r.status = CheckStatus::Fail;
        r.detail = "(0,0) is a pole; ";
      }
    }
    r.residual = regularity_margin(W, samples);
    r.detail += std::to_string(ps.cardinality) + " poles, metric floor " + std::to_string(r.residual);
    if (ps.cardinality != sig.s) {
      r.status = CheckStatus::Fail;
      r.detail = "count " + std::to_string(ps.cardinality) + " != s; " + r.detail;
    }
    if (!(r.residual > kRegularityFloor)) {
      r.status = CheckStatus::Fail;
      r.detail = "metric vanishes; " + r.detail;
    }
    return r;
  }));

  report.checks.push_back(guarded("periods", [&] {
    CheckResult r{"periods", CheckStatus::Pass, 0.0, ""};
    const auto cycles = period_cycles(W);
    const auto res = period_residual(W, cycles);
    for (const Vec3& v : res) r.residual = std::max(r.residual, v.cwiseAbs().maxCoeff());
    r.detail = std::to_string(cycles.size()) + " cycles";
    if (r.residual > kPeriodTol) r.status = CheckStatus::Fail;
    return r;
  }));
  return report;
}

}  // namespace minsurf
