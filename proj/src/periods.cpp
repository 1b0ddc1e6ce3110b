#include "minsurf/periods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "minsurf/quadrature.hpp"

namespace minsurf {

namespace {

void require_hyperelliptic(const AlgebraicCurve& curve) {
  if (curve.form() != CurveForm::Hyperelliptic || curve.genus().value_or(0) < 1)
    throw Error(ErrorCode::Unsupported, "period data needs a hyperelliptic curve of genus at least one");
}

int genus_of(const AlgebraicCurve& curve) { return curve.genus().value_or(0); }

FormIntegrand raw_forms(int nu) {
  return [nu](const CurvePoint& q) { return HolomorphicBasis::raw(nu, q); };
}

bool near(cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)); }

std::optional<cplx> branch_at(const AlgebraicCurve& curve, cplx z) {
  for (cplx b : curve.branch_values())
    if (near(z, b)) return b;
  return std::nullopt;
}

double gap_from(const AlgebraicCurve& curve, cplx b) {
  double gap = std::numeric_limits<double>::infinity();
  for (cplx c : curve.branch_values())
    if (!near(c, b)) gap = std::min(gap, std::abs(c - b));
  return std::isfinite(gap) ? 0.25 * gap : 0.25;
}

int degree_of_q(const AlgebraicCurve& curve) { return static_cast<int>(curve.q().size()) - 1; }

// +1 or -1: which place over infinity the far point (z, w) lies under.
int infinity_sign(const AlgebraicCurve& curve, cplx z, cplx w) {
  const int d = degree_of_q(curve);
  const cplx ref = std::sqrt(curve.q()(d)) * std::pow(z, d / 2);
  return std::abs(w - ref) <= std::abs(w + ref) ? 1 : -1;
}

// Integral of the raw forms from (b0, 0) to P, b0 the first branch value. The
// straight route may end on the sheet of iota(P); the involution negates the
// forms and fixes b0, so the sign is corrected afterwards.
Eigen::VectorXcd from_base(const AlgebraicCurve& curve, const CurvePoint& P) {
  const int nu = genus_of(curve);
  const FormIntegrand h = raw_forms(nu);
  const cplx b0 = curve.branch_values().front();
  if (!P.at_infinity && near(P.z, b0)) return Eigen::VectorXcd::Zero(nu);
  // Inside a branch clearance: reach the branch point, then leave it in its chart.
  if (!P.at_infinity && !branch_at(curve, P.z) && curve.distance_to_branch(P.z) < 4.0 * curve.clearance()) {
    cplx b = curve.branch_values().front();
    for (cplx c : curve.branch_values())
      if (std::abs(c - P.z) < std::abs(b - P.z)) b = c;
    const Eigen::VectorXcd to_b = near(b, b0) ? Eigen::VectorXcd::Zero(nu) : from_base(curve, {b, 0.0, 0.0, false});
    return to_b + integrate_from_branch(curve, b, P, h);
  }

  double far = 1.0;
  for (cplx b : curve.branch_values()) far = std::max(far, std::abs(b));
  const cplx target = P.at_infinity ? cplx(2.0 * far + 1.0, 0.0) : P.z;

  const cplx dir = (target - b0) / std::abs(target - b0);
  const cplx z1 = b0 + dir * std::min(gap_from(curve, b0), 0.5 * std::abs(target - b0));
  const CurvePoint s1 = lift(curve, z1, curve.fiber(z1).front());
  Eigen::VectorXcd total = integrate_from_branch(curve, b0, s1, h);

  const auto end_branch = P.at_infinity ? std::nullopt : branch_at(curve, P.z);
  SheetPath path;
  path.start = s1;
  if (end_branch) {
    const cplx back = (z1 - *end_branch) / std::abs(z1 - *end_branch);
    const cplx z2 = *end_branch + back * std::min(gap_from(curve, *end_branch), 0.5 * std::abs(z1 - *end_branch));
    path.vertices = {z1, z2};
    const CurvePoint e2 = continue_along(curve, path);
    total += integrate_path(curve, path, h);
    total -= integrate_from_branch(curve, *end_branch, e2, h);
    return total;
  }

  path.vertices = {z1, target};
  const CurvePoint end = continue_along(curve, path);
  total += integrate_path(curve, path, h);
  if (!P.at_infinity) {
    if (std::abs(end.w - P.w) > std::abs(end.w + P.w)) total = -total;
    return total;
  }

  // Out to infinity along z = target / s^m, m = 2 when infinity is a branch point.
  const int m = curve.infinity_is_branch() ? 2 : 1;
  const int d = degree_of_q(curve);
  const ParamIntegrand tail = [&](double s) -> Eigen::VectorXcd {
    if (s == 0.0) s = 1e-300;
    const cplx z = target / std::pow(s, m);
    const CurvePoint x = s == 1.0 ? end : lift(curve, z, end.w * std::pow(s, -0.5 * m * d));
    const Eigen::VectorXcd v = h(x) * (double(m) * target * std::pow(s, -m - 1));
    return v.allFinite() ? v : Eigen::VectorXcd::Zero(nu);
  };
  total += integrate_adaptive(tail, 0.0, 1.0);
  if (!curve.infinity_is_branch() && infinity_sign(curve, end.z, end.w) != (P.w.real() >= 0.0 ? 1 : -1))
    total = -total;
  return total;
}

}  // namespace

Eigen::VectorXcd HolomorphicBasis::raw(int nu, const CurvePoint& q) {
  Eigen::VectorXcd v(nu);
  cplx zi = 1.0;
  for (int i = 0; i < nu; ++i, zi *= q.z) v(i) = zi / q.w;
  return v;
}

Eigen::VectorXcd HolomorphicBasis::operator()(const CurvePoint& q) const { return normalization * raw(nu, q); }

PeriodData period_matrix(const AlgebraicCurve& curve, int refinement) {
  require_hyperelliptic(curve);
  const int nu = genus_of(curve);
  PeriodData out;
  out.cycles = canonical_cycles(curve);
  out.a_raw.resize(nu, nu);
  out.b_raw.resize(nu, nu);
  const FormIntegrand h = raw_forms(nu);
  for (int k = 0; k < 2 * nu; ++k) {
    const SheetPath& path = out.cycles[k].path;
    const Eigen::VectorXcd p =
        refinement < 0 ? integrate_path(curve, path, h) : apply_rule(build_path_rule(curve, path, refinement), h);
    (k < nu ? out.a_raw.col(k) : out.b_raw.col(k - nu)) = p;
  }
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(out.a_raw).singularValues();
  if (!(s(nu - 1) > 0.0) || s(0) / s(nu - 1) > 1e10)
    throw Error(ErrorCode::SingularAPeriods, "a-period matrix is ill-conditioned");
  out.basis.nu = nu;
  out.basis.normalization = out.a_raw.inverse();
  out.matrix.pi = out.basis.normalization * out.b_raw;
  return out;
}

double symmetry_defect(const PeriodMatrix& P) { return (P.pi - P.pi.transpose()).cwiseAbs().maxCoeff(); }

double min_imaginary_eigenvalue(const PeriodMatrix& P) {
  const Eigen::MatrixXd im = 0.5 * (P.pi.imag() + P.pi.imag().transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff();
}

JacobianLattice::JacobianLattice(const PeriodMatrix& P) {
  const auto nu = P.pi.rows();
  gen_.resize(nu, 2 * nu);
  gen_ << Eigen::MatrixXcd::Identity(nu, nu), P.pi;
  real_.resize(2 * nu, 2 * nu);
  real_ << gen_.real(), gen_.imag();
  lu_.compute(real_);
}

Eigen::VectorXd JacobianLattice::coordinates(const Eigen::VectorXcd& v) const {
  Eigen::VectorXd rhs(2 * v.size());
  rhs << v.real(), v.imag();
  return lu_.solve(rhs);
}

Eigen::VectorXcd JacobianLattice::reduce(const Eigen::VectorXcd& v) const {
  const Eigen::VectorXd t = coordinates(v);
  const Eigen::VectorXd frac = t - t.array().floor().matrix();
  return gen_ * frac.cast<cplx>();
}

double JacobianLattice::distance(const Eigen::VectorXcd& v) const {
  const Eigen::VectorXd t = coordinates(v);
  const Eigen::VectorXd base = t.array().round().matrix();
  const auto n = t.size();
  Eigen::VectorXi offset = Eigen::VectorXi::Constant(n, -3);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    best = std::min(best, (real_ * (t - base - offset.cast<double>())).norm());
    Eigen::Index i = 0;
    while (i < n && offset(i) == 3) offset(i++) = -3;
    if (i == n) break;
    ++offset(i);
  }
  return best;
}

int Divisor::degree() const {
  int d = 0;
  for (const auto& e : entries) d += e.second;
  return d;
}

Divisor operator+(Divisor a, const Divisor& b) {
  a.entries.insert(a.entries.end(), b.entries.begin(), b.entries.end());
  return a;
}

Divisor operator-(Divisor a, Divisor b) {
  for (auto& e : b.entries) e.second = -e.second;
  return a + b;
}

Divisor divisor_of(const AlgebraicCurve& curve, const Poly2& h) {
  require_hyperelliptic(curve);
  Divisor D;
  int zeros = 0;
  for (const CurveZero& z : zeros_on_curve(curve, h)) {
    D.entries.push_back({z.point, z.multiplicity});
    zeros += z.multiplicity;
  }
  if (zeros == 0) return D;
  const cplx inf(std::numeric_limits<double>::infinity(), 0.0);
  if (curve.infinity_is_branch()) {
    D.entries.push_back({CurvePoint{inf, 1.0, 0.0, true}, -zeros});
    return D;
  }
  if (h.deg_w() > 0) throw Error(ErrorCode::Unsupported, "pole split over two places at infinity needs h in z only");
  D.entries.push_back({CurvePoint{inf, 1.0, 0.0, true}, -zeros / 2});
  D.entries.push_back({CurvePoint{inf, -1.0, 0.0, true}, -zeros / 2});
  return D;
}

AbelImage abel_map(const AlgebraicCurve& curve, const PeriodData& periods, const CurvePoint& E, const Divisor& D) {
  require_hyperelliptic(curve);
  const Eigen::VectorXcd origin = from_base(curve, E);
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(periods.basis.nu);
  for (const auto& [Q, n] : D.entries) sum += double(n) * (from_base(curve, Q) - origin);
  AbelImage out;
  out.raw = periods.basis.normalization * sum;
  out.reduced = JacobianLattice(periods.matrix).reduce(out.raw);
  return out;
}

PrincipalTest is_principal(const AlgebraicCurve& curve, const PeriodData& periods, const Divisor& D) {
  PrincipalTest out;
  out.degree = D.degree();
  const CurvePoint E{curve.branch_values().front(), 0.0, 0.0, false};
  const AbelImage phi = abel_map(curve, periods, E, D);
  out.lattice_distance = JacobianLattice(periods.matrix).distance(phi.raw);
  out.principal = out.degree == 0 && out.lattice_distance < 1e-6;
  return out;
}

std::vector<CurvePoint> weierstrass_points(const AlgebraicCurve& curve) {
  if (curve.form() != CurveForm::Hyperelliptic)
    throw Error(ErrorCode::Unsupported, "Weierstrass points are computed for hyperelliptic curves only");
  const int nu = genus_of(curve);
  std::vector<CurvePoint> out;
  if (nu < 2) return out;
  for (cplx b : curve.branch_values()) out.push_back({b, 0.0, 0.0, false});
  if (curve.infinity_is_branch())
    out.push_back({cplx(std::numeric_limits<double>::infinity(), 0.0), 1.0, 0.0, true});
  const int count = static_cast<int>(out.size());
  if (count < 2 * nu - 2 || count > nu * (nu * nu - 1))
    throw Error(ErrorCode::CountMismatch, "Weierstrass point count outside its bounds");
  return out;
}

PeriodMap::PeriodMap(const PeriodAnsatz& ansatz, int refinement)
    : mode_(ansatz.mode), basis_size_(ansatz.basis.size()) {
  for (const Cycle& c : ansatz.cycles) {
    const PathRule rule = build_path_rule(ansatz.curve, c.path, refinement);
    std::vector<Node> nodes;
    nodes.reserve(rule.nodes.size());
    for (const PathNode& pn : rule.nodes) {
      cplx kappa = ansatz.kappa(pn.point);
      if (mode_ == AnsatzMode::Exponential) kappa *= std::exp(ansatz.offset(pn.point));
      Node n{pn.weight, kappa, Eigen::VectorXcd(basis_size_)};
      for (std::size_t j = 0; j < basis_size_; ++j) n.f(j) = ansatz.basis[j](pn.point);
      nodes.push_back(std::move(n));
    }
    nodes_.push_back(std::move(nodes));
  }
}

Eigen::VectorXcd PeriodMap::operator()(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd out(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    cplx sum = 0.0;
    for (const Node& n : nodes_[k]) {
      const cplx perturbation = (n.f.array() * x.array()).sum();
      sum += n.weight * (mode_ == AnsatzMode::Linear ? n.kappa + perturbation : std::exp(perturbation) * n.kappa);
    }
    out(k) = sum;
  }
  return out;
}

namespace {

Eigen::VectorXcd as_complex(const Eigen::VectorXd& u) {
  Eigen::VectorXcd x(u.size() / 2);
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = {u(2 * j), u(2 * j + 1)};
  return x;
}

void append(std::vector<double>& r, cplx value, const PeriodTarget& t) {
  const cplx d = value - t.value;
  if (t.kind != TargetKind::ImagPart) r.push_back(d.real());
  if (t.kind != TargetKind::RealPart) r.push_back(d.imag());
}

RationalOnCurve combine(const PeriodAnsatz& family, const Eigen::VectorXcd& x) {
  const Poly2& den = family.kappa.denominator();
  bool shared = true;
  for (const auto& f : family.basis) shared = shared && coefficient_distance(f.denominator(), den) == 0.0;
  if (shared) {
    Poly2 num = family.kappa.numerator();
    for (std::size_t j = 0; j < family.basis.size(); ++j) num = num + family.basis[j].numerator() * x(j);
    return {num, den};
  }
  Poly2 common = den;
  for (const auto& f : family.basis) common = common * f.denominator();
  Poly2 num = family.kappa.numerator();
  for (const auto& f : family.basis) num = num * f.denominator();
  for (std::size_t j = 0; j < family.basis.size(); ++j) {
    Poly2 term = family.basis[j].numerator() * den * x(j);
    for (std::size_t i = 0; i < family.basis.size(); ++i)
      if (i != j) term = term * family.basis[i].denominator();
    num = num + term;
  }
  return {num, common};
}

}  // namespace

PeriodSolution solve_periods(const PeriodAnsatz& ansatz, const std::vector<PeriodTarget>& targets,
                             const NewtonOptions& opt, int refinement) {
  if (targets.size() != ansatz.cycles.size())
    throw Error(ErrorCode::InvalidArgument, "one target per ansatz cycle is required");
  const PeriodMap map(ansatz, refinement);
  const ResidualMap F = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXcd p = map(as_complex(u));
    std::vector<double> r;
    for (std::size_t k = 0; k < targets.size(); ++k) append(r, p(k), targets[k]);
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(r.data(), Eigen::Index(r.size())));
  };
  PeriodSolution out;
  out.newton = newton_solve(F, Eigen::VectorXd::Zero(2 * map.unknowns()), opt);
  out.x = as_complex(out.newton.x);
  return out;
}

FluxPrescription prescribe_flux(const WeierstrassData& W, const PeriodAnsatz& family, const std::vector<Vec3>& flux,
                                const NewtonOptions& opt, int refinement) {
  if (family.mode != AnsatzMode::Linear)
    throw Error(ErrorCode::Unsupported, "flux prescription needs a linear family to stay rational");
  if (flux.size() != family.cycles.size())
    throw Error(ErrorCode::InvalidArgument, "one flux vector per family cycle is required");
  const RationalOnCurve g = gauss_map(W);
  const std::size_t m = family.basis.size();

  // Per cycle and node: weight * (1/2 (1/g - g), i/2 (1/g + g), 1), kappa, f_j.
  struct Node {
    Vec3c frame;
    cplx kappa;
    Eigen::VectorXcd f;
  };
  std::vector<std::vector<Node>> nodes;
  for (const Cycle& c : family.cycles) {
    const PathRule rule = build_path_rule(W.curve, c.path, refinement);
    std::vector<Node> ns;
    for (const PathNode& pn : rule.nodes) {
      const cplx gv = g(pn.point);
      Node n{pn.weight * Vec3c(0.5 * (1.0 / gv - gv), 0.5 * kI * (1.0 / gv + gv), 1.0), family.kappa(pn.point),
             Eigen::VectorXcd(m)};
      for (std::size_t j = 0; j < m; ++j) n.f(j) = family.basis[j](pn.point);
      ns.push_back(std::move(n));
    }
    nodes.push_back(std::move(ns));
  }
  const ResidualMap F = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXcd x = as_complex(u);
    Eigen::VectorXd r(6 * nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      Vec3c p = Vec3c::Zero();
      for (const Node& n : nodes[k]) p += n.frame * (n.kappa + (n.f.array() * x.array()).sum());
      r.segment<3>(6 * k) = p.real();
      r.segment<3>(6 * k + 3) = p.imag() - flux[k];
    }
    return r;
  };

  NewtonResult newton = newton_solve(F, Eigen::VectorXd::Zero(2 * Eigen::Index(m)), opt);
  const Eigen::VectorXcd x = as_complex(newton.x);
  WeierstrassData data =
      newton.iterations == 0 ? W : from_gauss_height(W.signature, W.curve, g, combine(family, x), W.translation);
  ValidationReport report = validate(data);
  const bool regression = !report.passed();
  return {std::move(data), x, std::move(newton), std::move(report), regression};
}

}  // namespace minsurf
