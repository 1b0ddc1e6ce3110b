// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "minsurf/exotica.hpp"
#include "minsurf/gallery.hpp"
#include "minsurf/geometry.hpp"
#include "minsurf/parabolic.hpp"
#include "minsurf/periods.hpp"
#include "oracles.hpp"

using namespace minsurf;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Cycle circle(const WeierstrassData& W, cplx centre, double r) {
  Cycle c;
  c.id = "loop";
  for (int k = 0; k <= 128; ++k) c.path.vertices.push_back(centre + r * std::polar(1.0, 2.0 * kPi * k / 128));
  c.path.vertices.back() = c.path.vertices.front();
  SheetPath approach;
  approach.vertices = {0.0, c.path.vertices.front()};
  approach.start = W.basepoint();
  c.path.start = continue_along(W.curve, approach);
  return c;
}

AlgebraicCurve lemniscatic() { return AlgebraicCurve::hyperelliptic((UPoly(4) << 0, -1, 0, 1).finished()); }

Outcome conformality() {
  double worst = 0.0, slowest = 0.0;
  for (const std::string& name : gallery::names()) {
    const auto t0 = std::chrono::steady_clock::now();
    const WeierstrassData W = gallery::by_name(name);
    worst = std::max(worst, conformality_residual(W, random_samples(W, 1000, 17)));
    slowest = std::max(slowest, seconds_since(t0));
  }
  return {worst <= 1e-12 && slowest < 1.0, fmt("max residual %.2e, slowest %.3f s", worst, slowest)};
}

Outcome catenoid_flux() {
  const WeierstrassData C = gallery::catenoid();
  const Cycle neck = circle(C, -1.0, 0.5);
  const Vec3 f = flux(C, neck).value;
  Cycle back = neck;
  back.path = reversed(C.curve, neck.path);
  const Vec3 b = flux(C, back).value;
  const double err = (f - Vec3(0.0, 0.0, 2.0 * kPi)).norm();
  return {err <= 1e-8 && (f + b).norm() == 0.0, fmt("|flux - (0,0,2pi)| = %.2e, |flux + reversed| = %.1e", err, (f + b).norm())};
}

Outcome curvature() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const char* name : {"enneper", "catenoid"}) {
    const WeierstrassData W = gallery::by_name(name);
    const TotalCurvature t = total_curvature(W);
    const std::optional<int> algebraic = gauss_degree_algebraic(W);
    const std::array<int, 2> counted = gauss_degree_numeric(W);
    const bool degrees = algebraic && *algebraic == 1 && counted[0] == 1 && counted[1] == 1;
    const double err = std::abs(t.numeric + 4.0 * kPi);
    ok = ok && degrees && err <= 1e-3 * 4.0 * kPi && std::abs(t.exact + 4.0 * kPi) < 1e-12;
    detail += fmt("%s %.6f (deg %d/%d/%d) ", name, t.numeric, algebraic.value_or(-1), counted[0], counted[1]);
  }
  const double elapsed = seconds_since(t0);
  return {ok && elapsed < 30.0, detail + fmt("in %.2f s", elapsed)};
}

Outcome metric_consistency() {
  double worst = 0.0, max_k = -std::numeric_limits<double>::infinity();
  for (const std::string& name : gallery::names()) {
    const WeierstrassData W = gallery::by_name(name);
    for (const CurvePoint& q : random_samples(W, 1000, 23)) {
      const MetricSample m = metric_at(W, q);
      worst = std::max(worst, std::abs(m.ds2_coeff - m.ds2_from_gauss) / m.ds2_coeff);
      max_k = std::max(max_k, m.gauss_curv);
    }
  }
  return {worst <= 1e-10 && max_k <= 0.0, fmt("max relative ds2 gap %.2e, max K %.2e", worst, max_k)};
}

Outcome period_matrix_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const PeriodData P = period_matrix(lemniscatic());
  const cplx tau = P.matrix.pi(0, 0);
  const double d = oracle::modulus_distance(tau, oracle::elliptic_tau(1.0, 0.0, -1.0));
  const double sym = symmetry_defect(P.matrix), eig = min_imaginary_eigenvalue(P.matrix);
  const double elapsed = seconds_since(t0);
  return {d <= 1e-6 && std::abs(tau - cplx(0.0, 1.0)) <= 1e-6 && sym <= 1e-7 && eig > 0.0 && elapsed < 10.0,
          fmt("tau = %.12f%+.12fi, AGM distance %.1e, min Im eigenvalue %.4f, %.3f s", tau.real(), tau.imag(), d, eig,
              elapsed)};
}

Outcome abel() {
  const AlgebraicCurve C = lemniscatic();
  const PeriodData P = period_matrix(C);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  auto random = [&] { return cplx(U(rng), U(rng)); };
  double worst_principal = 0.0, best_other = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    Poly2 h = Poly2::constant(1.0);
    for (int k = 0; k < 1 + trial % 2; ++k) h = h * (Poly2::monomial(0, 1) - Poly2::in_z({random(), random()}));
    const Divisor D = divisor_of(C, h) - divisor_of(C, Poly2::in_z({random(), 1.0}));
    const PrincipalTest yes = is_principal(C, P, D);
    Divisor moved = D;
    const cplx z = random();
    moved.entries.front().first = lift(C, z, C.fiber(z).front());
    const PrincipalTest no = is_principal(C, P, moved);
    ok = ok && yes.principal && yes.degree == 0 && !no.principal && no.degree == 0;
    worst_principal = std::max(worst_principal, yes.lattice_distance);
    best_other = std::min(best_other, no.lattice_distance);
  }
  ok = ok && worst_principal < 1e-6 && best_other > 1e-2;
  return {ok, fmt("principal max distance %.2e, perturbed min distance %.3f", worst_principal, best_other)};
}

Outcome period_solver() {
  const AlgebraicCurve C = lemniscatic();
  PeriodAnsatz A;
  A.curve = C;
  A.mode = AnsatzMode::Exponential;
  A.kappa = RationalOnCurve(Poly2::constant(1.0), Poly2::monomial(0, 1));
  A.basis = {RationalOnCurve::polynomial(Poly2::in_z({0.0, 1.0})),
             RationalOnCurve::polynomial(Poly2::in_z({0.0, 0.0, 1.0}))};
  A.cycles = period_matrix(C).cycles;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> N(0.0, 0.05);
  const cplx g1 = cplx(-1.52504, 0.976697) + cplx(N(rng), N(rng));
  const cplx g2 = cplx(0.181416, -1.56661) + cplx(N(rng), N(rng));
  A.offset = RationalOnCurve::polynomial(Poly2::in_z({0.0, g1, g2}));
  const std::vector<PeriodTarget> targets(2, PeriodTarget{0.0, TargetKind::RealPart});
  const PeriodSolution coarse = solve_periods(A, targets, {}, 1);
  const PeriodSolution fine = solve_periods(A, targets, {}, 2);
  const double shift = (coarse.x - fine.x).norm();
  return {coarse.newton.residual < 1e-10 && coarse.newton.iterations <= 25 && shift < 1e-8,
          fmt("residual %.1e after %d iterations, refinement shift %.1e", coarse.newton.residual,
              coarse.newton.iterations, shift)};
}

Outcome degree_formula() {
  struct Case {
    AlgebraicCurve curve;
    int nu;
    std::function<std::vector<cplx>(cplx)> fiber;
  };
  const cplx w3 = std::polar(1.0, 2.0 * kPi / 3);
  const std::vector<Case> cases = {
      {lemniscatic(), 1,
       [](cplx z) {
         const cplx w = std::sqrt(z * z * z - z);
         return std::vector<cplx>{w, -w};
       }},
      {AlgebraicCurve::general(Poly2::monomial(0, 3) - Poly2::in_z({0.5, -1.0, 0.0, 0.0, 1.0})), 2,
       [w3](cplx z) {
         const cplx w = std::pow(z * z * z * z - z + 0.5, 1.0 / 3.0);
         return std::vector<cplx>{w, w * w3, w * w3 * w3};
       }},
  };
  const cplx c(0.7, 0.3);
  int checked = 0;
  bool ok = true;
  for (const Case& k : cases) {
    ok = ok && is_normalized(k.curve);
    for (int l = 0; l <= 3; ++l)
      for (int j = 0; j <= 3; ++j) {
        const int formula = degree_of_projection(k.curve, l, j);
        // Preimages of c under z^l w^j.
        const int counted =
            l + j == 0 ? 0
                       : oracle::zeros_by_winding(
                             k.fiber, [&](cplx z, cplx w) { return std::pow(z, l) * std::pow(w, j) - c; }, 40.0);
        ok = ok && formula == l * (k.nu + 1) + j * (k.nu + 2) && formula == counted;
        ++checked;
      }
  }
  return {ok, fmt("%d (l, j, nu) cases agree with preimage counts", checked)};
}

Outcome continuity() {
  const WeierstrassData C = gallery::catenoid();
  MeshGrid g;
  g.center = -1.0;
  g.inner = 0.5;
  g.outer = 2.0;
  g.rows = g.cols = 24;
  const Mesh base = mesh(C, g);
  double previous = std::numeric_limits<double>::infinity(), worst_ratio = 0.0;
  bool ok = true;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    // Every nonzero numerator coefficient moves by delta in a random direction.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    WeierstrassData W = C;
    for (auto& f : W.f) {
      Poly2::Coeffs a = f.numerator().coeffs();
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
          if (a(i, j) != 0.0) a(i, j) += delta * std::polar(1.0, angle(rng));
      f = RationalOnCurve(Poly2(a), f.denominator());
    }
    const Mesh m = mesh(W, g);
    double sup = 0.0;
    for (std::size_t k = 0; k < m.vertices.size(); ++k) sup = std::max(sup, (m.vertices[k] - base.vertices[k]).norm());
    ok = ok && sup < previous && sup <= 10.0 * delta;
    previous = sup;
    worst_ratio = std::max(worst_ratio, sup / delta);
  }
  return {ok, fmt("sup distance / delta at most %.3f", worst_ratio)};
}

Outcome harmonic() {
  const double e = std::exp(1.0);
  const AnnulusDomain A{1.0, e};
  auto error_at = [&](int m, int* nodes) {
    const GridDomain G = annulus_grid(A, std::sqrt(e) / m);
    const int c = (G.nx - 1) / 2;
    if (nodes) *nodes = G.nx;
    return std::abs(harmonic_measure_grid(G, c + m, c, {kInnerLabel}) - 0.5);
  };
  int nodes = 0;
  const double big = error_at(77, &nodes);
  const double e20 = error_at(20, nullptr), e40 = error_at(40, nullptr), e80 = error_at(80, nullptr);
  const double r1 = e20 / e40, r2 = e40 / e80;

  std::vector<AnnulusDomain> stages;
  for (int j = 1; j <= 20; ++j) stages.push_back({1.0, std::exp(double(j))});
  const ExhaustionReport rep = exhaustion_check(stages, 2.0);
  bool bound = rep.verdict == ExhaustionVerdict::ParabolicConsistent;
  for (const auto& s : rep.stages) bound = bound && s.measure > double(s.j - 1) / s.j;

  const bool ok = nodes == 257 && big < 1e-3 && r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5 && bound;
  return {ok, fmt("%dx%d error %.2e, ratios %.3f %.3f, exhaustion %s", nodes, nodes, big, r1, r2,
                  bound ? "holds" : "fails")};
}

Outcome density() {
  const EndFrame F = EndFrame::from_vectors(Vec3(1.0, 0.0, 0.0), Vec3(1.0, 1.0, 0.0), Vec3(1.0, 2.0, 3.0));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  std::int64_t worst = 0;
  double gap = 0.0;
  bool ok = true;
  for (int k = 0; k < 100; ++k) {
    const Vec3 u(U(rng), U(rng), U(rng));
    const DensityCertificate c = density_query(u, 1e-2, F);
    const double check =
        oracle::distance_to_holed_plane(u, F.direction(c.found.i), c.found.r_n.value(), double(c.found.n));
    ok = ok && c.distance < 1e-2 && check < 1e-2 && c.found.r_n == rational_enumeration(c.found.n);
    gap = std::max(gap, std::abs(check - c.distance));
    worst = std::max(worst, c.found.n);
  }
  return {ok && gap <= 1e-14, fmt("100 certificates, largest index %lld, recheck gap %.1e", (long long)worst, gap)};
}

Outcome symmetry() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N;
  auto unit = [&] { return Vec3(N(rng), N(rng), N(rng)).normalized(); };
  int frames = 0;
  bool ok = true;
  while (frames < 50) {
    const EndFrame F = EndFrame::from_vectors(unit(), unit(), unit());
    if (!general_position_check(F)) continue;
    ++frames;
    const auto s = symmetry_scan(F);
    ok = ok && s.size() == 2;
    for (const auto& g : s)
      ok = ok && (g.map.isApprox(Eigen::Matrix3d::Identity(), 1e-10) ||
                  g.map.isApprox(-Eigen::Matrix3d::Identity(), 1e-10));
  }
  const std::size_t cube = symmetry_scan(EndFrame{}).size();
  return {ok && cube == 48, fmt("%d general frames give {Id, -Id}; orthonormal frame gives %zu", frames, cube)};
}

Outcome path_independence() {
  std::vector<std::pair<std::string, MeshGrid>> grids;
  MeshGrid disc;
  disc.outer = 1.5;
  disc.rows = disc.cols = 32;
  MeshGrid ring;
  ring.center = -1.0;
  ring.inner = 0.2;
  ring.outer = 5.0;
  ring.rows = ring.cols = 64;
  MeshGrid rect;
  rect.kind = MeshGrid::Kind::Rect;
  rect.lo = cplx(-1.5, -1.5);
  rect.hi = cplx(1.5, 1.5);
  rect.rows = rect.cols = 32;
  grids = {{"enneper", disc}, {"enneper", rect}, {"catenoid", ring}, {"doubled-enneper", disc}, {"doubled-enneper", rect}};
  double spread = 0.0;
  std::size_t vertices = 0;
  for (const auto& [name, g] : grids) {
    const WeierstrassData W = gallery::by_name(name);
    const Mesh a = mesh(W, g, PathTree::RowsFirst);
    const Mesh b = mesh(W, g, PathTree::ColumnsFirst);
    for (std::size_t k = 0; k < a.vertices.size(); ++k) spread = std::max(spread, (a.vertices[k] - b.vertices[k]).norm());
    vertices += a.vertices.size();
  }
  return {spread <= 1e-8, fmt("%zu vertices, max tree disagreement %.2e", vertices, spread)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"conformality", conformality},
      {"catenoid flux", catenoid_flux},
      {"total curvature", curvature},
      {"metric consistency", metric_consistency},
      {"period matrix", period_matrix_check},
      {"principal divisors", abel},
      {"period solver", period_solver},
      {"degree formula", degree_formula},
      {"continuity", continuity},
      {"harmonic measure", harmonic},
      {"space filling", density},
      {"symmetry exclusion", symmetry},
      {"path independence", path_independence},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    failed += !r.ok;
    std::printf("%s %2zu %-20s %s\n", r.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, r.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
