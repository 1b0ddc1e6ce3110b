#include <doctest.h>

#include <sstream>

#include "minsurf/gallery.hpp"
#include "minsurf/geometry.hpp"
#include "oracles.hpp"

using namespace minsurf;

namespace {

SheetPath path_from_origin(const WeierstrassData& W, std::vector<cplx> vertices) {
  SheetPath p;
  p.vertices = std::move(vertices);
  p.start = W.basepoint();
  return p;
}

CurvePoint on_rational(cplx z) { return lift(AlgebraicCurve::rational(), z, z * z); }

Cycle loop_around(const WeierstrassData& W, cplx centre, double r, bool clockwise = false) {
  Cycle c;
  c.id = "loop";
  const cplx start = centre + r;
  for (int k = 0; k <= 128; ++k)
    c.path.vertices.push_back(centre + r * std::polar(1.0, (clockwise ? -2.0 : 2.0) * kPi * k / 128));
  c.path.vertices.back() = c.path.vertices.front();
  c.path.start = continue_along(W.curve, path_from_origin(W, {0.0, start}));
  return c;
}

}  // namespace

TEST_CASE("evaluate at the basepoint and along a segment") {
  const WeierstrassData E = gallery::enneper();
  CHECK(evaluate(E, E.basepoint(), path_from_origin(E, {0.0})).position.norm() == 0.0);

  const ImmersionPoint x = evaluate(E, on_rational(1.0), path_from_origin(E, {0.0, 1.0}));
  CHECK((x.position - Vec3(1.0 / 3.0, 0.0, 0.5)).norm() < 1e-12);

  // Off-axis point against the antiderivative and a Simpson rule.
  const cplx z(0.8, -0.6);
  const ImmersionPoint y = evaluate(E, on_rational(z), path_from_origin(E, {0.0, z}));
  CHECK((y.position - oracle::enneper(z)).norm() < 1e-12);
  const cplx third = oracle::simpson([&](double t) { return z * (t * z); }, 0.0, 1.0);
  CHECK(std::abs(y.position.z() - third.real()) < 1e-12);
}

TEST_CASE("homotopic paths give the same catenoid point") {
  const WeierstrassData C = gallery::catenoid();
  const cplx z(-1.5, 1.2);
  const ImmersionPoint a = evaluate(C, on_rational(z), path_from_origin(C, {0.0, cplx(0.0, 1.2), z}));
  const ImmersionPoint b = evaluate(C, on_rational(z), path_from_origin(C, {0.0, cplx(-0.6, 0.3), cplx(-1.2, 2.0), z}));
  CHECK((a.position - b.position).norm() < 1e-8);
  CHECK(oracle::catenoid_residual(a.position) < 1e-10);
}

TEST_CASE("paths through a pole are rejected") {
  const WeierstrassData C = gallery::catenoid();
  try {
    evaluate(C, on_rational(-2.0), path_from_origin(C, {0.0, -2.0}));
    FAIL("expected PathThroughPole");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PathThroughPole);
  }
}

TEST_CASE("metric and curvature at the Enneper origin") {
  const MetricSample m = metric_at(gallery::enneper(), on_rational(0.0));
  CHECK(m.ds2_coeff == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m.ds2_from_gauss == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m.gauss_curv == doctest::Approx(-16.0).epsilon(1e-12));

  // K = -16 / (1 + |z|^2)^4 away from the origin.
  const cplx z(0.7, 0.4);
  const double r2 = std::norm(z);
  CHECK(metric_at(gallery::enneper(), on_rational(z)).gauss_curv ==
        doctest::Approx(-16.0 / std::pow(1.0 + r2, 4)).epsilon(1e-10));

  try {
    metric_at(gallery::catenoid(), on_rational(-1.0));
    FAIL("expected AtPole");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AtPole);
  }
}

TEST_CASE("total curvature") {
  for (const char* name : {"enneper", "catenoid"}) {
    CAPTURE(name);
    const TotalCurvature t = total_curvature(gallery::by_name(name));
    CHECK(t.exact == doctest::Approx(-4.0 * kPi));
    CHECK(std::abs(t.numeric + 4.0 * kPi) <= 1e-3 * 4.0 * kPi);
  }
  const TotalCurvature d = total_curvature(gallery::doubled_enneper());
  CHECK(d.exact == doctest::Approx(-8.0 * kPi));
  CHECK(std::abs(d.numeric + 8.0 * kPi) <= 1e-3 * 8.0 * kPi);

  // Larger truncation radii approach the limit monotonically.
  const WeierstrassData E = gallery::enneper();
  double previous = std::numeric_limits<double>::infinity();
  for (double R : {10.0, 40.0, 160.0}) {
    const double err = std::abs(total_curvature(E, R).numeric + 4.0 * kPi);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("flux") {
  const WeierstrassData C = gallery::catenoid();
  const Vec3 neck = flux(C, loop_around(C, -1.0, 0.5)).value;
  CHECK((neck - Vec3(0.0, 0.0, 2.0 * kPi)).norm() < 1e-10);
  const Vec3 reversed = flux(C, loop_around(C, -1.0, 0.5, true)).value;
  CHECK((reversed + neck).norm() < 1e-12);
  Cycle back = loop_around(C, -1.0, 0.5);
  back.path = minsurf::reversed(C.curve, back.path);
  CHECK((flux(C, back).value + neck).norm() == 0.0);

  const WeierstrassData E = gallery::enneper();
  CHECK(flux(E, loop_around(E, 0.5, 1.0)).value.norm() < 1e-12);

  // Homomorphism: the concatenated loop carries the sum.
  const Cycle once = loop_around(C, -1.0, 0.5);
  const Cycle twice = concatenate(C.curve, once, once);
  CHECK((flux(C, twice).value - 2.0 * neck).norm() < 1e-10);

  Cycle open = once;
  open.path.vertices.pop_back();
  CHECK_THROWS_AS(flux(C, open), Error);
}

TEST_CASE("catenoid mesh") {
  const WeierstrassData C = gallery::catenoid();
  MeshGrid g;
  g.center = -1.0;
  g.inner = 0.2;
  g.outer = 5.0;
  g.rows = g.cols = 64;
  const Mesh rows = mesh(C, g, PathTree::RowsFirst);
  const Mesh cols = mesh(C, g, PathTree::ColumnsFirst);
  REQUIRE(rows.vertices.size() == 4096);
  double worst = 0.0, spread = 0.0;
  for (std::size_t k = 0; k < rows.vertices.size(); ++k) {
    worst = std::max(worst, oracle::catenoid_residual(rows.vertices[k]));
    spread = std::max(spread, (rows.vertices[k] - cols.vertices[k]).norm());
  }
  CHECK(worst < 1e-10);
  CHECK(spread < 1e-8);
  // Periodic in the angle: every quad between consecutive rows is split.
  CHECK(rows.faces.size() == 2 * 63 * 64);
}

TEST_CASE("Enneper disc mesh and empty grids") {
  MeshGrid g;
  g.outer = 1.5;
  g.rows = g.cols = 32;
  const Mesh m = mesh(gallery::enneper(), g);
  CHECK(m.vertices.size() == 1024);
  for (const Vec3& v : m.vertices) CHECK(v.allFinite());

  MeshGrid empty;
  const Mesh none = mesh(gallery::enneper(), empty);
  CHECK(none.vertices.empty());
  CHECK(none.faces.empty());
}

TEST_CASE("grids must keep clear of poles") {
  // Node (2, 2) sits on the end at z = -1.
  MeshGrid g;
  g.kind = MeshGrid::Kind::Rect;
  g.lo = cplx(-2.0, -1.0);
  g.hi = cplx(0.0, 1.0);
  g.rows = g.cols = 5;
  CHECK_THROWS_AS(mesh(gallery::catenoid(), g), Error);
}

TEST_CASE("OBJ output") {
  Mesh m;
  m.vertices = {Vec3(0.0, 0.0, 0.0), Vec3(1.0 / 3.0, 2.0, -1e-10), Vec3(123456.789, 0.5, 1.0)};
  m.faces = {{0, 1, 2}};
  std::ostringstream out;
  write_obj(out, m);
  CHECK(out.str() == "v 0 0 0\nv 0.333333333 2 -1e-10\nv 123456.789 0.5 1\nf 1 2 3\n");
}

TEST_CASE("completeness along rays") {
  const WeierstrassData C = gallery::catenoid();
  const CompletenessReport toward_end = completeness_probe(C, path_from_origin(C, {0.0, -0.5, -1.0}), false);
  CHECK(toward_end.unbounded);
  // ds = |phi_3| (1/|g| + |g|) / 2 along the real ray to the end at -1.
  const double eps = std::ldexp(0.5, -10);
  const cplx exact = oracle::simpson(
      [](double t) {
        const double g = 1.0 - t;
        return cplx(0.5 / g * (1.0 / g + g));
      },
      0.0, 1.0 - eps, 200000);
  CHECK(toward_end.lengths.back() == doctest::Approx(exact.real()).epsilon(1e-6));

  const WeierstrassData E = gallery::enneper();
  CHECK(completeness_probe(E, path_from_origin(E, {0.0, 2.0}), true).unbounded);
  CHECK_FALSE(completeness_probe(E, path_from_origin(E, {0.0, 2.0}), false).unbounded);
}
