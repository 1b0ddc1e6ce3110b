#include <doctest.h>

#include "minsurf/gallery.hpp"
#include "minsurf/wdata.hpp"

using namespace minsurf;

namespace {

Poly2 zp(std::vector<cplx> c) { return Poly2::in_z(std::move(c)); }

/// f = (1/2 (z^-2 - 1), i/2 (z^-2 + 1), 1/z): ends at 0 and infinity.
WeierstrassData centred_catenoid() {
  const Poly2 z2 = zp({0.0, 0.0, 2.0});
  return {{0, 1, 2},
          AlgebraicCurve::rational(),
          {RationalOnCurve(zp({1.0, 0.0, -1.0}), z2), RationalOnCurve(zp({kI, 0.0, kI}), z2),
           RationalOnCurve(zp({1.0}), zp({0.0, 1.0}))},
          Vec3::Zero()};
}

Cycle unit_loop(const AlgebraicCurve& C) {
  Cycle c;
  c.id = "unit";
  for (int k = 0; k <= 128; ++k) c.path.vertices.push_back(std::polar(1.0, 2.0 * kPi * k / 128));
  c.path.vertices.back() = c.path.vertices.front();
  c.path.start = lift(C, 1.0, 1.0);
  return c;
}

}  // namespace

TEST_CASE("Gauss map of the model surfaces is z") {
  for (const WeierstrassData& W : {gallery::enneper(), centred_catenoid()}) {
    const RationalOnCurve g = gauss_map(W);
    for (cplx z : {cplx(0.3, 0.4), cplx(-1.2, 0.7), cplx(2.0, -1.0)}) {
      const CurvePoint q = lift(W.curve, z, z * z);
      CHECK(std::abs(g(q) - z) < 1e-13);
    }
  }
  const RationalOnCurve g_cat = gauss_map(gallery::catenoid());
  CHECK(std::abs(g_cat(lift(AlgebraicCurve::rational(), 0.5, 0.25)) - 1.5) < 1e-13);
}

TEST_CASE("Gauss map vanishes with phi_3") {
  WeierstrassData W = gallery::enneper();
  W.f[2] = RationalOnCurve();
  CHECK(std::abs(gauss_map(W)(lift(W.curve, 0.7, 0.49))) == 0.0);

  W.f[0] = RationalOnCurve::polynomial(Poly2::constant(1.0));
  W.f[1] = RationalOnCurve::polynomial(Poly2::constant(-kI));
  try {
    gauss_map(W);
    FAIL("expected DegenerateGauss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGauss);
  }
}

TEST_CASE("conformality residual") {
  const WeierstrassData E = gallery::enneper();
  CHECK(conformality_residual(E, random_samples(E, 1000, 3)) <= 1e-12);
  WeierstrassData bent = E;
  bent.f[2] = RationalOnCurve::polynomial(zp({0.1, 1.0}));
  CHECK(conformality_residual(bent, random_samples(bent, 16, 3)) >= 0.01);
}

TEST_CASE("polar sets") {
  CHECK(polar_set(centred_catenoid()).cardinality == 2);
  const PolarSet ps = polar_set(gallery::enneper());
  CHECK(ps.cardinality == 1);
  CHECK(ps.points.front().at_infinity);

  WeierstrassData flat{{0, 1, 1},
                       AlgebraicCurve::rational(),
                       {RationalOnCurve::polynomial(Poly2::constant(1.0)),
                        RationalOnCurve::polynomial(Poly2::constant(kI)), RationalOnCurve()},
                       Vec3::Zero()};
  const PolarSet fp = find_polar_set(flat);
  for (const CurvePoint& p : fp.points) CHECK(p.at_infinity);

  WeierstrassData wrong = gallery::enneper();
  wrong.signature.s = 2;
  try {
    polar_set(wrong);
    FAIL("expected CountMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CountMismatch);
  }
}

TEST_CASE("regularity") {
  for (const WeierstrassData& W : {gallery::catenoid(), gallery::enneper(), gallery::doubled_enneper()})
    CHECK(regularity_check(W, validation_samples(W)));

  // F = (1, i, 0) z: the metric vanishes at z = 0.
  WeierstrassData branched{{0, 1, 1},
                           AlgebraicCurve::rational(),
                           {RationalOnCurve::polynomial(zp({0.0, 1.0})), RationalOnCurve::polynomial(zp({0.0, kI})),
                            RationalOnCurve()},
                           Vec3::Zero()};
  CHECK_FALSE(regularity_check(branched, validation_samples(branched)));
}

TEST_CASE("real periods") {
  const WeierstrassData C = centred_catenoid();
  const Cycle loop = unit_loop(C.curve);
  CHECK(period_residual(C, {loop}).front().norm() < 1e-12);

  const WeierstrassData E = gallery::enneper();
  CHECK(period_residual(E, {unit_loop(E.curve)}).front().norm() < 1e-12);

  // f_3 = i / z: Re of the period is -2 pi.
  WeierstrassData H = C;
  H.f[2] = RationalOnCurve(Poly2::constant(kI), zp({0.0, 1.0}));
  CHECK(period_residual(H, {loop}).front().z() == doctest::Approx(-2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("validation report") {
  for (const std::string& name : gallery::names()) {
    CAPTURE(name);
    const ValidationReport r = validate(gallery::by_name(name));
    CHECK(r.checks.size() == 6);
    CHECK(r.passed());
  }
  WeierstrassData k2 = gallery::catenoid();
  k2.signature.k = 2;
  const ValidationReport r = validate(k2);
  CHECK_FALSE(r.passed());
  CHECK(r["conformality"].status == CheckStatus::Fail);

  WeierstrassData off = gallery::enneper();
  off.curve = AlgebraicCurve::general(Poly2::monomial(0, 1) - zp({1.0, 0.0, 1.0}));
  CHECK(validate(off)["curve"].status == CheckStatus::Fail);
}

TEST_CASE("moduli distance") {
  const WeierstrassData E = gallery::enneper();
  WeierstrassData A = E, B = E;
  A.curve = AlgebraicCurve::general(Poly2::monomial(0, 2) - zp({-1.0, 0.0, 1.0}));
  B.curve = AlgebraicCurve::general(Poly2::monomial(0, 2) - zp({0.0, 0.0, 1.0}));
  CHECK(moduli_distance(A, B) == doctest::Approx(1.0));
  CHECK(moduli_distance(E, E) == 0.0);

  const WeierstrassData C = centred_catenoid();
  WeierstrassData scaled = C;
  scaled.f[2] = RationalOnCurve(zp({1.5}), zp({0.0, 1.0}));
  CHECK(moduli_distance(C, scaled) == doctest::Approx(0.5));

  WeierstrassData other = E;
  other.signature.k = 3;
  CHECK_THROWS_AS(moduli_distance(E, other), Error);
}
