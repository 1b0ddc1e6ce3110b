#include "minsurf/gallery.hpp"

namespace minsurf::gallery {

namespace {

Poly2 z_poly(std::vector<cplx> c) { return Poly2::in_z(c); }

}  // namespace

WeierstrassData enneper() {
  std::array<RationalOnCurve, 3> f{RationalOnCurve::polynomial(z_poly({0.5, 0.0, -0.5})),
                                   RationalOnCurve::polynomial(z_poly({0.5 * kI, 0.0, 0.5 * kI})),
                                   RationalOnCurve::polynomial(z_poly({0.0, 1.0}))};
  return WeierstrassData{{0, 1, 1}, AlgebraicCurve::rational(), f, Vec3::Zero()};
}

WeierstrassData catenoid() {
  const Poly2 den = z_poly({2.0, 4.0, 2.0});
  std::array<RationalOnCurve, 3> f{RationalOnCurve(z_poly({0.0, -2.0, -1.0}), den),
                                   RationalOnCurve(z_poly({2.0 * kI, 2.0 * kI, kI}), den),
                                   RationalOnCurve(z_poly({1.0}), z_poly({1.0, 1.0}))};
  return WeierstrassData{{0, 1, 2}, AlgebraicCurve::rational(), f, Vec3::Zero()};
}

WeierstrassData doubled_enneper() {
  std::array<RationalOnCurve, 3> f{RationalOnCurve::polynomial(z_poly({0.5, 0.0, 0.0, 0.0, -0.5})),
                                   RationalOnCurve::polynomial(z_poly({0.5 * kI, 0.0, 0.0, 0.0, 0.5 * kI})),
                                   RationalOnCurve::polynomial(z_poly({0.0, 0.0, 1.0}))};
  return WeierstrassData{{0, 2, 1}, AlgebraicCurve::rational(), f, Vec3::Zero()};
}

std::vector<std::string> names() { return {"enneper", "catenoid", "doubled-enneper"}; }

WeierstrassData by_name(const std::string& name) {
  if (name == "enneper") return enneper();
  if (name == "catenoid") return catenoid();
  if (name == "doubled-enneper") return doubled_enneper();
  throw Error(ErrorCode::InvalidArgument, "unknown gallery surface '" + name + "'");
}

}  // namespace minsurf::gallery
