#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "minsurf/exotica.hpp"
#include "oracles.hpp"

using namespace minsurf;

namespace {

EndFrame general_frame() {
  return EndFrame::from_vectors(Vec3(1.0, 0.0, 0.0), Vec3(1.0, 1.0, 0.0), Vec3(1.0, 2.0, 3.0));
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  return Vec3(N(rng), N(rng), N(rng)).normalized();
}

}  // namespace

TEST_CASE("Calkin-Wilf terms against Stern's sequence") {
  const auto fusc = oracle::fusc_table(5000);
  for (std::int64_t m = 1; m < 5000; ++m) {
    const Rational q = calkin_wilf(m);
    CHECK(q.p == fusc[m]);
    CHECK(q.q == fusc[m + 1]);
    CHECK(calkin_wilf_index(q) == m);
  }
  CHECK_THROWS_AS(calkin_wilf(0), Error);
  CHECK_THROWS_AS(calkin_wilf_index({0, 1}), Error);
}

TEST_CASE("enumeration of the rationals") {
  const std::vector<Rational> head = {{0, 1}, {1, 1}, {-1, 1}, {1, 2}, {-1, 2}, {2, 1}, {-2, 1}, {1, 3}, {-1, 3}};
  for (std::size_t k = 0; k < head.size(); ++k) CHECK(rational_enumeration(std::int64_t(k) + 1) == head[k]);

  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (std::int64_t n = 1; n <= 10000; ++n) {
    const Rational r = rational_enumeration(n);
    CHECK(std::gcd(r.p, r.q) == 1);
    CHECK(r.q > 0);
    CHECK(seen.insert({r.p, r.q}).second);
    CHECK(enumeration_index(r) == n);
  }
  CHECK(enumeration_index({2, 4}) == enumeration_index({1, 2}));
  CHECK(enumeration_index({0, 7}) == 1);
  CHECK_THROWS_AS(rational_enumeration(0), Error);
}

TEST_CASE("small rationals and their indices") {
  // First appearance of each p/q in Stern's sequence up to depth 21.
  const std::int64_t depth = std::int64_t(1) << 21;
  const auto fusc = oracle::fusc_table(depth);
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> first;
  for (std::int64_t m = 1; m < depth; ++m)
    if (fusc[m] <= 20 && fusc[m + 1] <= 20) first.emplace(std::pair{fusc[m], fusc[m + 1]}, m);

  std::int64_t worst = 0;
  int count = 0;
  for (std::int64_t q = 1; q <= 20; ++q)
    for (std::int64_t p = -20; p <= 20; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const std::int64_t n = enumeration_index({p, q});
      CHECK(rational_enumeration(n) == Rational{p, q});
      if (p != 0) {
        REQUIRE(first.count({std::abs(p), q}));
        CHECK(n == 2 * first[{std::abs(p), q}] + (p < 0 ? 1 : 0));
      }
      worst = std::max(worst, n);
      ++count;
    }
  // 20 / 1 sits at depth 20 of the Calkin-Wilf tree.
  CHECK(worst == 2 * ((std::int64_t(1) << 20) - 1) + 1);
  CHECK(count == 1 + 2 * 255);
}

TEST_CASE("distance to a holed plane") {
  const EndFrame F = general_frame();
  const PlanarEnd end{1, 4, {1, 2}};
  const Vec3 v = F.direction(1);
  const Vec3 w = v.unitOrthogonal();
  CHECK(distance_to_end(0.5 * v, end, F) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(distance_to_end(0.5 * v + 0.5 * w, end, F) == doctest::Approx(0.0).epsilon(1e-15));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 u = 0.5 * v + Vec3(U(rng), U(rng), U(rng)) * (k % 2 ? 1.0 : 0.3);
    CHECK(distance_to_end(u, end, F) == doctest::Approx(oracle::distance_to_holed_plane(u, v, 0.5, 4)).epsilon(1e-12));
  }
}

TEST_CASE("density certificates") {
  const EndFrame F = general_frame();
  const DensityCertificate c = density_query(Vec3(0.5, 0.3, 0.7), 1e-3, F);
  CHECK(c.found.r_n == Rational{1, 2});
  CHECK(c.found.n == enumeration_index({1, 2}));
  CHECK(c.distance == 0.0);

  // Near the origin the hole of the plane r = 0 is too wide at n = 1.
  const DensityCertificate o = density_query(Vec3::Zero(), 0.6, F);
  CHECK(o.distance < 0.6);
  for (std::int64_t n = 1; n < o.found.n; ++n)
    for (int i = 0; i < 3; ++i) CHECK(distance_to_end(Vec3::Zero(), {i, n, rational_enumeration(n)}, F) >= 0.6);

  CHECK(density_query(Vec3(3.0, -2.0, 1.0), 10.0, F).found.n == 1);
  CHECK_THROWS_AS(density_query(Vec3(0.123456, 0.0, 0.0), 1e-9, F, 1000), Error);
  CHECK_THROWS_AS(density_query(Vec3::Zero(), 0.0, F), Error);
}

TEST_CASE("random points are all certified") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (const EndFrame& F : {general_frame(), EndFrame{}}) {
    for (int k = 0; k < 100; ++k) {
      const Vec3 u(U(rng), U(rng), U(rng));
      const DensityCertificate c = density_query(u, 1e-2, F);
      CHECK(c.distance < 1e-2);
      const PlanarEnd& e = c.found;
      CHECK(std::abs(c.distance - oracle::distance_to_holed_plane(u, F.direction(e.i), e.r_n.value(), double(e.n))) <
            1e-14);
    }
  }
}

TEST_CASE("general position") {
  CHECK_FALSE(general_position_check(EndFrame{}));
  CHECK(general_position_check(general_frame()));
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Vec3(1.0, -2.0, 0.5).normalized()).toRotationMatrix();
  EndFrame rotated = general_frame();
  rotated.v = R * rotated.v;
  CHECK(general_position_check(rotated));
  CHECK_THROWS_AS(EndFrame::from_vectors(Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(-1.0, 0.0, 0.0)), Error);
}

TEST_CASE("symmetry scan") {
  auto is_pm_identity = [](const std::vector<SignedPermutation>& s) {
    if (s.size() != 2) return false;
    for (const auto& g : s)
      if (!g.map.isApprox(Eigen::Matrix3d::Identity(), 1e-10) && !g.map.isApprox(-Eigen::Matrix3d::Identity(), 1e-10))
        return false;
    return true;
  };
  CHECK(is_pm_identity(symmetry_scan(general_frame())));
  CHECK(symmetry_scan(EndFrame{}).size() == 48);

  std::mt19937_64 rng(7);
  int tested = 0;
  while (tested < 50) {
    const EndFrame F = EndFrame::from_vectors(random_unit(rng), random_unit(rng), random_unit(rng));
    if (!general_position_check(F)) continue;
    ++tested;
    CHECK(is_pm_identity(symmetry_scan(F)));
  }
}

TEST_CASE("translation exclusion") {
  const EndFrame F = general_frame();
  const TranslationExclusion t = translation_exclusion(F);
  CHECK(t.excluded);
  CHECK(t.determinant == doctest::Approx(F.v.determinant()));
  CHECK(std::abs(t.determinant) == doctest::Approx(3.0 / (std::sqrt(2.0) * std::sqrt(14.0))));

  EndFrame flat;
  flat.v.col(2) = Vec3(1.0, 1.0, 0.0).normalized();
  CHECK_FALSE(translation_exclusion(flat).excluded);
  CHECK_THROWS_AS(flat.check(), Error);
}
