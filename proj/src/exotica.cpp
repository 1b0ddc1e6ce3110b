#include "minsurf/exotica.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace minsurf {

void EndFrame::check() const {
  for (int i = 0; i < 3; ++i)
    if (std::abs(v.col(i).norm() - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "frame directions must be unit vectors");
  if (std::abs(v.determinant()) <= 1e-12)
    throw Error(ErrorCode::InvalidArgument, "frame directions must be linearly independent");
}

EndFrame EndFrame::from_vectors(const Vec3& v1, const Vec3& v2, const Vec3& v3) {
  EndFrame f;
  f.v << v1.normalized(), v2.normalized(), v3.normalized();
  f.check();
  return f;
}

Rational calkin_wilf(std::int64_t m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "Calkin-Wilf index must be positive");
  // Breadth-first position in the tree: bit 0 goes to a/(a+b), bit 1 to (a+b)/b.
  Rational r{1, 1};
  for (int bit = std::bit_width(std::uint64_t(m)) - 2; bit >= 0; --bit) {
    if ((m >> bit) & 1) r.p += r.q;
    else r.q += r.p;
  }
  return r;
}

std::int64_t calkin_wilf_index(Rational r) {
  if (r.p <= 0 || r.q <= 0) throw Error(ErrorCode::InvalidArgument, "Calkin-Wilf rationals are positive");
  const std::int64_t g = std::gcd(r.p, r.q);
  r.p /= g;
  r.q /= g;
  std::uint64_t path = 0;
  int depth = 0;
  while (r.p != r.q) {
    if (depth >= 62) throw Error(ErrorCode::OutOfRange, "Calkin-Wilf index exceeds 64 bits");
    if (r.p > r.q) {
      path |= std::uint64_t(1) << depth;
      r.p -= r.q;
    } else {
      r.q -= r.p;
    }
    ++depth;
  }
  return std::int64_t((std::uint64_t(1) << depth) | path);
}

Rational rational_enumeration(std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "enumeration index must be positive");
  if (n == 1) return {0, 1};
  Rational q = calkin_wilf(n / 2);
  if (n % 2) q.p = -q.p;
  return q;
}

std::int64_t enumeration_index(Rational r) {
  if (r.q == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  if (r.q < 0) r = {-r.p, -r.q};
  if (r.p == 0) return 1;
  const std::int64_t m = calkin_wilf_index({std::abs(r.p), r.q});
  if (m > (std::numeric_limits<std::int64_t>::max() - 1) / 2)
    throw Error(ErrorCode::OutOfRange, "enumeration index exceeds 64 bits");
  return 2 * m + (r.p < 0 ? 1 : 0);
}

double distance_to_end(const Vec3& u, const PlanarEnd& end, const EndFrame& frame) {
  const Vec3 v = frame.direction(end.i);
  const double t = u.dot(v);
  const double h = t - end.r_n.value();
  const double rho = (u - t * v).norm();
  const double hole = 1.0 / double(end.n);
  return rho >= hole ? std::abs(h) : std::hypot(h, hole - rho);
}

DensityCertificate density_query(const Vec3& u, double epsilon, const EndFrame& frame, std::int64_t max_index) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  frame.check();
  const Vec3 t = frame.v.transpose() * u;
  for (std::int64_t n = 1; n <= max_index; ++n) {
    const Rational r = rational_enumeration(n);
    const double value = r.value();
    for (int i = 0; i < 3; ++i) {
      if (std::abs(t(i) - value) >= epsilon) continue;
      const PlanarEnd end{i, n, r};
      const double d = distance_to_end(u, end, frame);
      if (d < epsilon) return {u, epsilon, end, d};
    }
  }
  throw Error(ErrorCode::SearchExhausted, "no end within epsilon below the index budget");
}

bool general_position_check(const EndFrame& frame) {
  const Eigen::Matrix3d G = frame.v.transpose() * frame.v;
  const double a = std::abs(G(0, 1)), b = std::abs(G(0, 2)), c = std::abs(G(1, 2));
  constexpr double sep = 1e-10;
  return std::abs(a - b) > sep && std::abs(a - c) > sep && std::abs(b - c) > sep;
}

std::vector<SignedPermutation> symmetry_scan(const EndFrame& frame) {
  frame.check();
  const Eigen::Matrix3d inverse = frame.v.inverse();
  std::vector<SignedPermutation> out;
  std::array<int, 3> pi{0, 1, 2};
  do {
    for (int mask = 0; mask < 8; ++mask) {
      SignedPermutation s;
      s.pi = pi;
      Eigen::Matrix3d image;
      for (int i = 0; i < 3; ++i) {
        s.sign[i] = (mask >> i) & 1 ? -1 : 1;
        image.col(i) = s.sign[i] * frame.v.col(pi[i]);
      }
      s.map = image * inverse;
      if ((s.map.transpose() * s.map - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-10)
        out.push_back(s);
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

TranslationExclusion translation_exclusion(const EndFrame& frame) {
  const double det = frame.v.determinant();
  return {std::abs(det) > 1e-12, det};
}

}  // namespace minsurf
