#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "minsurf/common.hpp"

namespace minsurf {

/// Three unit directions v_1, v_2, v_3 (columns of `v`).
struct EndFrame {
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();

  /// Throws InvalidArgument unless each column has norm 1 within 1e-12 and
  /// |det| exceeds 1e-12.
  void check() const;
  Vec3 direction(int i) const { return v.col(i); }

  /// Normalises the three vectors, then checks.
  static EndFrame from_vectors(const Vec3& v1, const Vec3& v2, const Vec3& v3);
};

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double value() const { return double(p) / double(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// q-th term of the Calkin-Wilf sequence, q_1 = 1, as fusc(m) / fusc(m + 1).
Rational calkin_wilf(std::int64_t m);
/// Index m of the positive rational p / q (lowest terms) in that sequence.
std::int64_t calkin_wilf_index(Rational r);

/// r_1 = 0, r_{2m} = q_m, r_{2m+1} = -q_m.
Rational rational_enumeration(std::int64_t n);
/// Inverse of rational_enumeration; r need not be in lowest terms.
std::int64_t enumeration_index(Rational r);

/// The plane r_n v_i + v_i^perp with the open disc of radius 1/n about
/// r_n v_i removed. `i` is zero-based.
struct PlanarEnd {
  int i = 0;
  std::int64_t n = 1;
  Rational r_n;
};

double distance_to_end(const Vec3& u, const PlanarEnd& end, const EndFrame& frame);

struct DensityCertificate {
  Vec3 query;
  double epsilon = 0.0;
  PlanarEnd found;
  double distance = 0.0;
};

/// Lowest index n <= max_index (ties broken by direction) whose end lies
/// within epsilon of u. Throws SearchExhausted past the budget.
DensityCertificate density_query(const Vec3& u, double epsilon, const EndFrame& frame,
                                 std::int64_t max_index = 1'000'000);

/// The absolute inner products |<v_1,v_2>|, |<v_1,v_3>|, |<v_2,v_3>| are
/// pairwise separated by more than 1e-10.
bool general_position_check(const EndFrame& frame);

struct SignedPermutation {
  std::array<int, 3> pi;
  std::array<int, 3> sign;
  Eigen::Matrix3d map;
};

/// Linear maps sending v_i to sign_i v_{pi(i)} that are orthogonal within
/// 1e-10, out of all 48 assignments.
std::vector<SignedPermutation> symmetry_scan(const EndFrame& frame);

struct TranslationExclusion {
  bool excluded = false;
  double determinant = 0.0;
};

/// No nonzero vector is orthogonal to all three directions. Does not call
/// check(), so degenerate triples report excluded = false.
TranslationExclusion translation_exclusion(const EndFrame& frame);

}  // namespace minsurf
