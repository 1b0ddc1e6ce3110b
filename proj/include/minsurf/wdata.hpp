#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minsurf/common.hpp"
#include "minsurf/curve.hpp"

namespace minsurf {

/// (nu, k, s): genus, Gauss-map degree, number of punctures.
struct SurfaceSignature {
  int nu = 0;
  int k = 1;
  int s = 1;
  friend bool operator==(const SurfaceSignature&, const SurfaceSignature&) = default;
};

/// numerator(z, w) / denominator(z, w) restricted to a curve.
class RationalOnCurve {
 public:
  RationalOnCurve();
  RationalOnCurve(Poly2 numerator, Poly2 denominator);
  static RationalOnCurve polynomial(Poly2 numerator);

  const Poly2& numerator() const { return num_; }
  const Poly2& denominator() const { return den_; }

  cplx operator()(const CurvePoint& q) const { return num_(q.z, q.w) / den_(q.z, q.w); }
  /// d/dz along the curve.
  cplx derivative(const AlgebraicCurve& curve, const CurvePoint& q) const;

 private:
  Poly2 num_, den_;
  Poly2 num_z_, num_w_, den_z_, den_w_;
};

struct WeierstrassData {
  SurfaceSignature signature;
  AlgebraicCurve curve;
  std::array<RationalOnCurve, 3> f;
  Vec3 translation = Vec3::Zero();

  Vec3c F(const CurvePoint& q) const { return {f[0](q), f[1](q), f[2](q)}; }
  /// The point (0, 0) where the immersion is anchored.
  CurvePoint basepoint() const;
};

/// F = (1/2 (1/g - g), i/2 (1/g + g), 1) h, with phi_3 = h dz, reduced modulo
/// the curve whenever the curve is monic in w.
WeierstrassData from_gauss_height(SurfaceSignature signature, AlgebraicCurve curve, const RationalOnCurve& g,
                                  const RationalOnCurve& h, Vec3 translation = Vec3::Zero());

/// g = f3 / (f1 - i f2), with common factors removed where the form allows.
RationalOnCurve gauss_map(const WeierstrassData& W);

/// Degree of g from pole/zero bookkeeping of its reduced numerator and
/// denominator; empty when the curve has more than one place over infinity.
std::optional<int> gauss_degree_algebraic(const WeierstrassData& W);

/// Preimage counts of g over two pseudo-random points of the sphere.
std::array<int, 2> gauss_degree_numeric(const WeierstrassData& W, std::uint64_t seed = 7);

double conformality_residual(const WeierstrassData& W, const std::vector<CurvePoint>& samples);

struct PolarSet {
  std::vector<CurvePoint> points;
  int cardinality = 0;
};

/// Poles of F dz, finite ones first, then places over infinity (flagged
/// `at_infinity`). Does not compare against the signature.
PolarSet find_polar_set(const WeierstrassData& W);

/// As find_polar_set; throws CountMismatch when the count differs from s.
PolarSet polar_set(const WeierstrassData& W);

/// Smallest value of sum |f_j|^2 over the samples, with the local-coordinate
/// factor applied near simple branch points.
double regularity_margin(const WeierstrassData& W, const std::vector<CurvePoint>& samples);
bool regularity_check(const WeierstrassData& W, const std::vector<CurvePoint>& samples);

/// canonical_cycles plus one small loop around each finite pole.
std::vector<Cycle> period_cycles(const WeierstrassData& W);

/// Re of the integral of F dz over each cycle.
std::vector<Vec3> period_residual(const WeierstrassData& W, const std::vector<Cycle>& cycles);

/// Quasi-random points, `per_sheet` over the z-plane on every sheet, plus 64
/// points on circles of radius 1e-2 around every finite pole and branch value,
/// plus the zeros of every numerator, where the metric may vanish.
std::vector<CurvePoint> validation_samples(const WeierstrassData& W, int per_sheet = 1024);

/// Pseudo-random regular points, away from poles and branch values.
std::vector<CurvePoint> random_samples(const WeierstrassData& W, int count, std::uint64_t seed);

enum class CheckStatus { Pass, Fail, Unverified };

std::string_view to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Unverified;
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult& operator[](std::string_view name) const;
};

/// Runs the six membership checks: polynomial, curve, coefficients,
/// conformality, polar-set, periods.
ValidationReport validate(const WeierstrassData& W);

/// Sum of coefficient distances of the curve and of all numerators and
/// denominators.
double moduli_distance(const WeierstrassData& A, const WeierstrassData& B);

/// moduli_distance plus the Euclidean distance of the translations.
double affine_moduli_distance(const WeierstrassData& A, const WeierstrassData& B);

}  // namespace minsurf
