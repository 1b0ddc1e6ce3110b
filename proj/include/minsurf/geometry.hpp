#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "minsurf/common.hpp"
#include "minsurf/curve.hpp"
#include "minsurf/wdata.hpp"

namespace minsurf {

struct ImmersionPoint {
  Vec3 position = Vec3::Zero();
  CurvePoint source;
  std::string path_id;
};

/// x + Re of the integral of F dz from the basepoint to q along `path`, which
/// must start at z = 0 on the basepoint's sheet and end over q.
ImmersionPoint evaluate(const WeierstrassData& W, const CurvePoint& q, const SheetPath& path,
                        std::string path_id = {});

struct MetricSample {
  CurvePoint at;
  /// 1/2 sum |f_j|^2
  double ds2_coeff = 0.0;
  /// 1/4 |f3|^2 (1/|g| + |g|)^2, evaluated without dividing by g
  double ds2_from_gauss = 0.0;
  double gauss_curv = 0.0;
};

/// Throws AtPole when q is a pole of F dz or a zero of f1 - i f2 and f3 at once.
MetricSample metric_at(const WeierstrassData& W, const CurvePoint& q);

struct TotalCurvature {
  double numeric = 0.0;
  double exact = 0.0;
  double tail_bound = 0.0;
  double radius = 0.0;
};

/// K dA integrated over |z| < radius on the rational form. With radius <= 0 the
/// radius is grown until the tail bound drops below 1e-4 * 4 pi.
TotalCurvature total_curvature(const WeierstrassData& W, double radius = 0.0);

struct FluxVector {
  std::string cycle_id;
  Vec3 value = Vec3::Zero();
};

/// Im of the period of F dz over a closed cycle, averaged over both
/// orientations so reversal negates it exactly.
FluxVector flux(const WeierstrassData& W, const Cycle& cycle);

/// Polar grid: center + r e^{i theta}, r in [inner, outer] (rows), theta
/// uniform over [0, 2 pi) (columns, periodic). Rect grid: lo..hi (columns along
/// Re, rows along Im). inner == 0 gives a disc.
struct MeshGrid {
  enum class Kind { Polar, Rect };
  Kind kind = Kind::Polar;
  cplx center{0.0};
  double inner = 0.0;
  double outer = 1.0;
  cplx lo{-1.0, -1.0};
  cplx hi{1.0, 1.0};
  int rows = 0;
  int cols = 0;
  /// Intermediate z-vertices between the basepoint and node(0, 0); the lift
  /// reached along them fixes the sheet of the grid.
  std::vector<cplx> approach;

  bool empty() const { return rows <= 0 || cols <= 0; }
  cplx node(int row, int col) const;
};

/// RowsFirst: walk row 0, then every column outward. ColumnsFirst: walk
/// column 0, then every row.
enum class PathTree { RowsFirst, ColumnsFirst };

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<CurvePoint> param_grid;
};

Mesh mesh(const WeierstrassData& W, const MeshGrid& grid, PathTree tree = PathTree::RowsFirst);

/// "v x y z" with 9 significant digits, then 1-based "f i j k".
void write_obj(std::ostream& out, const Mesh& m);

struct CompletenessReport {
  std::vector<double> lengths;
  bool unbounded = false;
};

/// Cumulative ds-length along truncations of `ray`. For a finite puncture the
/// last vertex is the puncture and level l stops at distance 2^-l times the
/// last segment; towards infinity the last vertex is scaled by 2^l.
CompletenessReport completeness_probe(const WeierstrassData& W, const SheetPath& ray, bool to_infinity,
                                      int levels = 10);

}  // namespace minsurf
