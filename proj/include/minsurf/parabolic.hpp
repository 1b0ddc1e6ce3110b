#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace minsurf {

struct AnnulusDomain {
  enum class Marked { Inner, Outer };
  double r_inner = 1.0;
  double r_outer = 2.0;
  Marked marked = Marked::Inner;

  /// Throws InvalidArgument unless 0 < r_inner < r_outer.
  void check() const;
};

/// Closed form: log(R / rho) / log(R / r) for the inner circle.
double harmonic_measure_annulus(const AnnulusDomain& A, double rho);

/// Lattice nodes origin + h (i, j). Interior nodes carry four arms (E, W, N,
/// S); an arm either reaches the neighbouring node or stops at a boundary
/// crossing a fraction of h away, carrying that boundary's label.
struct GridDomain {
  enum class Cell : char { Exterior, Interior, Boundary };
  struct Arm {
    double fraction = 1.0;
    /// -1 when the arm ends on an interior node.
    int label = -1;
  };

  int nx = 0, ny = 0;
  double h = 1.0;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  std::vector<Cell> cells;
  /// Labels of boundary cells (0 elsewhere).
  std::vector<int> labels;
  std::vector<std::array<Arm, 4>> arms;

  int index(int i, int j) const { return j * nx + i; }
  Eigen::Vector2d position(int i, int j) const { return origin + h * Eigen::Vector2d(i, j); }
};

inline constexpr int kInnerLabel = 1;
inline constexpr int kOuterLabel = 2;

/// Nodes at h (i, j) around the origin; arms cut by the circles end there
/// (Shortley-Weller), inner circle labelled kInnerLabel, outer kOuterLabel.
GridDomain annulus_grid(const AnnulusDomain& A, double h);

/// Grid from an ASCII mask: a line "h <spacing>" (optionally preceded by "#"
/// comment lines), then rows (top row first)
/// of '.' exterior, 'o' interior, any other printable character a boundary
/// cell labelled by that character. Checks that every interior cell has four
/// non-exterior neighbours and that the interior is connected.
GridDomain parse_grid(std::istream& in);

/// Solution of the discrete Dirichlet problem with value 1 on boundary labels
/// in I and 0 elsewhere, indexed like cells (boundary cells hold their data).
/// Exterior cells hold NaN. BiCGSTAB to relative residual 1e-12; throws
/// SolverDivergence otherwise.
Eigen::VectorXd solve_harmonic(const GridDomain& G, const std::set<int>& I);

/// u_I at the interior node (i, j). Throws InvalidArgument for an empty I or
/// a node that is not interior.
double harmonic_measure_grid(const GridDomain& G, int i, int j, const std::set<int>& I);

enum class ExhaustionVerdict { ParabolicConsistent, NotParabolic, Inconclusive };

struct ExhaustionStage {
  int j = 0;
  double measure = 0.0;
  bool meets_bound = false;
};

struct ExhaustionReport {
  std::vector<ExhaustionStage> stages;
  ExhaustionVerdict verdict = ExhaustionVerdict::Inconclusive;
};

/// Inner-circle measure at radius rho for each stage (0 once rho has left the
/// stage). Parabolic-consistent when the outer radii increase strictly and
/// every stage satisfies mu_j > (j - 1) / j; a single stage is inconclusive.
ExhaustionReport exhaustion_check(const std::vector<AnnulusDomain>& stages, double rho);

enum class EndType { Parabolic, Hyperbolic };

/// A conformal annulus r < |z| < R with r = 0 or R = infinity is a parabolic
/// end; finite modulus is hyperbolic.
EndType end_type(double r, double R);

}  // namespace minsurf
