#include "minsurf/parabolic.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "minsurf/common.hpp"

namespace minsurf {

namespace {

constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// Smallest t in (0, 1] with |p + t h d| = r, or +inf.
double first_crossing(const Eigen::Vector2d& p, const Eigen::Vector2d& d, double h, double r) {
  const double b = p.dot(d), c = p.squaredNorm() - r * r;
  const double disc = b * b - c;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double s = std::sqrt(disc);
  for (double t : {(-b - s) / h, (-b + s) / h})
    if (t > 0.0 && t <= 1.0) return t;
  return std::numeric_limits<double>::infinity();
}

}  // namespace

void AnnulusDomain::check() const {
  if (!(r_inner > 0.0 && r_inner < r_outer))
    throw Error(ErrorCode::InvalidArgument, "annulus radii must satisfy 0 < r_inner < r_outer");
}

double harmonic_measure_annulus(const AnnulusDomain& A, double rho) {
  A.check();
  if (!(rho >= A.r_inner && rho <= A.r_outer))
    throw Error(ErrorCode::OutOfRange, "evaluation radius lies outside the annulus");
  const double inner = std::log(A.r_outer / rho) / std::log(A.r_outer / A.r_inner);
  return A.marked == AnnulusDomain::Marked::Inner ? inner : 1.0 - inner;
}

GridDomain annulus_grid(const AnnulusDomain& A, double h) {
  A.check();
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  const int n = static_cast<int>(std::ceil(A.r_outer / h)) + 1;
  GridDomain G;
  G.nx = G.ny = 2 * n + 1;
  G.h = h;
  G.origin = Eigen::Vector2d::Constant(-n * h);
  const auto size = std::size_t(G.nx) * G.ny;
  G.cells.assign(size, GridDomain::Cell::Exterior);
  G.labels.assign(size, 0);
  G.arms.assign(size, {});
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const double r = G.position(i, j).norm();
      if (r > A.r_inner && r < A.r_outer) G.cells[G.index(i, j)] = GridDomain::Cell::Interior;
    }
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const int k = G.index(i, j);
      if (G.cells[k] != GridDomain::Cell::Interior) continue;
      const Eigen::Vector2d p = G.position(i, j);
      for (int a = 0; a < 4; ++a) {
        const Eigen::Vector2d d(kDirections[a][0], kDirections[a][1]);
        const double t_in = first_crossing(p, d, h, A.r_inner);
        const double t_out = first_crossing(p, d, h, A.r_outer);
        if (t_in <= t_out && std::isfinite(t_in)) G.arms[k][a] = {t_in, kInnerLabel};
        else if (std::isfinite(t_out)) G.arms[k][a] = {t_out, kOuterLabel};
      }
    }
  return G;
}

GridDomain parse_grid(std::istream& in) {
  std::string line, key;
  GridDomain G;
  // Blank lines and "#" comments may precede the header.
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '#') break;
  }
  std::istringstream header(line);
  if (!(header >> key >> G.h) || key != "h" || !(G.h > 0.0))
    throw Error(ErrorCode::Parse, "grid file must start with 'h <spacing>'");
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "grid file has no rows");
  G.ny = static_cast<int>(rows.size());
  for (const auto& r : rows) G.nx = std::max(G.nx, static_cast<int>(r.size()));
  const auto size = std::size_t(G.nx) * G.ny;
  G.cells.assign(size, GridDomain::Cell::Exterior);
  G.labels.assign(size, 0);
  G.arms.assign(size, {});
  for (int row = 0; row < G.ny; ++row)
    for (int i = 0; i < static_cast<int>(rows[row].size()); ++i) {
      const char c = rows[row][i];
      const int k = G.index(i, G.ny - 1 - row);
      if (c == 'o') {
        G.cells[k] = GridDomain::Cell::Interior;
      } else if (c != '.' && c != ' ') {
        G.cells[k] = GridDomain::Cell::Boundary;
        G.labels[k] = static_cast<unsigned char>(c);
      }
    }

  int interior = 0, first = -1;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const int k = G.index(i, j);
      if (G.cells[k] != GridDomain::Cell::Interior) continue;
      ++interior;
      if (first < 0) first = k;
      for (int a = 0; a < 4; ++a) {
        const int ni = i + kDirections[a][0], nj = j + kDirections[a][1];
        if (ni < 0 || nj < 0 || ni >= G.nx || nj >= G.ny || G.cells[G.index(ni, nj)] == GridDomain::Cell::Exterior)
          throw Error(ErrorCode::Parse, "interior cell without four neighbours in the closure");
        const int nk = G.index(ni, nj);
        G.arms[k][a] = {1.0, G.cells[nk] == GridDomain::Cell::Boundary ? G.labels[nk] : -1};
      }
    }
  if (interior == 0) throw Error(ErrorCode::Parse, "grid has no interior cells");

  std::vector<char> seen(size, 0);
  std::vector<int> stack{first};
  seen[first] = 1;
  int reached = 0;
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    ++reached;
    const int i = k % G.nx, j = k / G.nx;
    for (const auto& d : kDirections) {
      const int nk = G.index(i + d[0], j + d[1]);
      if (G.cells[nk] == GridDomain::Cell::Interior && !seen[nk]) {
        seen[nk] = 1;
        stack.push_back(nk);
      }
    }
  }
  if (reached != interior) throw Error(ErrorCode::Parse, "grid interior is not connected");
  return G;
}

Eigen::VectorXd solve_harmonic(const GridDomain& G, const std::set<int>& I) {
  const auto size = G.cells.size();
  std::vector<int> unknown(size, -1);
  int n = 0;
  for (std::size_t k = 0; k < size; ++k)
    if (G.cells[k] == GridDomain::Cell::Interior) unknown[k] = n++;

  auto data = [&I](int label) { return I.count(label) ? 1.0 : 0.0; };
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(std::size_t(n) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  bool all_marked = true;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const int k = G.index(i, j);
      const int row = unknown[k];
      if (row < 0) continue;
      double diag = 0.0;
      // Shortley-Weller in units of h: arms a (forward) and b (backward) per axis.
      for (int axis = 0; axis < 2; ++axis) {
        const auto& fwd = G.arms[k][2 * axis];
        const auto& bwd = G.arms[k][2 * axis + 1];
        const double a = fwd.fraction, b = bwd.fraction;
        const double cf = 2.0 / (a * (a + b)), cb = 2.0 / (b * (a + b));
        diag += cf + cb;
        for (int side = 0; side < 2; ++side) {
          const auto& arm = side == 0 ? fwd : bwd;
          const double c = side == 0 ? cf : cb;
          const auto& d = kDirections[2 * axis + side];
          if (arm.label >= 0) {
            rhs(row) += c * data(arm.label);
            all_marked = all_marked && I.count(arm.label);
          } else entries.emplace_back(row, unknown[G.index(i + d[0], j + d[1])], -c);
        }
      }
      entries.emplace_back(row, row, diag);
    }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  // Data 1 on the whole boundary: the constant solves the system exactly.
  if (!all_marked) {
    Eigen::SparseMatrix<double, Eigen::RowMajor> A(n, n);
    A.setFromTriplets(entries.begin(), entries.end());

    Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(1e-12);
    solver.setMaxIterations(std::max(1000, 10 * n));
    solver.compute(A);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::SolverDivergence, "preconditioner setup failed");
    x = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !x.allFinite())
      throw Error(ErrorCode::SolverDivergence, "BiCGSTAB did not reach relative residual 1e-12");
  }

  Eigen::VectorXd u = Eigen::VectorXd::Constant(Eigen::Index(size), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < size; ++k) {
    if (unknown[k] >= 0) u(k) = x(unknown[k]);
    else if (G.cells[k] == GridDomain::Cell::Boundary) u(k) = data(G.labels[k]);
  }
  return u;
}

double harmonic_measure_grid(const GridDomain& G, int i, int j, const std::set<int>& I) {
  if (I.empty()) throw Error(ErrorCode::InvalidArgument, "the marked boundary set must be nonempty");
  if (i < 0 || j < 0 || i >= G.nx || j >= G.ny || G.cells[G.index(i, j)] != GridDomain::Cell::Interior)
    throw Error(ErrorCode::InvalidArgument, "evaluation node is not interior");
  return solve_harmonic(G, I)(G.index(i, j));
}

ExhaustionReport exhaustion_check(const std::vector<AnnulusDomain>& stages, double rho) {
  ExhaustionReport out;
  bool nested = true;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const AnnulusDomain& A = stages[k];
    A.check();
    AnnulusDomain inner = A;
    inner.marked = AnnulusDomain::Marked::Inner;
    ExhaustionStage s;
    s.j = static_cast<int>(k) + 1;
    s.measure = rho >= A.r_outer ? 0.0 : rho <= A.r_inner ? 1.0 : harmonic_measure_annulus(inner, rho);
    s.meets_bound = s.measure > double(s.j - 1) / s.j;
    out.stages.push_back(s);
    if (k > 0) {
      const AnnulusDomain& prev = stages[k - 1];
      nested = nested && A.r_outer > prev.r_outer &&
               std::abs(A.r_inner - prev.r_inner) <= 1e-12 * prev.r_inner;
    }
  }
  if (stages.size() < 2) return out;
  bool bound = true;
  for (const auto& s : out.stages) bound = bound && s.meets_bound;
  out.verdict = nested && bound ? ExhaustionVerdict::ParabolicConsistent : ExhaustionVerdict::NotParabolic;
  return out;
}

EndType end_type(double r, double R) {
  if (!(r >= 0.0 && R > r)) throw Error(ErrorCode::InvalidArgument, "end annulus needs 0 <= r < R");
  return r == 0.0 || std::isinf(R) ? EndType::Parabolic : EndType::Hyperbolic;
}

}  // namespace minsurf
