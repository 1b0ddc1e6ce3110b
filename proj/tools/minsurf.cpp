#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minsurf/exotica.hpp"
#include "minsurf/geometry.hpp"
#include "minsurf/io.hpp"
#include "minsurf/parabolic.hpp"
#include "minsurf/periods.hpp"
#include "minsurf/wdata.hpp"

using namespace minsurf;

namespace {

constexpr int kValidationFailure = 1;
constexpr int kUsageError = 2;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> numbers(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw Usage(what);
    } catch (const std::logic_error&) {
      throw Usage(what + ": '" + text + "' is not a list of " + std::to_string(count) + " numbers");
    }
  }
  if (out.size() != count) throw Usage(what + ": expected " + std::to_string(count) + " comma-separated numbers");
  return out;
}

template <typename Read>
auto load(const std::string& path, Read read) {
  std::istringstream in(io::read_file(path));
  return read(in);
}

WeierstrassData load_surface(const std::string& path) { return load(path, io::read_surface); }

MeshGrid parse_grid_spec(const std::string& spec, const std::vector<std::string>& approach) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Usage("--grid must be polar:... or rect:...");
  const std::string kind = spec.substr(0, colon);
  const auto v = numbers(spec.substr(colon + 1), 6, "--grid");
  MeshGrid g;
  if (kind == "polar") {
    g.kind = MeshGrid::Kind::Polar;
    g.center = {v[0], v[1]};
    g.inner = v[2];
    g.outer = v[3];
  } else if (kind == "rect") {
    g.kind = MeshGrid::Kind::Rect;
    g.lo = {v[0], v[1]};
    g.hi = {v[2], v[3]};
  } else {
    throw Usage("--grid kind must be 'polar' or 'rect'");
  }
  g.rows = static_cast<int>(v[4]);
  g.cols = static_cast<int>(v[5]);
  for (const auto& a : approach) {
    const auto p = numbers(a, 2, "--approach");
    g.approach.emplace_back(p[0], p[1]);
  }
  return g;
}

int run_validate(const std::string& path) {
  const ValidationReport report = validate(load_surface(path));
  io::write_report(std::cout, report);
  return report.passed() ? 0 : kValidationFailure;
}

int run_mesh(const std::string& path, const std::string& grid, const std::vector<std::string>& approach,
             const std::string& tree, const std::string& output) {
  const WeierstrassData W = load_surface(path);
  const PathTree t = tree == "columns" ? PathTree::ColumnsFirst : PathTree::RowsFirst;
  const Mesh m = mesh(W, parse_grid_spec(grid, approach), t);
  std::ofstream out(output);
  if (!out) throw Usage("cannot write '" + output + "'");
  write_obj(out, m);
  std::cout << "vertices " << m.vertices.size() << "\nfaces " << m.faces.size() << '\n';
  return 0;
}

int run_flux(const std::string& path, const std::vector<std::string>& ids, const std::vector<std::string>& loops) {
  const WeierstrassData W = load_surface(path);
  std::vector<Cycle> chosen;
  if (!ids.empty()) {
    const std::vector<Cycle> known = period_cycles(W);
    for (const auto& id : ids) {
      auto it = std::find_if(known.begin(), known.end(), [&](const Cycle& c) { return c.id == id; });
      if (it == known.end()) {
        std::string names;
        for (const auto& c : known) names += ' ' + c.id;
        throw Usage("no cycle '" + id + "'; available:" + (names.empty() ? " none" : names));
      }
      chosen.push_back(*it);
    }
  }
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const auto v = numbers(loops[k], 3, "--loop");
    Cycle c;
    c.id = "loop" + std::to_string(k + 1);
    constexpr int kSides = 128;
    for (int j = 0; j <= kSides; ++j)
      c.path.vertices.push_back(cplx(v[0], v[1]) + v[2] * std::polar(1.0, 2.0 * kPi * j / kSides));
    c.path.vertices.back() = c.path.vertices.front();
    SheetPath reach;
    reach.vertices = {0.0, c.path.vertices.front()};
    reach.start = W.basepoint();
    c.path.start = continue_along(W.curve, reach);
    chosen.push_back(std::move(c));
  }
  if (chosen.empty()) chosen = period_cycles(W);
  std::printf("%-8s %15s %15s %15s\n", "cycle", "x", "y", "z");
  for (const Cycle& c : chosen) {
    const FluxVector f = flux(W, c);
    std::printf("%-8s %15.9g %15.9g %15.9g\n", f.cycle_id.c_str(), f.value.x(), f.value.y(), f.value.z());
  }
  return 0;
}

int run_curvature(const std::string& path, double radius) {
  const TotalCurvature tc = total_curvature(load_surface(path), radius);
  std::printf("numeric %.12g\nexact %.12g\ntail_bound %.3g\nradius %g\n", tc.numeric, tc.exact, tc.tail_bound,
              tc.radius);
  return 0;
}

void print_matrix(const char* name, const Eigen::MatrixXcd& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    std::printf("%s", name);
    for (Eigen::Index j = 0; j < M.cols(); ++j) std::printf(" %.12g%+.12gi", M(i, j).real(), M(i, j).imag());
    std::printf("\n");
  }
}

int run_periods(const std::string& path, int refinement) {
  const AlgebraicCurve curve = load(path, io::read_curve);
  const PeriodData P = period_matrix(curve, refinement);
  std::printf("genus %d\n", P.basis.nu);
  print_matrix("pi", P.matrix.pi);
  std::printf("symmetry_defect %.3g\nmin_im_eigenvalue %.12g\n", symmetry_defect(P.matrix),
              min_imaginary_eigenvalue(P.matrix));
  return 0;
}

int run_solve_periods(const std::string& path, const std::vector<std::string>& targets, int refinement) {
  io::AnsatzSpec spec = load(path, io::read_ansatz);
  if (!targets.empty()) {
    if (targets.size() != spec.ansatz.cycles.size()) throw Usage("--target must be given once per ansatz cycle");
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const auto v = numbers(targets[k], 2, "--target");
      spec.targets[k] = {{v[0], v[1]}, TargetKind::Full};
    }
  }
  NewtonOptions opt;
  opt.log = [](const NewtonStep& s) {
    std::printf("iteration %d residual %.6e step %.6e\n", s.iteration, s.residual, s.step_length);
  };
  const PeriodSolution sol = solve_periods(spec.ansatz, spec.targets, opt, refinement);
  for (Eigen::Index j = 0; j < sol.x.size(); ++j)
    std::printf("x%ld %.15g %+.15g\n", long(j), sol.x(j).real(), sol.x(j).imag());
  std::printf("residual %.3e\niterations %d\n", sol.newton.residual, sol.newton.iterations);
  return 0;
}

int run_harmonic(const std::vector<double>& annulus, double at, const std::string& grid_path,
                 const std::string& source, const std::string& mark) {
  if (!annulus.empty()) {
    if (!grid_path.empty()) throw Usage("--annulus and --grid are exclusive");
    AnnulusDomain A{annulus[0], annulus[1], AnnulusDomain::Marked::Inner};
    std::printf("harmonic_measure %.15g\n", harmonic_measure_annulus(A, at));
    return 0;
  }
  if (grid_path.empty() || source.empty() || mark.empty())
    throw Usage("harmonic needs --annulus r R --at rho, or --grid FILE --source i,j --mark LABELS");
  const GridDomain G = load(grid_path, parse_grid);
  const auto p = numbers(source, 2, "--source");
  std::set<int> I;
  for (unsigned char c : mark) I.insert(c);
  std::printf("harmonic_measure %.15g\n",
              harmonic_measure_grid(G, static_cast<int>(p[0]), static_cast<int>(p[1]), I));
  return 0;
}

int run_density(const std::string& point, double eps, const std::string& frame_path, std::int64_t budget) {
  const auto u = numbers(point, 3, "--point");
  const EndFrame frame = load(frame_path, io::read_frame);
  const DensityCertificate c = density_query(Vec3(u[0], u[1], u[2]), eps, frame, budget);
  std::printf("direction %d\nindex %lld\nr_n %lld/%lld\ndistance %.6e\nepsilon %g\n", c.found.i + 1,
              static_cast<long long>(c.found.n), static_cast<long long>(c.found.r_n.p),
              static_cast<long long>(c.found.r_n.q), c.distance, c.epsilon);
  return 0;
}

int run_symmetry(const std::string& frame_path) {
  const EndFrame frame = load(frame_path, io::read_frame);
  // Reported before the frame check so degenerate triples still show it.
  const TranslationExclusion t = translation_exclusion(frame);
  std::printf("translation_excluded %s\ndeterminant %.12g\n", t.excluded ? "yes" : "no", t.determinant);
  frame.check();
  const auto isometries = symmetry_scan(frame);
  std::printf("general_position %s\nisometries %zu\n", general_position_check(frame) ? "yes" : "no",
              isometries.size());
  for (const auto& s : isometries)
    std::printf("  v -> (%+dv%d, %+dv%d, %+dv%d)\n", s.sign[0], s.pi[0] + 1, s.sign[1], s.pi[1] + 1, s.sign[2],
                s.pi[2] + 1);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal and space-filling minimal surfaces: Weierstrass data toolkit"};
  app.require_subcommand(1);

  std::string surface, curve_path, ansatz_path, grid, tree = "rows", output = "surface.obj", frame_path, point,
                                                   grid_path, source, mark;
  std::vector<std::string> approach, cycles, loops, targets;
  std::vector<double> annulus;
  double radius = 0.0, eps = 1e-2, at = 0.0;
  int refinement = -1, solve_refinement = 1;
  std::int64_t budget = 1'000'000;

  auto* validate_cmd = app.add_subcommand("validate", "Run the six membership checks on a surface file");
  validate_cmd->add_option("surface", surface, "Surface file")->required();

  auto* mesh_cmd = app.add_subcommand("mesh", "Sample the immersion on a grid and write OBJ");
  mesh_cmd->add_option("surface", surface, "Surface file")->required();
  mesh_cmd->add_option("--grid", grid, "polar:cx,cy,inner,outer,rows,cols or rect:x0,y0,x1,y1,rows,cols")->required();
  mesh_cmd->add_option("--approach", approach, "Intermediate z-vertex x,y from the basepoint (repeatable)");
  mesh_cmd->add_option("--tree", tree, "Path tree")->check(CLI::IsMember({"rows", "columns"}));
  mesh_cmd->add_option("-o,--output", output, "OBJ output path");

  auto* flux_cmd = app.add_subcommand("flux", "Flux Im of the period of F dz over cycles");
  flux_cmd->add_option("surface", surface, "Surface file")->required();
  flux_cmd->add_option("--cycle", cycles, "Period cycle id (repeatable); all cycles by default");
  flux_cmd->add_option("--loop", loops, "Circle cx,cy,r on the basepoint sheet (repeatable)");

  auto* curvature_cmd = app.add_subcommand("curvature", "Total curvature, numeric and -4 pi deg g");
  curvature_cmd->add_option("surface", surface, "Surface file")->required();
  curvature_cmd->add_option("--radius", radius, "Truncation radius; 0 chooses it adaptively");

  auto* periods_cmd = app.add_subcommand("periods", "Normalized period matrix of a curve");
  periods_cmd->add_option("curve", curve_path, "Curve file")->required();
  periods_cmd->add_option("--refinement", refinement, "Fixed Gauss refinement level; -1 is adaptive");

  auto* solve_cmd = app.add_subcommand("solve-periods", "Newton solve for prescribed periods");
  solve_cmd->add_option("ansatz", ansatz_path, "Ansatz file")->required();
  solve_cmd->add_option("--target", targets, "Full target re,im per cycle, overriding the file (repeatable)");
  solve_cmd->add_option("--refinement", solve_refinement, "Gauss refinement level");

  auto* harmonic_cmd = app.add_subcommand("harmonic", "Harmonic measure on an annulus or a grid domain");
  harmonic_cmd->add_option("--annulus", annulus, "Radii r R")->expected(2);
  harmonic_cmd->add_option("--at", at, "Evaluation radius for --annulus");
  harmonic_cmd->add_option("--grid", grid_path, "Grid mask file");
  harmonic_cmd->add_option("--source", source, "Interior node i,j");
  harmonic_cmd->add_option("--mark", mark, "Boundary labels carrying value 1");

  auto* density_cmd = app.add_subcommand("density", "Certificate that a point is near a planar end");
  density_cmd->add_option("--point", point, "Query point x,y,z")->required();
  density_cmd->add_option("--eps", eps, "Distance tolerance")->check(CLI::PositiveNumber);
  density_cmd->add_option("--frame", frame_path, "Frame file")->required();
  density_cmd->add_option("--budget", budget, "Largest enumeration index searched")->check(CLI::PositiveNumber);

  auto* symmetry_cmd = app.add_subcommand("symmetry", "Isometries preserving the signed frame");
  symmetry_cmd->add_option("--frame", frame_path, "Frame file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*validate_cmd) return run_validate(surface);
    if (*mesh_cmd) return run_mesh(surface, grid, approach, tree, output);
    if (*flux_cmd) return run_flux(surface, cycles, loops);
    if (*curvature_cmd) return run_curvature(surface, radius);
    if (*periods_cmd) return run_periods(curve_path, refinement);
    if (*solve_cmd) return run_solve_periods(ansatz_path, targets, solve_refinement);
    if (*harmonic_cmd) return run_harmonic(annulus, at, grid_path, source, mark);
    if (*density_cmd) return run_density(point, eps, frame_path, budget);
    if (*symmetry_cmd) return run_symmetry(frame_path);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kUsageError;
}
