#include "minsurf/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace minsurf::io {

namespace {

struct Line {
  int number = 0;
  std::string key;
  std::istringstream rest;
};

[[noreturn]] void fail(const Line& l, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(l.number) + " (" + l.key + "): " + what);
}

template <typename... T>
void fields(Line& l, T&... out) {
  if (!((l.rest >> out) && ...)) fail(l, "missing or malformed field");
}

void expect_end(Line& l) {
  std::string extra;
  if (l.rest >> extra) fail(l, "unexpected trailing field '" + extra + "'");
}

/// Calls `handle` on every non-blank line with comments stripped.
template <typename F>
void for_each_line(std::istream& in, F&& handle) {
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream s(raw);
    Line l;
    l.number = number;
    if (!(s >> l.key)) continue;
    std::string rest;
    std::getline(s, rest);
    l.rest.str(rest);
    handle(l);
  }
}

/// Coefficient accumulator for a Poly2.
struct Terms {
  std::map<std::pair<int, int>, cplx> c;
  bool any = false;

  void add(Line& l) {
    int i = 0, j = 0;
    double re = 0.0, im = 0.0;
    fields(l, i, j, re, im);
    expect_end(l);
    if (i < 0 || j < 0) fail(l, "negative exponent");
    c[{i, j}] += cplx(re, im);
    any = true;
  }
  Poly2 build(const Poly2& fallback = Poly2::constant(1.0)) const {
    if (!any) return fallback;
    int di = 0, dj = 0;
    for (const auto& [ij, v] : c) {
      di = std::max(di, ij.first);
      dj = std::max(dj, ij.second);
    }
    Poly2::Coeffs a = Poly2::Coeffs::Zero(di + 1, dj + 1);
    for (const auto& [ij, v] : c) a(ij.first, ij.second) = v;
    return Poly2(std::move(a));
  }
};

struct Fraction {
  Terms num, den;
  bool any() const { return num.any || den.any; }
  RationalOnCurve build() const { return {num.build(Poly2()), den.build()}; }

  void add(Line& l) {
    std::string part;
    fields(l, part);
    if (part == "num") num.add(l);
    else if (part == "den") den.add(l);
    else fail(l, "expected 'num' or 'den'");
  }
};

struct CurveReader {
  Terms terms;
  std::optional<CurveForm> form;

  bool accept(Line& l) {
    if (l.key == "coeff") {
      terms.add(l);
    } else if (l.key == "form") {
      std::string name;
      fields(l, name);
      expect_end(l);
      if (name == "rational") form = CurveForm::Rational;
      else if (name == "hyperelliptic") form = CurveForm::Hyperelliptic;
      else if (name == "general") form = CurveForm::General;
      else fail(l, "unknown curve form '" + name + "'");
    } else {
      return false;
    }
    return true;
  }

  std::optional<AlgebraicCurve> build() const {
    if (!terms.any) {
      if (form == CurveForm::Rational) return AlgebraicCurve::rational();
      return std::nullopt;
    }
    AlgebraicCurve curve = AlgebraicCurve::from_polynomial(terms.build());
    if (form && *form != curve.form())
      throw Error(ErrorCode::Parse, "declared form '" + std::string(to_string(*form)) +
                                        "' but the polynomial has form '" + std::string(to_string(curve.form())) + "'");
    return curve;
  }
};

void write_terms(std::ostream& out, const std::string& prefix, const Poly2& p) {
  for (int i = 0; i <= p.deg_z(); ++i)
    for (int j = 0; j <= p.deg_w(); ++j)
      if (const cplx c = p.coeff(i, j); c != 0.0)
        out << prefix << ' ' << i << ' ' << j << ' ' << c.real() << ' ' << c.imag() << '\n';
}

Cycle circle_cycle(const AlgebraicCurve& curve, const std::string& id, cplx centre, double r, int sheet) {
  constexpr int kSides = 128;
  Cycle c;
  c.id = id;
  for (int k = 0; k <= kSides; ++k) c.path.vertices.push_back(centre + r * std::polar(1.0, 2.0 * kPi * k / kSides));
  c.path.vertices.back() = c.path.vertices.front();
  const cplx z0 = c.path.vertices.front();
  const std::vector<cplx> fiber = curve.fiber(z0);
  if (sheet < 0 || sheet >= static_cast<int>(fiber.size()))
    throw Error(ErrorCode::Parse, "cycle '" + id + "': sheet index out of range");
  c.path.start = lift(curve, z0, fiber[sheet]);
  return c;
}

}  // namespace

AlgebraicCurve read_curve(std::istream& in) {
  CurveReader reader;
  for_each_line(in, [&](Line& l) {
    if (!reader.accept(l)) fail(l, "unknown keyword");
  });
  auto curve = reader.build();
  if (!curve) throw Error(ErrorCode::Parse, "curve file has no coefficients");
  return *curve;
}

void write_curve(std::ostream& out, const AlgebraicCurve& curve) {
  const auto precision = out.precision(17);
  out << "form " << to_string(curve.form()) << '\n';
  write_terms(out, "coeff", curve.polynomial());
  out.precision(precision);
}

WeierstrassData read_surface(std::istream& in) {
  CurveReader curve;
  std::optional<SurfaceSignature> signature;
  std::array<Fraction, 3> f;
  Vec3 translation = Vec3::Zero();
  for_each_line(in, [&](Line& l) {
    if (curve.accept(l)) return;
    if (l.key == "signature") {
      SurfaceSignature s;
      fields(l, s.nu, s.k, s.s);
      expect_end(l);
      signature = s;
    } else if (l.key == "f1" || l.key == "f2" || l.key == "f3") {
      f[l.key[1] - '1'].add(l);
    } else if (l.key == "translation") {
      fields(l, translation.x(), translation.y(), translation.z());
      expect_end(l);
    } else {
      fail(l, "unknown keyword");
    }
  });
  if (!signature) throw Error(ErrorCode::Parse, "surface file has no signature line");
  auto c = curve.build();
  if (!c) throw Error(ErrorCode::Parse, "surface file has no curve coefficients");
  for (int k = 0; k < 3; ++k)
    if (!f[k].num.any) throw Error(ErrorCode::Parse, "surface file has no numerator for f" + std::to_string(k + 1));
  return {*signature, *c, {f[0].build(), f[1].build(), f[2].build()}, translation};
}

void write_surface(std::ostream& out, const WeierstrassData& W) {
  const auto precision = out.precision(17);
  out << "signature " << W.signature.nu << ' ' << W.signature.k << ' ' << W.signature.s << '\n';
  write_curve(out, W.curve);
  out.precision(17);
  for (int k = 0; k < 3; ++k) {
    const std::string name = "f" + std::to_string(k + 1);
    write_terms(out, name + " num", W.f[k].numerator());
    write_terms(out, name + " den", W.f[k].denominator());
  }
  out << "translation " << W.translation.x() << ' ' << W.translation.y() << ' ' << W.translation.z() << '\n';
  out.precision(precision);
}

AnsatzSpec read_ansatz(std::istream& in) {
  CurveReader curve;
  AnsatzSpec spec;
  Fraction kappa, offset;
  std::map<int, Fraction> basis;
  struct PendingCycle {
    std::string id;
    bool canonical = false;
    cplx centre;
    double r = 0.0;
    int sheet = 0;
  };
  std::vector<PendingCycle> cycles;

  for_each_line(in, [&](Line& l) {
    if (curve.accept(l)) return;
    if (l.key == "mode") {
      std::string m;
      fields(l, m);
      expect_end(l);
      if (m == "linear") spec.ansatz.mode = AnsatzMode::Linear;
      else if (m == "exponential") spec.ansatz.mode = AnsatzMode::Exponential;
      else fail(l, "mode must be 'linear' or 'exponential'");
    } else if (l.key == "kappa") {
      kappa.add(l);
    } else if (l.key == "offset") {
      offset.add(l);
    } else if (l.key == "basis") {
      int index = 0;
      fields(l, index);
      basis[index].add(l);
    } else if (l.key == "cycle") {
      PendingCycle c;
      std::string kind;
      fields(l, c.id, kind);
      if (kind == "canonical") {
        c.canonical = true;
      } else if (kind == "circle") {
        double x = 0.0, y = 0.0;
        fields(l, x, y, c.r);
        c.centre = {x, y};
        if (!(c.r > 0.0)) fail(l, "radius must be positive");
        if (int s = 0; l.rest >> s) c.sheet = s;
      } else {
        fail(l, "cycle kind must be 'circle' or 'canonical'");
      }
      expect_end(l);
      cycles.push_back(c);
    } else if (l.key == "target") {
      std::string kind;
      double re = 0.0, im = 0.0;
      fields(l, kind, re, im);
      expect_end(l);
      PeriodTarget t{{re, im}, TargetKind::Full};
      if (kind == "re") t.kind = TargetKind::RealPart;
      else if (kind == "im") t.kind = TargetKind::ImagPart;
      else if (kind != "full") fail(l, "target kind must be 'full', 're' or 'im'");
      spec.targets.push_back(t);
    } else {
      fail(l, "unknown keyword");
    }
  });

  if (auto c = curve.build()) spec.ansatz.curve = *c;
  if (!kappa.any()) throw Error(ErrorCode::Parse, "ansatz file has no kappa");
  spec.ansatz.kappa = kappa.build();
  spec.ansatz.offset = offset.any() ? offset.build() : RationalOnCurve();
  for (const auto& [index, f] : basis) spec.ansatz.basis.push_back(f.build());
  if (spec.ansatz.basis.empty()) throw Error(ErrorCode::Parse, "ansatz file has no basis functions");

  std::vector<Cycle> canonical;
  for (const PendingCycle& p : cycles) {
    if (!p.canonical) {
      spec.ansatz.cycles.push_back(circle_cycle(spec.ansatz.curve, p.id, p.centre, p.r, p.sheet));
      continue;
    }
    if (canonical.empty()) canonical = canonical_cycles(spec.ansatz.curve);
    auto it = std::find_if(canonical.begin(), canonical.end(), [&](const Cycle& c) { return c.id == p.id; });
    if (it == canonical.end()) throw Error(ErrorCode::Parse, "no canonical cycle named '" + p.id + "'");
    spec.ansatz.cycles.push_back(*it);
  }
  if (spec.targets.size() != spec.ansatz.cycles.size())
    throw Error(ErrorCode::Parse, "ansatz file needs exactly one target per cycle");
  return spec;
}

EndFrame read_frame(std::istream& in) {
  EndFrame frame;
  int row = 0;
  for_each_line(in, [&](Line& l) {
    if (row == 3) fail(l, "frame has more than three directions");
    // The key is the first coordinate.
    std::istringstream first(l.key);
    double x = 0.0, y = 0.0, z = 0.0;
    if (!(first >> x) || !first.eof()) fail(l, "expected a decimal");
    fields(l, y, z);
    expect_end(l);
    frame.v.col(row++) = Vec3(x, y, z);
  });
  if (row != 3) throw Error(ErrorCode::Parse, "frame needs three directions");
  return frame;
}

void write_report(std::ostream& out, const ValidationReport& report) {
  const auto precision = out.precision(6);
  for (const CheckResult& c : report.checks) {
    out << "check " << c.name << ' ' << to_string(c.status) << ' ' << c.residual;
    if (!c.detail.empty()) out << ' ' << std::quoted(c.detail);
    out << '\n';
  }
  out << "verdict " << (report.passed() ? "pass" : "fail") << '\n';
  out.precision(precision);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace minsurf::io
