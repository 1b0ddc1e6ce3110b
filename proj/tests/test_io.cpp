#include <doctest.h>

#include <sstream>

#include "minsurf/gallery.hpp"
#include "minsurf/io.hpp"

using namespace minsurf;

namespace {

std::string gallery_file(const std::string& name) { return io::read_file(MINSURF_SOURCE_DIR "/gallery/" + name); }

WeierstrassData surface(const std::string& text) {
  std::istringstream in(text);
  return io::read_surface(in);
}

std::string parse_error(const std::string& text) {
  try {
    surface(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("gallery files match the built-in surfaces") {
  for (const std::string& name : gallery::names()) {
    CAPTURE(name);
    const WeierstrassData a = surface(gallery_file(name));
    const WeierstrassData b = gallery::by_name(name);
    CHECK(a.signature.nu == b.signature.nu);
    CHECK(a.signature.k == b.signature.k);
    CHECK(a.signature.s == b.signature.s);
    CHECK(a.curve.polynomial() == b.curve.polynomial());
    for (int j = 0; j < 3; ++j) {
      CHECK(a.f[j].numerator() == b.f[j].numerator());
      CHECK(a.f[j].denominator() == b.f[j].denominator());
    }
    CHECK(a.translation == b.translation);

    // Writing and reading again is lossless.
    std::ostringstream out;
    io::write_surface(out, a);
    const WeierstrassData c = surface(out.str());
    for (int j = 0; j < 3; ++j) CHECK(c.f[j].numerator() == a.f[j].numerator());
  }
}

TEST_CASE("curve files") {
  std::istringstream in("# w^2 = z^3 - z\nform hyperelliptic\ncoeff 0 2 1 0\ncoeff 3 0 -1 0\ncoeff 1 0 1 0\n");
  const AlgebraicCurve C = io::read_curve(in);
  CHECK(C.form() == CurveForm::Hyperelliptic);
  CHECK(C.genus() == 1);

  std::ostringstream out;
  io::write_curve(out, C);
  std::istringstream back(out.str());
  CHECK(io::read_curve(back).polynomial() == C.polynomial());

  std::istringstream wrong("form rational\ncoeff 0 2 1 0\ncoeff 3 0 -1 0\ncoeff 1 0 1 0\n");
  CHECK_THROWS_AS(io::read_curve(wrong), Error);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(io::read_curve(empty), Error);
}

TEST_CASE("parse errors name the line") {
  const std::string base = "signature 0 1 1\ncoeff 0 1 1 0\ncoeff 2 0 -1 0\nf3 num 1 0 1 0\n";
  CHECK(parse_error(base + "wobble 1 2 3\n").find("line 5") != std::string::npos);
  CHECK(parse_error("signature 0 1\n" + base).find("line 1") != std::string::npos);
  CHECK(parse_error(base + "f2 num 0 0 x 0\n").find("line 5") != std::string::npos);
  CHECK(parse_error(base + "f4 num 0 0 1 0\n").find("line 5") != std::string::npos);
  CHECK_FALSE(parse_error("coeff 0 1 1 0\ncoeff 2 0 -1 0\nf3 num 1 0 1 0\n").empty());
}

TEST_CASE("ansatz files") {
  std::istringstream in(gallery_file("residue.ansatz"));
  const io::AnsatzSpec spec = io::read_ansatz(in);
  CHECK(spec.ansatz.mode == AnsatzMode::Linear);
  REQUIRE(spec.ansatz.cycles.size() == 1);
  CHECK(spec.ansatz.cycles.front().path.vertices.size() == 129);
  REQUIRE(spec.targets.size() == 1);
  CHECK(spec.targets.front().kind == TargetKind::Full);
  CHECK(std::abs(solve_periods(spec.ansatz, spec.targets).x(0) - 1.0) < 1e-10);

  std::istringstream canonical(
      "form hyperelliptic\ncoeff 0 2 1 0\ncoeff 3 0 -1 0\ncoeff 1 0 1 0\nmode exponential\n"
      "kappa num 0 0 1 0\nkappa den 0 1 1 0\nbasis 0 num 1 0 1 0\ncycle a1 canonical\ncycle b1 canonical\n"
      "target re 0 0\ntarget re 0 0\n");
  const io::AnsatzSpec e = io::read_ansatz(canonical);
  CHECK(e.ansatz.mode == AnsatzMode::Exponential);
  CHECK(e.ansatz.cycles.size() == 2);
  CHECK(e.targets.back().kind == TargetKind::RealPart);

  std::istringstream unknown("kappa num 0 0 1 0\ncycle c9 canonical\n");
  CHECK_THROWS_AS(io::read_ansatz(unknown), Error);
}

TEST_CASE("frames") {
  std::istringstream in(gallery_file("general.frame"));
  const EndFrame F = io::read_frame(in);
  CHECK_NOTHROW(F.check());
  CHECK(F.direction(1).isApprox(Vec3(1.0, 1.0, 0.0).normalized(), 1e-15));
  std::istringstream short_frame("1 0 0\n0 1 0\n");
  CHECK_THROWS_AS(io::read_frame(short_frame), Error);
}

TEST_CASE("validation reports") {
  std::ostringstream out;
  io::write_report(out, validate(gallery::catenoid()));
  const std::string text = out.str();
  CHECK(text.find("check conformality pass") != std::string::npos);
  CHECK(text.substr(text.size() - 13) == "verdict pass\n");

  WeierstrassData k2 = gallery::catenoid();
  k2.signature.k = 2;
  std::ostringstream bad;
  io::write_report(bad, validate(k2));
  CHECK(bad.str().find("check conformality fail") != std::string::npos);
  CHECK(bad.str().find("verdict fail") != std::string::npos);

  CHECK_THROWS_AS(io::read_file("/nonexistent/surface"), Error);
}
