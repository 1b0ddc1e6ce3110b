#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minsurf/curve.hpp"
#include "minsurf/exotica.hpp"
#include "minsurf/periods.hpp"
#include "minsurf/wdata.hpp"

namespace minsurf::io {

// All formats are line based: a keyword followed by whitespace separated
// fields. '#' starts a comment, blank lines are ignored, and malformed input
// throws Error(Parse) naming the line.
//
// Curve:
//   form rational|hyperelliptic|general     optional; checked when present
//   coeff <i> <j> <re> <im>                 adds a z^i w^j term
// Surface: the curve lines plus
//   signature <nu> <k> <s>
//   f1|f2|f3 num|den <i> <j> <re> <im>      denominators default to 1
//   translation <x> <y> <z>
// Ansatz: the curve lines (default: rational model) plus
//   mode linear|exponential
//   kappa|offset num|den <i> <j> <re> <im>
//   basis <index> num|den <i> <j> <re> <im>
//   cycle <id> circle <cx> <cy> <r> [sheet]  counter-clockwise, 128 sides
//   cycle <id> canonical                     from canonical_cycles
//   target full|re|im <re> <im>              one per cycle, in cycle order
// Frame: three lines of three decimals, the directions v1, v2, v3.

AlgebraicCurve read_curve(std::istream& in);
void write_curve(std::ostream& out, const AlgebraicCurve& curve);

WeierstrassData read_surface(std::istream& in);
void write_surface(std::ostream& out, const WeierstrassData& W);

struct AnsatzSpec {
  PeriodAnsatz ansatz;
  std::vector<PeriodTarget> targets;
};

AnsatzSpec read_ansatz(std::istream& in);

/// Not checked; call EndFrame::check() where unit length and independence
/// are required.
EndFrame read_frame(std::istream& in);

/// One "check <name> <status> <residual> ["detail"]" line per check, then
/// "verdict pass|fail".
void write_report(std::ostream& out, const ValidationReport& report);

/// Whole contents of `path`; throws Error(InvalidArgument) when unreadable.
std::string read_file(const std::string& path);

}  // namespace minsurf::io
