#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwlsep/lab.hpp"
#include "pwlsep/model.hpp"
#include "pwlsep/solver.hpp"

namespace pwlsep {

using json = nlohmann::json;

// Instance files
//
//   JSON: {"dimension": d, "points": [["1", "-3/4"], ...], "labels": ["B", "R", ...],
//          "blue_groups": nB, "red_groups": nR}
//         Points given as {"label": ..., "coords": [...]} objects are read too.
//   CSV:  one point per line, "label,x1,...,xd"; '#' starts a comment.
//         Budgets are not stored in CSV and default to 1/1.
//
// Coordinates may be JSON strings (exact rationals or decimals) or JSON
// numbers; non-integral numbers are taken through their decimal text.

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

Instance parse_instance_csv(std::istream& in, std::size_t blue_groups = 1, std::size_t red_groups = 1);
void write_instance_csv(const Instance& inst, std::ostream& out);

/// Rational as text, or as a JSON number when `as_float`.
json number_json(const Rational& v, bool as_float);

json hyperplane_json(const Hyperplane& h, bool as_float);

/// Solve result. Wall-clock time lives under "timing" so the rest of the
/// document is byte-stable across runs.
json result_to_json(const Instance& inst, const SolveResult& r, const SolveOptions& opt, bool as_float = false);

/// {provenance, coeffs, rhs, violated_by}. `violated_by` is the assignment
/// (list of z-names) that the cut excludes, when one is known.
json cut_to_json(const Instance& inst, const ZInequality& cut,
                 const std::optional<Assignment>& violated_by = std::nullopt, bool as_float = false);

/// Assignment putting each point with a positive coefficient in its first
/// such group, when that assignment violates the cut.
std::optional<Assignment> cut_witness(const Instance& inst, const ZInequality& cut);

json facet_report_json(const Instance& inst, const FacetReport& r);
json suite_report_json(const SuiteReport& rep);
std::string suite_report_text(const SuiteReport& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pwlsep
