#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwlsep/cuts.hpp"
#include "pwlsep/model.hpp"

namespace pwlsep {

/// Every feasible 0/1 assignment vector of an instance, as bit masks over
/// the z-variable ids (bit v = z_v), sorted ascending.
struct ZPolytope {
  std::size_t n = 0;
  std::vector<std::uint32_t> points;
};

constexpr std::size_t kMaxEnumeratedZ = 24;

/// Exhaustive enumeration; refuses (PreconditionError) above 24 variables.
/// Work is split into prefix blocks over `workers` threads.
ZPolytope enumerate_feasible(const Instance& inst, std::size_t workers = 1);

/// Affine dimension of a set of 0/1 vectors (−1 when empty). Rank is taken
/// modulo two primes whose product exceeds the Hadamard bound for n ≤ 24.
int affine_dimension(const std::vector<std::uint32_t>& points, std::size_t n);

/// Same quantity by Gaussian elimination over the rationals.
int affine_dimension_exact(const std::vector<std::uint32_t>& points, std::size_t n);

int polytope_dimension(const ZPolytope& zp);

enum class Verdict { Facet, ProperFaceNotFacet, NotValid, NotSupporting };

const char* to_string(Verdict v);

struct FacetReport {
  ZInequality inequality;
  bool valid = false;
  std::optional<std::uint32_t> violating;
  std::size_t tight_count = 0;
  int face_dimension = -1;
  int polytope_dimension = -1;
  Verdict verdict = Verdict::NotValid;
  std::string polytope = "z-projection (0/1 enumeration)";
};

FacetReport check_inequality(const ZPolytope& zp, const ZInequality& q);
FacetReport check_inequality(const ZPolytope& zp, const ZInequality& q, int polytope_dim);

/// Assignment rows Σ_g z_pg ≤ 1 and bounds −z_v ≤ 0 as z-inequalities.
std::vector<ZInequality> model_row_inequalities(const Instance& inst);

// ---------------------------------------------------------- theorem suite

struct TheoremCase {
  std::string theorem;
  std::uint64_t seed = 0;
  std::size_t num_z = 0;
  bool applicable = true;      // the theorem makes a claim about this case
  bool expected_facet = false;
  FacetReport report;
  bool contradiction = false;
  std::string note;
  std::optional<Instance> instance;
};

struct TheoremSummary {
  std::string theorem;
  std::size_t instances = 0;
  std::size_t applicable = 0;
  std::size_t facets = 0;
  std::size_t contradictions = 0;
};

struct SuiteReport {
  std::vector<TheoremCase> cases;
  std::vector<TheoremSummary> summary;
  std::size_t contradictions = 0;
  double seconds = 0;
};

/// Targeted families, each aimed at one direction of one facet statement.
const std::vector<std::string>& theorem_names();

/// Runs `instances` seeds (base_seed, base_seed+1, ...) per theorem.
SuiteReport theorem_suite(const std::vector<std::string>& theorems, std::size_t instances, std::uint64_t base_seed = 1,
                          std::size_t workers = 1);

/// One case of a targeted family; exposed for tests.
TheoremCase run_theorem_case(const std::string& theorem, std::uint64_t seed, std::size_t workers = 1);

}  // namespace pwlsep
