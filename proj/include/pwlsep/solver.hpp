#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pwlsep/cuts.hpp"
#include "pwlsep/model.hpp"

namespace pwlsep {

struct SolveOptions {
  double time_limit = 0;        // seconds, 0 = none
  std::size_t node_limit = 0;   // 0 = none
  CutFamilies families;         // separated families; projection cuts are always on
  std::size_t workers = 1;
  std::uint64_t seed = 0;       // recorded only
  ObjectiveForm objective = ObjectiveForm::MaximizeAssigned;
  bool symmetry_fixing = true;
  bool float_lp = true;
  std::optional<Rational> big_m;  // default: BigMConfig::defaults
  std::size_t root_rounds = 25;
  std::size_t node_rounds = 5;
  std::size_t batch_size = 8;
};

enum class SolveStatus { Optimal, Incomplete };

const char* to_string(SolveStatus s);

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t lp_solves = 0;
  std::size_t exact_fallbacks = 0;
  std::size_t separation_rounds = 0;
  std::size_t integer_checks = 0;
  std::size_t incumbent_updates = 0;
  std::map<CutFamily, std::size_t> cuts_by_family;
  double seconds = 0;  // wall clock, excluded from determinism checks
};

/// A projection cut together with the integer point that produced it.
struct FarkasEvent {
  Assignment spawning;
  ZInequality cut;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  Assignment incumbent;
  std::size_t assigned = 0;
  IndexList outliers;
  std::vector<PairSeparator> separators;
  Rational upper_bound;  // on the number of assigned points
  Rational gap;          // upper_bound − assigned
  Rational big_m;
  SolveStats stats;
  std::vector<ZInequality> pool;
  std::vector<FarkasEvent> farkas_log;
};

/// Branch and cut over the z-variables. The relaxation keeps assignment
/// rows, z bounds and the cut pool; integer points are checked with
/// is_feasible and cut off by projection cuts when infeasible.
SolveResult solve(const Instance& inst, const SolveOptions& options = {});

/// Exhaustive reference optimum (n ≤ 24 z-variables).
SolveResult solve_enumerative(const Instance& inst);

/// Unassigns the heaviest certificate point of the first failing pair until
/// the assignment is feasible.
Assignment repair_feasibility(const Instance& inst, Assignment start);

/// Adds outliers back one at a time (point order, then group order) while
/// feasibility is kept.
Assignment greedy_extend(const Instance& inst, Assignment start, FeasibilityOracle& oracle);

}  // namespace pwlsep
