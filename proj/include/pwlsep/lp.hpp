#pragma once

#include <optional>
#include <vector>

#include "pwlsep/rational.hpp"

namespace pwlsep {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// maximize objective·x subject to rows and column bounds.
///
/// Strict inequalities are never represented; callers encode strictness with
/// explicit unit offsets in the right-hand side.
struct LinearProgram {
  std::vector<RationalVector> rows;
  std::vector<RowSense> senses;
  RationalVector rhs;
  RationalVector objective;  // empty or all-zero means pure feasibility
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  explicit LinearProgram(std::size_t num_columns = 0);

  std::size_t num_columns() const { return lower.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(RationalVector coeffs, RowSense sense, Rational rhs_value);
  void set_nonnegative(std::size_t column) { lower[column] = Rational(0); }

  /// Throws InputError on dimension mismatch or crossed bounds.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Result of solve_exact.
///
/// For Infeasible, `dual_certificate` holds one nonnegative multiplier per
/// inequality row (free for equality rows). Each row is first oriented as
/// "≤" (≥ rows are negated); the weighted sum c·x ≤ β then satisfies
/// min{c·x : x within the column bounds} > β, which verify_farkas re-checks
/// from scratch.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  RationalVector primal;  // optimal point, or a feasible point when Unbounded
  RationalVector ray;     // improving direction when Unbounded
  Rational objective_value;
  RationalVector dual_certificate;
};

LpOutcome solve_exact(const LinearProgram& lp);

enum class FloatLpStatus { Optimal, Infeasible, Unbounded, NumericFailure };

struct FloatLpOutcome {
  FloatLpStatus status = FloatLpStatus::NumericFailure;
  std::vector<double> primal;
  std::vector<double> ray;
  double objective_value = 0.0;
  std::vector<double> dual_certificate;
};

/// Double-precision variant with the same contract up to `tol`. Returns
/// NumericFailure instead of guessing when pivoting stalls or the final
/// point fails its residual check.
FloatLpOutcome solve_float(const LinearProgram& lp, double tol = 1e-9);

/// Primal feasibility of `x` by exact substitution.
bool verify_primal(const LinearProgram& lp, const RationalVector& x);

/// Independent re-check of an infeasibility certificate (see LpOutcome).
bool verify_farkas(const LinearProgram& lp, const RationalVector& y);

}  // namespace pwlsep
