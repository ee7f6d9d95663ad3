#include "pwlsep/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace pwlsep {

LinearProgram::LinearProgram(std::size_t num_columns)
    : objective(num_columns, Rational(0)), lower(num_columns), upper(num_columns) {}

void LinearProgram::add_row(RationalVector coeffs, RowSense sense, Rational rhs_value) {
  if (coeffs.size() != num_columns()) {
    throw InputError("row has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                     std::to_string(num_columns()));
  }
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(std::move(rhs_value));
}

void LinearProgram::validate() const {
  const std::size_t n = num_columns();
  if (upper.size() != n) throw InputError("bound vectors differ in length");
  if (!objective.empty() && objective.size() != n) throw InputError("objective length mismatch");
  if (senses.size() != rows.size() || rhs.size() != rows.size()) {
    throw InputError("row, sense and rhs counts differ");
  }
  for (const auto& row : rows) {
    if (row.size() != n) throw InputError("row length mismatch");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lower[j] && upper[j] && *lower[j] > *upper[j]) {
      throw InputError("column " + std::to_string(j) + " has lower bound above upper bound");
    }
  }
}

namespace {

// Equality system E·w = e, w ≥ 0, obtained from the user LP by shifting and
// splitting columns, appending upper-bound rows and adding slacks. Row
// signs are flipped so that e ≥ 0.
struct StandardForm {
  struct Term {
    std::size_t column;
    int coef;  // ±1
  };
  std::vector<Rational> offset;            // per user column
  std::vector<std::vector<Term>> expand;   // per user column
  std::size_t num_shifted = 0;             // columns before slacks
  std::size_t num_slacks = 0;
  std::size_t num_user_rows = 0;
  std::vector<RationalVector> matrix;      // rows × (num_shifted + num_slacks)
  RationalVector rhs;
  std::vector<int> flip;                   // +1 / -1 applied to make rhs ≥ 0
  std::vector<long> slack_column;          // -1 for equality rows
  RationalVector cost;                     // minimisation cost over w
};

StandardForm to_standard_form(const LinearProgram& lp) {
  StandardForm sf;
  const std::size_t n = lp.num_columns();
  sf.offset.assign(n, Rational(0));
  sf.expand.resize(n);

  std::vector<std::pair<std::size_t, Rational>> range_rows;  // shifted column, width
  std::size_t next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& lo = lp.lower[j];
    const auto& up = lp.upper[j];
    if (lo) {
      sf.offset[j] = *lo;
      sf.expand[j].push_back({next, 1});
      if (up) range_rows.emplace_back(next, *up - *lo);
      ++next;
    } else if (up) {
      sf.offset[j] = *up;
      sf.expand[j].push_back({next++, -1});
    } else {
      sf.expand[j].push_back({next++, 1});
      sf.expand[j].push_back({next++, -1});
    }
  }
  sf.num_shifted = next;
  sf.num_user_rows = lp.num_rows();

  std::vector<RationalVector> rows;
  std::vector<RowSense> senses;
  RationalVector rhs;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    RationalVector row(sf.num_shifted, Rational(0));
    Rational b = lp.rhs[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = lp.rows[i][j];
      if (sgn(a) == 0) continue;
      b -= a * sf.offset[j];
      for (const auto& t : sf.expand[j]) row[t.column] += t.coef > 0 ? a : Rational(-a);
    }
    rows.push_back(std::move(row));
    senses.push_back(lp.senses[i]);
    rhs.push_back(std::move(b));
  }
  for (const auto& [col, width] : range_rows) {
    RationalVector row(sf.num_shifted, Rational(0));
    row[col] = 1;
    rows.push_back(std::move(row));
    senses.push_back(RowSense::LessEqual);
    rhs.push_back(width);
  }

  std::size_t slacks = 0;
  for (auto s : senses) slacks += s != RowSense::Equal;
  sf.num_slacks = slacks;
  const std::size_t width = sf.num_shifted + slacks;
  std::size_t slack_at = sf.num_shifted;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RationalVector row = std::move(rows[i]);
    row.resize(width, Rational(0));
    long slack_col = -1;
    if (senses[i] != RowSense::Equal) {
      slack_col = static_cast<long>(slack_at);
      row[slack_at++] = senses[i] == RowSense::LessEqual ? 1 : -1;
    }
    int f = sgn(rhs[i]) < 0 ? -1 : 1;
    if (f < 0) {
      for (auto& v : row) v = -v;
      rhs[i] = -rhs[i];
    }
    sf.matrix.push_back(std::move(row));
    sf.rhs.push_back(rhs[i]);
    sf.flip.push_back(f);
    sf.slack_column.push_back(slack_col);
  }

  sf.cost.assign(width, Rational(0));
  if (!lp.objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(lp.objective[j]) == 0) continue;
      for (const auto& t : sf.expand[j]) {
        // maximise c·x  ==  minimise -c·x
        sf.cost[t.column] += t.coef > 0 ? Rational(-lp.objective[j]) : lp.objective[j];
      }
    }
  }
  return sf;
}

inline double convert(const Rational& r, double*) { return r.get_d(); }
inline Rational convert(const Rational& r, Rational*) { return r; }

template <class T>
struct Sign {
  double tol = 0.0;
  int operator()(const T& v) const {
    if constexpr (std::is_same_v<T, Rational>) {
      return sgn(v);
    } else {
      return v > tol ? 1 : (v < -tol ? -1 : 0);
    }
  }
};

// Dense tableau simplex with Bland's rule.
template <class T>
class Tableau {
 public:
  enum class Result { Optimal, Unbounded, IterationLimit };

  Tableau(const StandardForm& sf, double tol) : sign_{tol} {
    rows_ = sf.matrix.size();
    const std::size_t width = sf.num_shifted + sf.num_slacks;
    structural_ = width;
    // One artificial per row whose slack cannot start in the basis.
    std::vector<long> artificial_of(rows_, -1);
    std::size_t artificials = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      long s = sf.slack_column[i];
      bool slack_ok = s >= 0 && sgn(sf.matrix[i][static_cast<std::size_t>(s)]) > 0;
      if (!slack_ok) artificial_of[i] = static_cast<long>(width + artificials++);
    }
    cols_ = width + artificials;
    a_.assign(rows_, std::vector<T>(cols_ + 1, T(0)));
    basis_.resize(rows_);
    initial_basic_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        if (sgn(sf.matrix[i][j]) != 0) a_[i][j] = convert(sf.matrix[i][j], static_cast<T*>(nullptr));
      }
      a_[i][cols_] = convert(sf.rhs[i], static_cast<T*>(nullptr));
      std::size_t b = artificial_of[i] >= 0 ? static_cast<std::size_t>(artificial_of[i])
                                             : static_cast<std::size_t>(sf.slack_column[i]);
      a_[i][b] = T(1);
      basis_[i] = b;
      initial_basic_[i] = b;
    }
    allowed_.assign(cols_, true);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_artificial(std::size_t j) const { return j >= structural_; }

  void price(const std::vector<T>& cost) {
    cost_ = cost;
    d_.assign(cols_ + 1, T(0));
    for (std::size_t j = 0; j < cols_; ++j) d_[j] = cost[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const T& cb = cost[basis_[i]];
      if (sign_(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sign_(a_[i][j]) != 0) d_[j] -= cb * a_[i][j];
      }
    }
  }

  Result run(std::size_t max_iterations) {
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed_[j] && sign_(d_[j]) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return Result::Optimal;

      std::size_t leave = rows_;
      T best{};
      for (std::size_t i = 0; i < rows_; ++i) {
        if (sign_(a_[i][entering]) <= 0) continue;
        T ratio = a_[i][cols_] / a_[i][entering];
        if (leave == rows_) {
          leave = i;
          best = ratio;
          continue;
        }
        int cmp = sign_(T(ratio - best));
        if (cmp < 0 || (cmp == 0 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_) {
        unbounded_column_ = entering;
        return Result::Unbounded;
      }
      pivot(leave, entering);
    }
    return Result::IterationLimit;
  }

  void pivot(std::size_t r, std::size_t c) {
    T p = a_[r][c];
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sign_(a_[r][j]) != 0) a_[r][j] /= p;
    }
    a_[r][c] = T(1);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      T f = a_[i][c];
      if (sign_(f) == 0) {
        a_[i][c] = T(0);
        continue;
      }
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sign_(a_[r][j]) != 0) a_[i][j] -= f * a_[r][j];
      }
      a_[i][c] = T(0);
    }
    T f = d_[c];
    if (sign_(f) != 0) {
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sign_(a_[r][j]) != 0) d_[j] -= f * a_[r][j];
      }
    }
    d_[c] = T(0);
    basis_[r] = c;
  }

  // After phase 1 with zero infeasibility: pivot basic artificials out on
  // any non-artificial column; rows without one are redundant.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < structural_; ++j) {
        if (sign_(a_[i][j]) != 0) {
          pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = structural_; j < cols_; ++j) allowed_[j] = false;
  }

  // -(phase objective) is stored in d_[cols_]
  T objective() const { return T(-d_[cols_]); }

  /// Row duals π = c_B B⁻¹, read from the columns that formed the initial
  /// identity basis.
  std::vector<T> row_duals() const {
    std::vector<T> pi(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::size_t col = initial_basic_[i];
      pi[i] = cost_[col] - d_[col];
    }
    return pi;
  }

  std::vector<T> solution() const {
    std::vector<T> w(cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) w[basis_[i]] = a_[i][cols_];
    return w;
  }

  std::vector<T> ray() const {
    std::vector<T> dir(cols_, T(0));
    dir[unbounded_column_] = T(1);
    for (std::size_t i = 0; i < rows_; ++i) dir[basis_[i]] = T(-a_[i][unbounded_column_]);
    return dir;
  }

 private:
  Sign<T> sign_;
  std::size_t rows_ = 0, cols_ = 0, structural_ = 0;
  std::vector<std::vector<T>> a_;
  std::vector<T> d_;
  std::vector<T> cost_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> initial_basic_;
  std::vector<bool> allowed_;
  std::size_t unbounded_column_ = 0;
};

template <class T>
std::vector<T> to_user_point(const StandardForm& sf, const std::vector<T>& w, bool homogeneous) {
  std::vector<T> x(sf.offset.size(), T(0));
  for (std::size_t j = 0; j < x.size(); ++j) {
    T v = homogeneous ? T(0) : convert(sf.offset[j], static_cast<T*>(nullptr));
    for (const auto& t : sf.expand[j]) {
      if (t.coef > 0) v += w[t.column];
      else v -= w[t.column];
    }
    x[j] = v;
  }
  return x;
}

// Multipliers on the user rows in the "oriented as ≤" convention.
template <class T>
std::vector<T> user_certificate(const LinearProgram& lp, const StandardForm& sf, const std::vector<T>& pi) {
  std::vector<T> y(sf.num_user_rows, T(0));
  for (std::size_t i = 0; i < sf.num_user_rows; ++i) {
    // E-row multiplier is -π (phase 1 minimises); undo the rhs flip.
    T m = T(-pi[i]);
    if (sf.flip[i] < 0) m = T(-m);
    y[i] = lp.senses[i] == RowSense::GreaterEqual ? T(-m) : m;
  }
  return y;
}

template <class T>
std::vector<T> cost_vector(const StandardForm& sf, std::size_t cols, bool phase_one, std::size_t structural) {
  std::vector<T> c(cols, T(0));
  if (phase_one) {
    for (std::size_t j = structural; j < cols; ++j) c[j] = T(1);
  } else {
    for (std::size_t j = 0; j < structural; ++j) c[j] = convert(sf.cost[j], static_cast<T*>(nullptr));
  }
  return c;
}

Rational objective_of(const LinearProgram& lp, const RationalVector& x) {
  if (lp.objective.empty()) return Rational(0);
  return dot(lp.objective, x);
}

}  // namespace

LpOutcome solve_exact(const LinearProgram& lp) {
  lp.validate();
  StandardForm sf = to_standard_form(lp);
  Tableau<Rational> tab(sf, 0.0);
  const std::size_t structural = sf.num_shifted + sf.num_slacks;
  const auto unlimited = std::numeric_limits<std::size_t>::max();

  tab.price(cost_vector<Rational>(sf, tab.cols(), true, structural));
  tab.run(unlimited);
  LpOutcome out;
  if (sgn(tab.objective()) > 0) {
    out.status = LpStatus::Infeasible;
    out.dual_certificate = user_certificate(lp, sf, tab.row_duals());
    if (!verify_farkas(lp, out.dual_certificate)) {
      throw std::logic_error("solve_exact: extracted Farkas certificate failed verification");
    }
    return out;
  }
  tab.drive_out_artificials();
  tab.price(cost_vector<Rational>(sf, tab.cols(), false, structural));
  auto result = tab.run(unlimited);
  out.primal = to_user_point(sf, tab.solution(), false);
  out.objective_value = objective_of(lp, out.primal);
  if (result == Tableau<Rational>::Result::Unbounded) {
    out.status = LpStatus::Unbounded;
    out.ray = to_user_point(sf, tab.ray(), true);
  } else {
    out.status = LpStatus::Optimal;
  }
  return out;
}

FloatLpOutcome solve_float(const LinearProgram& lp, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("solve_float requires a positive tolerance");
  lp.validate();
  StandardForm sf = to_standard_form(lp);
  Tableau<double> tab(sf, tol);
  const std::size_t structural = sf.num_shifted + sf.num_slacks;
  const std::size_t cap = 50 * (tab.rows() + tab.cols()) + 1000;

  FloatLpOutcome out;
  tab.price(cost_vector<double>(sf, tab.cols(), true, structural));
  if (tab.run(cap) != Tableau<double>::Result::Optimal) return out;  // NumericFailure

  double scale = 1.0;
  for (const auto& b : sf.rhs) scale = std::max(scale, std::abs(b.get_d()));
  if (tab.objective() > 1e3 * tol * scale) {
    out.status = FloatLpStatus::Infeasible;
    out.dual_certificate = user_certificate(lp, sf, tab.row_duals());
    return out;
  }
  tab.drive_out_artificials();
  tab.price(cost_vector<double>(sf, tab.cols(), false, structural));
  auto result = tab.run(cap);
  if (result == Tableau<double>::Result::IterationLimit) return out;

  out.primal = to_user_point(sf, tab.solution(), false);
  // Residual check against the original rows.
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    double lhs = 0.0, mag = 1.0;
    for (std::size_t j = 0; j < lp.num_columns(); ++j) {
      double a = lp.rows[i][j].get_d();
      lhs += a * out.primal[j];
      mag += std::abs(a * out.primal[j]);
    }
    double b = lp.rhs[i].get_d();
    double slack_tol = 1e3 * tol * (mag + std::abs(b));
    bool ok = true;
    switch (lp.senses[i]) {
      case RowSense::LessEqual: ok = lhs <= b + slack_tol; break;
      case RowSense::GreaterEqual: ok = lhs >= b - slack_tol; break;
      case RowSense::Equal: ok = std::abs(lhs - b) <= slack_tol; break;
    }
    if (!ok) {
      out.status = FloatLpStatus::NumericFailure;
      out.primal.clear();
      return out;
    }
  }
  out.objective_value = 0.0;
  if (!lp.objective.empty()) {
    for (std::size_t j = 0; j < lp.num_columns(); ++j) out.objective_value += lp.objective[j].get_d() * out.primal[j];
  }
  if (result == Tableau<double>::Result::Unbounded) {
    out.status = FloatLpStatus::Unbounded;
    out.ray = to_user_point(sf, tab.ray(), true);
  } else {
    out.status = FloatLpStatus::Optimal;
  }
  return out;
}

bool verify_primal(const LinearProgram& lp, const RationalVector& x) {
  if (x.size() != lp.num_columns()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (lp.lower[j] && x[j] < *lp.lower[j]) return false;
    if (lp.upper[j] && x[j] > *lp.upper[j]) return false;
  }
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    Rational lhs = dot(lp.rows[i], x);
    switch (lp.senses[i]) {
      case RowSense::LessEqual: if (lhs > lp.rhs[i]) return false; break;
      case RowSense::GreaterEqual: if (lhs < lp.rhs[i]) return false; break;
      case RowSense::Equal: if (lhs != lp.rhs[i]) return false; break;
    }
  }
  return true;
}

bool verify_farkas(const LinearProgram& lp, const RationalVector& y) {
  if (y.size() != lp.num_rows()) return false;
  const std::size_t n = lp.num_columns();
  RationalVector combo(n, Rational(0));
  Rational beta = 0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (lp.senses[i] != RowSense::Equal && sgn(y[i]) < 0) return false;
    if (sgn(y[i]) == 0) continue;
    Rational w = lp.senses[i] == RowSense::GreaterEqual ? Rational(-y[i]) : y[i];
    for (std::size_t j = 0; j < n; ++j) combo[j] += w * lp.rows[i][j];
    beta += w * lp.rhs[i];
  }
  // min of combo·x over the column box must exceed beta.
  Rational lowest = 0;
  for (std::size_t j = 0; j < n; ++j) {
    int s = sgn(combo[j]);
    if (s == 0) continue;
    const auto& bound = s > 0 ? lp.lower[j] : lp.upper[j];
    if (!bound) return false;
    lowest += combo[j] * *bound;
  }
  return lowest > beta;
}

}  // namespace pwlsep
