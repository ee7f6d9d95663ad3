#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pwlsep/lp.hpp"

using namespace pwlsep;

TEST_SUITE("lp") {

TEST_CASE("rational parsing and canonical form") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-0.5e-2")) == "-1/200");
  CHECK(to_string(parse_rational("1.25")) == "5/4");
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  Rational r = parse_rational("4/-6");
  CHECK(r.get_den() > 0);
  CHECK(to_string(r) == "-2/3");
  CHECK(approximate(0.3333333333, 1000) == Rational(1, 3));
  CHECK(from_double(0.5) == Rational(1, 2));
}

TEST_CASE("maximize x on [0,1]") {
  LinearProgram lp(1);
  lp.add_row({Rational(1)}, RowSense::LessEqual, 1);
  lp.set_nonnegative(0);
  lp.objective = {Rational(1)};
  LpOutcome out = solve_exact(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.primal[0] == 1);
  CHECK(out.objective_value == 1);
}

TEST_CASE("contradictory bounds give the (1,1) certificate") {
  LinearProgram lp(1);
  lp.add_row({Rational(1)}, RowSense::LessEqual, -1);
  lp.add_row({Rational(1)}, RowSense::GreaterEqual, 1);
  LpOutcome out = solve_exact(lp);
  REQUIRE(out.status == LpStatus::Infeasible);
  REQUIRE(out.dual_certificate.size() == 2);
  // Normalised: combination 0·x ≤ -2.
  Rational scale = out.dual_certificate[0];
  REQUIRE(sgn(scale) > 0);
  CHECK(out.dual_certificate[1] / scale == 1);
  CHECK(oracle::farkas_certifies(lp, out.dual_certificate));
}

TEST_CASE("separable singletons make the convex-combination system infeasible") {
  // λ_b · 0 = λ_r · 1, λ_b = λ_r = 1, λ ≥ 0.
  LinearProgram lp(2);
  lp.add_row({Rational(0), Rational(-1)}, RowSense::Equal, 0);
  lp.add_row({Rational(1), Rational(0)}, RowSense::Equal, 1);
  lp.add_row({Rational(0), Rational(1)}, RowSense::Equal, 1);
  lp.set_nonnegative(0);
  lp.set_nonnegative(1);
  LpOutcome out = solve_exact(lp);
  REQUIRE(out.status == LpStatus::Infeasible);
  CHECK(oracle::farkas_certifies(lp, out.dual_certificate));
}

TEST_CASE("unbounded direction is reported with a ray") {
  LinearProgram lp(2);
  lp.add_row({Rational(1), Rational(-1)}, RowSense::LessEqual, 1);
  lp.set_nonnegative(0);
  lp.set_nonnegative(1);
  lp.objective = {Rational(1), Rational(0)};
  LpOutcome out = solve_exact(lp);
  REQUIRE(out.status == LpStatus::Unbounded);
  CHECK(verify_primal(lp, out.primal));
  REQUIRE(out.ray.size() == 2);
  CHECK(sgn(out.ray[0]) > 0);
  CHECK(out.ray[0] - out.ray[1] <= 0);
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_row({Rational(1)}, RowSense::LessEqual, 0), InputError);
  LinearProgram crossed(1);
  crossed.lower[0] = Rational(2);
  crossed.upper[0] = Rational(1);
  CHECK_THROWS_AS(solve_exact(crossed), InputError);
}

TEST_CASE("random boxed programs agree with vertex enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4), ncols(1, 3), nrows(1, 5), sense(0, 2);
  int infeasible = 0, optimal = 0;
  for (int t = 0; t < 300; ++t) {
    std::size_t n = static_cast<std::size_t>(ncols(rng));
    LinearProgram lp(n);
    for (std::size_t c = 0; c < n; ++c) {
      lp.lower[c] = Rational(-5);
      lp.upper[c] = Rational(5);
    }
    int m = nrows(rng);
    for (int r = 0; r < m; ++r) {
      RationalVector row(n);
      for (auto& v : row) v = coef(rng);
      lp.add_row(row, static_cast<RowSense>(sense(rng)), coef(rng));
    }
    lp.objective.resize(n);
    for (auto& v : lp.objective) v = coef(rng);

    auto best = oracle::vertex_enumeration(lp);
    LpOutcome ex = solve_exact(lp);
    CAPTURE(t);
    if (!best) {
      ++infeasible;
      REQUIRE(ex.status == LpStatus::Infeasible);
      CHECK(oracle::farkas_certifies(lp, ex.dual_certificate));
    } else {
      ++optimal;
      REQUIRE(ex.status == LpStatus::Optimal);
      CHECK(oracle::satisfies(lp, ex.primal));
      CHECK(ex.objective_value == *best);
    }
    FloatLpOutcome fl = solve_float(lp);
    if (fl.status != FloatLpStatus::NumericFailure) {
      CHECK((fl.status == FloatLpStatus::Infeasible) == !best.has_value());
      if (best && fl.status == FloatLpStatus::Optimal) CHECK(fl.objective_value == doctest::Approx(best->get_d()));
    }
  }
  CHECK(infeasible > 10);
  CHECK(optimal > 10);
}

}
