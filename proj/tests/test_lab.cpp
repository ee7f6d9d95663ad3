#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pwlsep/generators.hpp"
#include "pwlsep/lab.hpp"

using namespace pwlsep;

namespace {

ZInequality ineq(std::map<std::size_t, Rational> coeffs, Rational rhs) {
  ZInequality q;
  q.coeffs = std::move(coeffs);
  q.rhs = std::move(rhs);
  return q;
}

}  // namespace

TEST_SUITE("lab") {

TEST_CASE("enumeration of tiny polytopes") {
  // Coincident blue and red point: never both assigned.
  Instance same(1, {{Rational(0)}, {Rational(0)}}, {Label::Blue, Label::Red}, 1, 1);
  auto zp = enumerate_feasible(same);
  CHECK(zp.n == 2);
  CHECK(zp.points == std::vector<std::uint32_t>{0b00, 0b01, 0b10});
  CHECK(polytope_dimension(zp) == 2);

  Instance apart(1, {{Rational(0)}, {Rational(1)}}, {Label::Blue, Label::Red}, 1, 1);
  CHECK(enumerate_feasible(apart).points.size() == 4);
}

TEST_CASE("enumeration matches the brute-force oracle") {
  for (const auto& fam : generator_families()) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Instance inst = generate_instance(fam, seed);
      if (inst.num_z() > 14) continue;
      auto want = oracle::feasible_masks(inst, [](const std::vector<Point>& b, const std::vector<Point>& r) {
        return !intersect_hulls(b, r).has_value();
      });
      CAPTURE(fam);
      CHECK(enumerate_feasible(inst, 1).points == want);
      CHECK(enumerate_feasible(inst, 3).points == want);
    }
  }
  Instance big = generate_instance("separable", 1).with_budgets(5, 5);
  if (big.num_z() > kMaxEnumeratedZ) CHECK_THROWS_AS(enumerate_feasible(big), PreconditionError);
}

TEST_CASE("modular rank agrees with exact rank") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng() % 14;
    std::size_t m = rng() % 30;
    std::vector<std::uint32_t> pts;
    for (std::size_t i = 0; i < m; ++i) pts.push_back(static_cast<std::uint32_t>(rng() & ((1u << n) - 1)));
    int want = oracle::affine_rank(pts, n);
    CHECK(affine_dimension(pts, n) == want);
    CHECK(affine_dimension_exact(pts, n) == want);
  }
  CHECK(affine_dimension(std::vector<std::uint32_t>{}, 3) == -1);
  CHECK(affine_dimension(std::vector<std::uint32_t>{5}, 3) == 0);
}

TEST_CASE("inequality verdicts") {
  Instance apart(1, {{Rational(0)}, {Rational(1)}}, {Label::Blue, Label::Red}, 1, 1);
  auto zp = enumerate_feasible(apart);
  CHECK(check_inequality(zp, ineq({{0, -1}}, 0)).verdict == Verdict::Facet);
  CHECK(check_inequality(zp, ineq({{0, 1}}, 1)).verdict == Verdict::Facet);
  auto corner = check_inequality(zp, ineq({{0, 1}, {1, 1}}, 2));
  CHECK(corner.verdict == Verdict::ProperFaceNotFacet);
  CHECK(corner.tight_count == 1);
  CHECK(corner.face_dimension == 0);
  CHECK(check_inequality(zp, ineq({{0, 1}}, 2)).verdict == Verdict::NotSupporting);
  auto bad = check_inequality(zp, ineq({{0, 1}}, 0));
  CHECK(bad.verdict == Verdict::NotValid);
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.violating.has_value());
  CHECK((*bad.violating & 1u) == 1u);

  Instance same(1, {{Rational(0)}, {Rational(0)}}, {Label::Blue, Label::Red}, 1, 1);
  auto zs = enumerate_feasible(same);
  auto r = check_inequality(zs, ineq({{0, 1}, {1, 1}}, 1));
  CHECK(r.verdict == Verdict::Facet);
  CHECK(r.polytope_dimension == 2);
  CHECK(r.face_dimension == 1);
}

TEST_CASE("model rows are facets when the polytope is full-dimensional") {
  Instance inst = generate_instance("obstacle-triangle", 2);
  REQUIRE(inst.num_z() <= kMaxEnumeratedZ);
  auto zp = enumerate_feasible(inst, 2);
  CHECK(polytope_dimension(zp) == static_cast<int>(inst.num_z()));
  auto rows = model_row_inequalities(inst);
  CHECK(rows.size() == inst.size() + inst.num_z());
  for (const auto& q : rows) CHECK(check_inequality(zp, q).verdict == Verdict::Facet);
}

TEST_CASE("targeted families without a known gap") {
  for (const auto& th : theorem_names()) {
    if (th.rfind("rank", 0) == 0) continue;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      auto c = run_theorem_case(th, seed);
      CAPTURE(th);
      CAPTURE(seed);
      CHECK_FALSE(c.contradiction);
      if (c.applicable && th != "full-dimension") CHECK(c.report.valid);
    }
  }
  CHECK_THROWS_AS(run_theorem_case("no-such-theorem", 1), InputError);
}

TEST_CASE("suite tally is consistent and worker independent") {
  auto a = theorem_suite({"obstacle-minimal", "model-rows"}, 3, 5, 1);
  auto b = theorem_suite({"obstacle-minimal", "model-rows"}, 3, 5, 3);
  REQUIRE(a.cases.size() == 6);
  REQUIRE(a.cases.size() == b.cases.size());
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    CHECK(a.cases[i].theorem == b.cases[i].theorem);
    CHECK(a.cases[i].seed == b.cases[i].seed);
    CHECK(a.cases[i].report.verdict == b.cases[i].report.verdict);
  }
  std::size_t contra = 0;
  for (const auto& s : a.summary) contra += s.contradictions;
  CHECK(contra == a.contradictions);
}

}
