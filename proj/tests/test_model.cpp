#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "pwlsep/generators.hpp"
#include "pwlsep/model.hpp"

using namespace pwlsep;

namespace {

Instance line(std::vector<long> blue, std::vector<long> red, std::size_t nb = 1, std::size_t nr = 1) {
  std::vector<Point> pts;
  std::vector<Label> labels;
  for (long b : blue) pts.push_back({Rational(b)}), labels.push_back(Label::Blue);
  for (long r : red) pts.push_back({Rational(r)}), labels.push_back(Label::Red);
  return Instance(1, pts, labels, nb, nr);
}

// In one dimension two finite sets are strictly separable exactly when one
// lies entirely to the left of the other.
bool separable_1d(const std::vector<Point>& b, const std::vector<Point>& r) {
  if (b.empty() || r.empty()) return true;
  auto lo = [](const std::vector<Point>& s) {
    return std::min_element(s.begin(), s.end(), [](auto& x, auto& y) { return x[0] < y[0]; })->at(0);
  };
  auto hi = [](const std::vector<Point>& s) {
    return std::max_element(s.begin(), s.end(), [](auto& x, auto& y) { return x[0] < y[0]; })->at(0);
  };
  return hi(b) < lo(r) || hi(r) < lo(b);
}

std::uint32_t mask_of(const Instance& inst, const Assignment& a) { return a.to_mask(inst); }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("instance shape and z numbering") {
  Instance inst = line({0, 3}, {1}, 2, 3);
  CHECK(inst.num_z() == 2 * 2 + 3);
  CHECK(inst.z_index(0, 1) == 1);
  CHECK(inst.z_index(2, 0) == 4);
  CHECK(inst.z_name(6) == "z_2_2");
  CHECK_THROWS_AS(inst.z_index(0, 2), InputError);
  CHECK_THROWS_AS(Instance(2, {{Rational(1)}}, {Label::Blue}, 1, 1), InputError);
  CHECK_THROWS_AS(Instance(1, {{Rational(1)}}, {Label::Blue}, 0, 1), InputError);
  CHECK_THROWS_AS(Instance(1, {}, {}, 1, 1), InputError);
}

TEST_CASE("assignment conversions") {
  Instance inst = line({0, 3}, {1}, 2, 1);
  for (std::uint32_t m = 0; m < (1u << inst.num_z()); ++m) {
    bool twice = (m & 3u) == 3u || (m & 12u) == 12u;
    if (twice) {
      CHECK_THROWS_AS(Assignment::from_mask(inst, m), InputError);
      continue;
    }
    Assignment a = Assignment::from_mask(inst, m);
    CHECK(a.to_mask(inst) == m);
    CHECK(objective_value(a) + outlier_count(a) == inst.size());
  }
}

TEST_CASE("feasibility on small examples") {
  Instance ok = line({0, 1}, {3, 4});
  auto all = Assignment::from_mask(ok, 0xF);
  auto rep = is_feasible(ok, all);
  REQUIRE(rep.feasible);
  REQUIRE(rep.separators.size() == 1);
  for (std::size_t i : ok.blue()) CHECK(rep.separators[0].hyperplane.evaluate(ok.point(i)) <= -1);
  for (std::size_t j : ok.red()) CHECK(rep.separators[0].hyperplane.evaluate(ok.point(j)) >= 1);

  Instance bad = line({0, 2}, {1});
  auto r2 = is_feasible(bad, Assignment::from_mask(bad, 0x7));
  REQUIRE_FALSE(r2.feasible);
  REQUIRE(r2.failure.has_value());
  // Unique certificate: 1 = (0 + 2) / 2.
  CHECK(r2.failure->certificate.blue.size() == 2);
  for (const auto& [i, w] : r2.failure->certificate.blue) CHECK(w == Rational(1, 2));
  CHECK(is_feasible(bad, Assignment::from_mask(bad, 0x3)).feasible);
  CHECK(is_feasible(bad, Assignment::all_outliers(bad)).feasible);

  // Two blue groups fix it.
  Instance two = bad.with_budgets(2, 1);
  Assignment split;
  split.group = {0, 1, 0};
  CHECK(is_feasible(two, split).feasible);

  Instance p4 = paper_4d_instance();
  CHECK_FALSE(is_feasible(p4, Assignment::from_mask(p4, (1u << 6) - 1)).feasible);
}

TEST_CASE("oracle agrees with one-dimensional brute force") {
  PointSampler s(17, -6, 6);
  for (int t = 0; t < 40; ++t) {
    std::vector<long> b, r;
    for (int i = 0; i < 3; ++i) b.push_back(s.integer(-6, 6));
    for (int i = 0; i < 3; ++i) r.push_back(s.integer(-6, 6));
    std::size_t nb = static_cast<std::size_t>(s.integer(1, 2));
    Instance inst = line(b, r, nb, 1);
    if (inst.num_z() > 14) continue;
    auto want = oracle::feasible_masks(inst, separable_1d);
    FeasibilityOracle fo(inst);
    std::vector<std::uint32_t> got;
    for (std::uint32_t m = 0; m < (1u << inst.num_z()); ++m) {
      try {
        if (fo.feasible_mask(m)) got.push_back(m);
      } catch (const InputError&) {
      }
    }
    CHECK(got == want);
  }
}

TEST_CASE("projection cut for an evenly weighted certificate") {
  Instance inst = line({0, 2}, {1});
  auto rep = is_feasible(inst, Assignment::from_mask(inst, 0x7));
  REQUIRE(rep.failure);
  BigMConfig cfg{10};
  ZInequality cut = farkas_projection_cut(inst, 0, 0, rep.failure->certificate, cfg);
  CHECK(cut.rhs == 20);
  CHECK(cut.coeffs.at(0) == Rational(11, 2));
  CHECK(cut.coeffs.at(1) == Rational(11, 2));
  CHECK(cut.coeffs.at(2) == 11);
  CHECK_FALSE(cut.satisfied_by(0x7u));
  for (std::uint32_t m : {0x3u, 0x5u, 0x6u}) CHECK(cut.satisfied_by(m));
}

TEST_CASE("projection cut raises M for light weights") {
  Instance inst = line({0, 100}, {1});
  auto rep = is_feasible(inst, Assignment::from_mask(inst, 0x7));
  REQUIRE(rep.failure);
  BigMConfig cfg{10};
  ZInequality cut = farkas_projection_cut(inst, 0, 0, rep.failure->certificate, cfg);
  // Weights 99/100 and 1/100 on blue, so M becomes 2/(1/100) - 1 = 199.
  CHECK(cut.rhs == 398);
  CHECK(cut.satisfied_by(0x5u));  // drop the light point: tight
  CHECK(cut.lhs(0x5u) == 398);
  CHECK_FALSE(cut.satisfied_by(0x7u));

  // Without the raise, 11 (99/100 + 1) > 20 would cut off a feasible set.
  CHECK(Rational(11) * (Rational(99, 100) + 1) > 20);
  CHECK(is_feasible(inst, Assignment::from_mask(inst, 0x5u)).feasible);
}

TEST_CASE("projection cuts are valid on random instances") {
  PointSampler s(23, -8, 8);
  int cuts = 0;
  for (int t = 0; t < 60; ++t) {
    std::size_t d = static_cast<std::size_t>(s.integer(1, 2));
    std::vector<Point> pts;
    std::vector<Label> labels;
    std::size_t n = static_cast<std::size_t>(s.integer(3, 7));
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(s.point(d));
      labels.push_back(i % 2 ? Label::Red : Label::Blue);
    }
    std::size_t nb = n <= 5 ? static_cast<std::size_t>(s.integer(1, 2)) : 1;
    Instance inst(d, pts, labels, nb, 1);
    if (inst.num_z() > 14) continue;
    auto feasible = oracle::feasible_masks(inst, [](const std::vector<Point>& b, const std::vector<Point>& r) {
      return !intersect_hulls(b, r).has_value();
    });
    for (std::uint32_t m = 0; m < (1u << inst.num_z()); ++m) {
      Assignment a;
      try {
        a = Assignment::from_mask(inst, m);
      } catch (const InputError&) {
        continue;
      }
      auto rep = is_feasible(inst, a);
      CHECK(rep.feasible == std::binary_search(feasible.begin(), feasible.end(), m));
      if (rep.feasible) continue;
      ZInequality cut = farkas_projection_cut(inst, rep.failure->blue_group, rep.failure->red_group,
                                              rep.failure->certificate, BigMConfig::defaults(inst));
      ++cuts;
      CHECK_FALSE(cut.satisfied_by(mask_of(inst, a)));
      for (std::uint32_t f : feasible) CHECK(cut.satisfied_by(f));
    }
  }
  CHECK(cuts > 100);
}

TEST_CASE("model row counts") {
  Instance inst = paper_4d_instance(2, 3);
  auto model = build_milp(inst, BigMConfig::defaults(inst));
  std::size_t pairs = 2 * 3;
  CHECK(model.variables.size() == pairs * (inst.dimension() + 1) + inst.num_z());
  CHECK(model.rows.size() == 3 * pairs + 3 * pairs + inst.size());
  CHECK(model.maximize);
  CHECK(model.objective.size() == inst.num_z());
  auto mo = build_milp(inst, BigMConfig::defaults(inst), ObjectiveForm::MinimizeOutliers);
  CHECK_FALSE(mo.maximize);
  CHECK(mo.variables.size() == model.variables.size() + inst.size());
  CHECK(BigMConfig::defaults(inst).M == 10 * (1 + 2) * 4);
  CHECK_THROWS_AS(build_milp(inst, BigMConfig{Rational(1, 2)}), InputError);
}

TEST_CASE("model admits exactly the feasible assignments for large M") {
  Instance inst = line({0, 2, 5}, {1, 4}, 2, 1);
  auto model = build_milp(inst, BigMConfig{1000});
  auto feasible = oracle::feasible_masks(inst, separable_1d);
  for (std::uint32_t m = 0; m < (1u << inst.num_z()); ++m) {
    Assignment a;
    try {
      a = Assignment::from_mask(inst, m);
    } catch (const InputError&) {
      continue;
    }
    CAPTURE(m);
    CHECK(milp_admits(model, inst, a.to_z(inst)) == std::binary_search(feasible.begin(), feasible.end(), m));
  }
}

TEST_CASE("big-M dependence of the model") {
  // Blue 0 and red 1/10 assigned force p >= 20 and q <= -1, so the outlier
  // at 1000 needs 1000 p + q <= M, i.e. M >= 19999.
  Instance inst(1, {{Rational(0)}, {Rational(1, 10)}, {Rational(1000)}}, {Label::Blue, Label::Red, Label::Blue}, 1,
                1);
  Assignment a;
  a.group = {0, 0, -1};
  CHECK(is_feasible(inst, a).feasible);
  auto z = a.to_z(inst);
  CHECK(BigMConfig::defaults(inst).M < 19999);
  CHECK_FALSE(milp_admits(build_milp(inst, BigMConfig::defaults(inst)), inst, z));
  CHECK_FALSE(milp_admits(build_milp(inst, BigMConfig{19998}), inst, z));
  CHECK(milp_admits(build_milp(inst, BigMConfig{19999}), inst, z));

  // Blue 0, red 1, unassigned blue at 100: p >= 2 and q <= -1 give M >= 199.
  Instance small = line({0, 100}, {1});
  Assignment b;
  b.group = {0, -1, 0};
  CHECK(is_feasible(small, b).feasible);
  CHECK_FALSE(milp_admits(build_milp(small, BigMConfig{198}), small, b.to_z(small)));
  CHECK(milp_admits(build_milp(small, BigMConfig{199}), small, b.to_z(small)));
}

TEST_CASE("LP format round trip") {
  Instance inst(2, {{Rational(1, 3), Rational(0)}, {Rational(-2), Rational(5, 7)}, {Rational(1), Rational(1)}},
                {Label::Blue, Label::Red, Label::Red}, 1, 2);
  for (auto form : {ObjectiveForm::MaximizeAssigned, ObjectiveForm::MinimizeOutliers}) {
    auto model = build_milp(inst, BigMConfig{Rational(25, 2)}, form);
    std::ostringstream os;
    export_lp_format(model, os);
    std::string text = os.str();
    {
      std::istringstream lines(text);
      std::string ln;
      while (std::getline(lines, ln))
        if (!ln.empty() && ln[0] != '\\') CHECK(ln.find('/') == std::string::npos);
    }
    std::istringstream is(text);
    MilpModel back = parse_lp_format(is);
    CHECK(back.maximize == model.maximize);
    REQUIRE(back.variables.size() == model.variables.size());
    REQUIRE(back.rows.size() == model.rows.size());
    for (std::size_t v = 0; v < model.variables.size(); ++v) {
      auto idx = back.find(model.variables[v].name);
      REQUIRE(idx.has_value());
      CHECK(back.variables[*idx].type == model.variables[v].type);
    }
    // Rows may be rescaled; the z-projections must coincide.
    for (std::uint32_t m = 0; m < (1u << inst.num_z()); ++m) {
      Assignment a;
      try {
        a = Assignment::from_mask(inst, m);
      } catch (const InputError&) {
        continue;
      }
      auto z = a.to_z(inst);
      CHECK(milp_admits(back, inst, z) == milp_admits(model, inst, z));
    }
  }
}

}
