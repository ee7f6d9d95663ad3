#include "pwlsep/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_set>

#include "pwlsep/lp.hpp"

namespace pwlsep {

namespace {

std::size_t common_dimension(std::span<const Point> a, std::span<const Point> b) {
  std::size_t d = 0;
  bool seen = false;
  for (auto side : {a, b}) {
    for (const auto& x : side) {
      if (!seen) {
        d = x.size();
        seen = true;
      } else if (x.size() != d) {
        throw InputError("points of different dimension");
      }
    }
  }
  if (seen && d == 0) throw InputError("zero-dimensional points");
  return d;
}

// One side empty: shift the axis-aligned hyperplane past the other side.
Hyperplane trivial_separator(std::span<const Point> blue, std::span<const Point> red, std::size_t d) {
  Hyperplane h;
  h.p.assign(std::max<std::size_t>(d, 1), Rational(0));
  h.p[0] = 1;
  if (!red.empty()) {
    Rational lo = red[0][0];
    for (const auto& x : red) lo = std::min(lo, Rational(x[0]));
    h.q = Rational(1) - lo;
  } else if (!blue.empty()) {
    Rational hi = blue[0][0];
    for (const auto& x : blue) hi = std::max(hi, Rational(x[0]));
    h.q = Rational(-1) - hi;
  } else {
    h.q = 0;
  }
  return h;
}

// Columns p_1..p_d, q (all free). Blue rows p·x + q ≤ -margin, red rows ≥ margin.
LinearProgram separator_lp(std::span<const Point> blue, std::span<const Point> red, std::size_t d,
                           const Rational& margin) {
  LinearProgram lp(d + 1);
  for (const auto& x : blue) {
    RationalVector row(x.begin(), x.end());
    row.push_back(1);
    lp.add_row(std::move(row), RowSense::LessEqual, -margin);
  }
  for (const auto& x : red) {
    RationalVector row(x.begin(), x.end());
    row.push_back(1);
    lp.add_row(std::move(row), RowSense::GreaterEqual, margin);
  }
  return lp;
}

SeparabilityOutcome separate_impl(std::span<const Point> blue, std::span<const Point> red, bool fast) {
  const std::size_t d = common_dimension(blue, red);
  SeparabilityOutcome out;
  if (blue.empty() || red.empty()) {
    out.separator = trivial_separator(blue, red, d);
    return out;
  }

  if (fast) {
    // The float vertex is snapped to nearby small-denominator rationals;
    // only an exactly verified separator is accepted.
    LinearProgram lp = separator_lp(blue, red, d, Rational(1));
    FloatLpOutcome f = solve_float(lp, 1e-9);
    if (f.status == FloatLpStatus::Optimal) {
      Hyperplane h;
      h.p.reserve(d);
      for (std::size_t a = 0; a < d; ++a) h.p.push_back(approximate(f.primal[a], 1000000));
      h.q = approximate(f.primal[d], 1000000);
      if (verify_separator(blue, red, h)) {
        out.separator = std::move(h);
        return out;
      }
    }
  }

  LinearProgram lp = separator_lp(blue, red, d, Rational(1));
  LpOutcome res = solve_exact(lp);
  if (res.status != LpStatus::Infeasible) {
    Hyperplane h;
    h.p.assign(res.primal.begin(), res.primal.begin() + static_cast<long>(d));
    h.q = res.primal[d];
    out.separator = std::move(h);
    return out;
  }
  // Row multipliers: blue rows first, then red rows. Both sides carry the
  // same total weight (the q-column cancels); normalise it to one.
  ConvexCombinationCertificate cert;
  Rational total = 0;
  for (std::size_t i = 0; i < blue.size(); ++i) total += res.dual_certificate[i];
  cert.weights_blue.reserve(blue.size());
  cert.weights_red.reserve(red.size());
  for (std::size_t i = 0; i < blue.size(); ++i) cert.weights_blue.push_back(res.dual_certificate[i] / total);
  for (std::size_t j = 0; j < red.size(); ++j) {
    cert.weights_red.push_back(res.dual_certificate[blue.size() + j] / total);
  }
  out.certificate = std::move(cert);
  return out;
}

Point weighted_sum(std::span<const Point> pts, const RationalVector& w) {
  Point x(pts.empty() ? 0 : pts[0].size(), Rational(0));
  for (std::size_t i = 0; i < pts.size() && i < w.size(); ++i) {
    if (sgn(w[i]) == 0) continue;
    for (std::size_t a = 0; a < x.size(); ++a) x[a] += w[i] * pts[i][a];
  }
  return x;
}

using Mask = std::uint64_t;

std::vector<Point> subset(std::span<const Point> set, Mask mask) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (mask >> i & 1u) out.push_back(set[i]);
  }
  return out;
}

bool obstacle_mask(const std::vector<Point>& segment, std::span<const Point> set, Mask mask) {
  auto pts = subset(set, mask);
  if (pts.empty()) return false;
  return !separable(pts, segment);
}

bool nontrivial_mask(const Point& y1, const Point& y2, std::span<const Point> set, Mask mask) {
  auto pts = subset(set, mask);
  return !in_convex_hull(y1, pts) && !in_convex_hull(y2, pts);
}

}  // namespace

Point ConvexCombinationCertificate::common_point(std::span<const Point> blue) const {
  return weighted_sum(blue, weights_blue);
}

IndexList ConvexCombinationCertificate::blue_support() const {
  IndexList s;
  for (std::size_t i = 0; i < weights_blue.size(); ++i) {
    if (sgn(weights_blue[i]) != 0) s.push_back(i);
  }
  return s;
}

IndexList ConvexCombinationCertificate::red_support() const {
  IndexList s;
  for (std::size_t i = 0; i < weights_red.size(); ++i) {
    if (sgn(weights_red[i]) != 0) s.push_back(i);
  }
  return s;
}

SeparabilityOutcome separate(std::span<const Point> blue, std::span<const Point> red) {
  return separate_impl(blue, red, true);
}

SeparabilityOutcome separate_exact(std::span<const Point> blue, std::span<const Point> red) {
  return separate_impl(blue, red, false);
}

bool separable(std::span<const Point> blue, std::span<const Point> red) {
  return separate(blue, red).separable();
}

bool verify_separator(std::span<const Point> blue, std::span<const Point> red, const Hyperplane& h) {
  if (std::all_of(h.p.begin(), h.p.end(), [](const Rational& v) { return sgn(v) == 0; })) return false;
  for (const auto& x : blue) {
    if (x.size() != h.p.size() || h.evaluate(x) > -1) return false;
  }
  for (const auto& x : red) {
    if (x.size() != h.p.size() || h.evaluate(x) < 1) return false;
  }
  return true;
}

bool verify_certificate(std::span<const Point> blue, std::span<const Point> red,
                        const ConvexCombinationCertificate& cert) {
  if (cert.weights_blue.size() != blue.size() || cert.weights_red.size() != red.size()) return false;
  if (blue.empty() || red.empty()) return false;
  Rational sb = 0, sr = 0;
  for (const auto& w : cert.weights_blue) {
    if (sgn(w) < 0) return false;
    sb += w;
  }
  for (const auto& w : cert.weights_red) {
    if (sgn(w) < 0) return false;
    sr += w;
  }
  if (sb != 1 || sr != 1) return false;
  return cert.common_point(blue) == weighted_sum(red, cert.weights_red);
}

std::optional<ConvexCombinationCertificate> intersect_hulls(std::span<const Point> blue,
                                                            std::span<const Point> red) {
  const std::size_t d = common_dimension(blue, red);
  if (blue.empty() || red.empty()) return std::nullopt;
  const std::size_t nb = blue.size(), nr = red.size();
  LinearProgram lp(nb + nr);
  for (std::size_t c = 0; c < nb + nr; ++c) lp.set_nonnegative(c);
  for (std::size_t a = 0; a < d; ++a) {
    RationalVector row(nb + nr, Rational(0));
    for (std::size_t i = 0; i < nb; ++i) row[i] = blue[i][a];
    for (std::size_t j = 0; j < nr; ++j) row[nb + j] = -red[j][a];
    lp.add_row(std::move(row), RowSense::Equal, Rational(0));
  }
  RationalVector sum_blue(nb + nr, Rational(0)), sum_red(nb + nr, Rational(0));
  for (std::size_t i = 0; i < nb; ++i) sum_blue[i] = 1;
  for (std::size_t j = 0; j < nr; ++j) sum_red[nb + j] = 1;
  lp.add_row(std::move(sum_blue), RowSense::Equal, Rational(1));
  lp.add_row(std::move(sum_red), RowSense::Equal, Rational(1));
  LpOutcome res = solve_exact(lp);
  if (res.status == LpStatus::Infeasible) return std::nullopt;
  ConvexCombinationCertificate cert;
  cert.weights_blue.assign(res.primal.begin(), res.primal.begin() + static_cast<long>(nb));
  cert.weights_red.assign(res.primal.begin() + static_cast<long>(nb), res.primal.end());
  return cert;
}

std::optional<ConvexCombinationCertificate> in_convex_hull(const Point& x, std::span<const Point> hull) {
  if (hull.empty()) throw PreconditionError("in_convex_hull requires a nonempty point set");
  std::vector<Point> single{x};
  auto out = separate(hull, single);
  return out.certificate;
}

IndexList minimal_inclusion_subset(const Point& x, std::span<const Point> hull,
                                   std::span<const std::size_t> order) {
  if (hull.empty() || !in_convex_hull(x, hull)) {
    throw PreconditionError("minimal_inclusion_subset: point is not in the convex hull");
  }
  IndexList sequence;
  if (order.empty()) {
    sequence.resize(hull.size());
    std::iota(sequence.begin(), sequence.end(), std::size_t{0});
  } else {
    sequence.assign(order.begin(), order.end());
  }
  std::vector<bool> keep(hull.size(), true);
  for (std::size_t idx : sequence) {
    if (idx >= hull.size() || !keep[idx]) continue;
    keep[idx] = false;
    std::vector<Point> rest;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      if (keep[i]) rest.push_back(hull[i]);
    }
    if (rest.empty() || !in_convex_hull(x, rest)) keep[idx] = true;
  }
  IndexList out;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

std::optional<ConvexCombinationCertificate> obstacle_between(const Point& y1, const Point& y2,
                                                             std::span<const Point> set) {
  if (set.empty()) return std::nullopt;
  std::vector<Point> segment{y1, y2};
  return separate(set, segment).certificate;
}

const char* to_string(ObstacleClass c) {
  switch (c) {
    case ObstacleClass::NotObstacle: return "NotObstacle";
    case ObstacleClass::Trivial: return "Trivial";
    case ObstacleClass::NonMinimal: return "NonMinimal";
    case ObstacleClass::NontrivialMinimal: return "NontrivialMinimal";
  }
  return "?";
}

ObstacleClass classify_obstacle(const Point& y1, const Point& y2, std::span<const Point> set) {
  if (y1 == y2) throw InputError("obstacle endpoints must be distinct points");
  if (!obstacle_between(y1, y2, set)) return ObstacleClass::NotObstacle;
  if (in_convex_hull(y1, set) || in_convex_hull(y2, set)) return ObstacleClass::Trivial;
  return is_minimal_obstacle(y1, y2, set) ? ObstacleClass::NontrivialMinimal : ObstacleClass::NonMinimal;
}

bool is_minimal_obstacle(const Point& y1, const Point& y2, std::span<const Point> set) {
  if (y1 == y2) throw InputError("obstacle endpoints must be distinct points");
  if (!obstacle_between(y1, y2, set)) return false;
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::vector<Point> rest;
    for (std::size_t t = 0; t < set.size(); ++t) {
      if (t != i) rest.push_back(set[t]);
    }
    if (obstacle_between(y1, y2, rest)) return false;
  }
  return true;
}

IndexList minimal_obstacle_subset(const Point& y1, const Point& y2, std::span<const Point> set,
                                  std::size_t node_budget) {
  if (set.size() > 63) throw InputError("obstacle search supports at most 63 points");
  const std::vector<Point> segment{y1, y2};
  const Mask full = set.empty() ? 0 : (Mask{1} << set.size()) - 1;
  if (!obstacle_mask(segment, set, full)) {
    throw PreconditionError("minimal_obstacle_subset: set is not an obstacle");
  }
  // A degenerate segment lies in the hull of every obstacle of it.
  if (y1 == y2) throw TrivialOnlyError("coincident endpoints admit only trivial obstacles");

  std::unordered_set<Mask> visited;
  std::optional<Mask> found;
  // Depth-first over obstacle subsets; triviality only disappears by
  // removing points, and every subset of a nontrivial set stays nontrivial.
  auto search = [&](auto&& self, Mask mask) -> bool {
    if (!visited.insert(mask).second) return false;
    if (visited.size() > node_budget) throw LimitError("minimal_obstacle_subset: search budget exhausted");
    if (nontrivial_mask(y1, y2, set, mask)) {
      Mask cur = mask;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (!(cur >> i & 1u)) continue;
        Mask trial = cur & ~(Mask{1} << i);
        if (trial != 0 && obstacle_mask(segment, set, trial)) cur = trial;
      }
      found = cur;
      return true;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!(mask >> i & 1u)) continue;
      Mask sub = mask & ~(Mask{1} << i);
      if (sub == 0 || visited.count(sub)) continue;
      if (obstacle_mask(segment, set, sub) && self(self, sub)) return true;
    }
    return false;
  };
  if (!search(search, full)) {
    throw TrivialOnlyError("every obstacle inside the set contains an endpoint in its hull");
  }
  IndexList out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (*found >> i & 1u) out.push_back(i);
  }
  return out;
}

int affine_dimension(std::span<const Point> points) {
  if (points.empty()) return -1;
  const std::size_t d = points[0].size();
  std::vector<RationalVector> rows;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != d) throw InputError("points of different dimension");
    RationalVector r(d);
    for (std::size_t a = 0; a < d; ++a) r[a] = points[i][a] - points[0][a];
    rows.push_back(std::move(r));
  }
  int rank = 0;
  std::size_t col = 0;
  for (std::size_t r = 0; r < rows.size() && col < d; ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && sgn(rows[piv][col]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t t = r + 1; t < rows.size(); ++t) {
      if (sgn(rows[t][col]) == 0) continue;
      Rational f = rows[t][col] / rows[r][col];
      for (std::size_t a = col; a < d; ++a) rows[t][a] -= f * rows[r][a];
    }
    ++r;
    ++rank;
  }
  return rank;
}

std::vector<Point> gather(std::span<const Point> points, std::span<const std::size_t> indices) {
  std::vector<Point> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(points[i]);
  return out;
}

}  // namespace pwlsep
