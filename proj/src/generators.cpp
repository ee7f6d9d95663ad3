#include "pwlsep/generators.hpp"

#include <algorithm>

namespace pwlsep {

Point PointSampler::point(std::size_t d) {
  Point p;
  p.reserve(d);
  for (std::size_t a = 0; a < d; ++a) p.emplace_back(integer(lo_, hi_));
  return p;
}

long PointSampler::integer(long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  return dist(rng_);
}

Rational orient2d(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  int o1 = sgn(orient2d(a, b, c)), o2 = sgn(orient2d(a, b, d));
  int o3 = sgn(orient2d(c, d, a)), o4 = sgn(orient2d(c, d, b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> f{"separable", "xor", "hull-inclusion", "obstacle-triangle", "paper-4d"};
  return f;
}

Instance paper_4d_instance(std::size_t blue_groups, std::size_t red_groups) {
  auto P = [](long a, long b, long c, long d) { return Point{Rational(a), Rational(b), Rational(c), Rational(d)}; };
  std::vector<Point> pts{P(1, 1, 0, 0), P(-2, 1, 0, 0), P(1, -2, 0, 0), P(0, 0, 1, 1), P(0, 0, -2, 1), P(0, 0, 1, -2)};
  std::vector<Label> labels{Label::Blue, Label::Blue, Label::Blue, Label::Red, Label::Red, Label::Red};
  return Instance(4, std::move(pts), std::move(labels), blue_groups, red_groups);
}

namespace {

struct Builder {
  std::vector<Point> points;
  std::vector<Label> labels;

  bool fresh(const Point& p) const { return std::find(points.begin(), points.end(), p) == points.end(); }
  void add(Point p, Label l) {
    points.push_back(std::move(p));
    labels.push_back(l);
  }
  // Coincident points are never generated.
  void add_fresh(PointSampler& s, Label l) {
    Point x = s.point(2);
    while (!fresh(x)) x = s.point(2);
    add(std::move(x), l);
  }
  Instance build(std::size_t d, std::size_t nb, std::size_t nr) && {
    return Instance(d, std::move(points), std::move(labels), nb, nr);
  }
};

bool inside_closed_triangle(const Point& x, const Point& a, const Point& b, const Point& c) {
  int s1 = sgn(orient2d(a, b, x)), s2 = sgn(orient2d(b, c, x)), s3 = sgn(orient2d(c, a, x));
  bool neg = s1 < 0 || s2 < 0 || s3 < 0, pos = s1 > 0 || s2 > 0 || s3 > 0;
  return !(neg && pos);
}

Instance separable_family(PointSampler& s, std::size_t nb, std::size_t nr) {
  for (;;) {
    Point p{Rational(s.integer(-3, 3)), Rational(s.integer(-3, 3))};
    if (sgn(p[0]) == 0 && sgn(p[1]) == 0) continue;
    Rational q = s.integer(-5, 5);
    Builder b;
    std::size_t blue = 0, red = 0, tries = 0;
    while ((blue < 4 || red < 4) && tries++ < 2000) {
      Point x = s.point(2);
      if (!b.fresh(x)) continue;
      Rational v = dot(p, x) + q;
      if (v <= -1 && blue < 4) {
        b.add(x, Label::Blue);
        ++blue;
      } else if (v >= 1 && red < 4) {
        b.add(x, Label::Red);
        ++red;
      }
    }
    if (blue == 4 && red == 4) return std::move(b).build(2, nb, nr);
  }
}

Instance xor_family(PointSampler& s, std::size_t nb, std::size_t nr) {
  Builder b;
  const long c = 6;
  const long centers[4][2] = {{c, c}, {-c, -c}, {c, -c}, {-c, c}};
  for (int q = 0; q < 4; ++q) {
    for (int k = 0; k < 2;) {
      Point x{Rational(centers[q][0] + s.integer(-2, 2)), Rational(centers[q][1] + s.integer(-2, 2))};
      if (!b.fresh(x)) continue;
      b.add(std::move(x), q < 2 ? Label::Blue : Label::Red);
      ++k;
    }
  }
  return std::move(b).build(2, nb, nr);
}

Instance hull_inclusion_family(PointSampler& s, std::size_t nb, std::size_t nr) {
  for (;;) {
    Point a = s.point(2), bb = s.point(2), c = s.point(2);
    if (abs(orient2d(a, bb, c)) < 30) continue;
    Builder b;
    b.add(a, Label::Blue);
    b.add(bb, Label::Blue);
    b.add(c, Label::Blue);
    std::size_t inner = 0;
    for (int t = 0; t < 500 && inner < 2; ++t) {
      Point x = s.point(2);
      if (inside_closed_triangle(x, a, bb, c) && b.fresh(x)) {
        b.add(std::move(x), Label::Red);
        ++inner;
      }
    }
    if (inner == 0) continue;
    b.add_fresh(s, Label::Blue);
    b.add_fresh(s, Label::Red);
    return std::move(b).build(2, nb, nr);
  }
}

}  // namespace

/// Red triangle with a crossing blue pair on each edge (segment midpoints
/// shifted by a small random offset).
Instance obstacle_triangle_family(PointSampler& s, std::size_t nb, std::size_t nr) {
  auto even = [&] { return Rational(2 * s.integer(-5, 5)); };
  for (;;) {
    Point r[3];
    for (auto& x : r) x = Point{even(), even()};
    if (abs(orient2d(r[0], r[1], r[2])) < 48) continue;
    Builder b;
    for (const auto& x : r) b.add(x, Label::Red);
    bool ok = true;
    for (int e = 0; e < 3 && ok; ++e) {
      const Point &u = r[e], &v = r[(e + 1) % 3];
      Point m{(u[0] + v[0]) / 2, (u[1] + v[1]) / 2};
      bool placed = false;
      for (int t = 0; t < 200 && !placed; ++t) {
        Point w{Rational(s.integer(-2, 2)), Rational(s.integer(-2, 2))};
        Point a{m[0] + w[0], m[1] + w[1]}, c{m[0] - w[0], m[1] - w[1]};
        auto in_box = [](const Point& x) { return abs(x[0]) <= 10 && abs(x[1]) <= 10; };
        if (!in_box(a) || !in_box(c) || !segments_cross(a, c, u, v) || !b.fresh(a) || !b.fresh(c)) continue;
        b.add(a, Label::Blue);
        b.add(c, Label::Blue);
        placed = true;
      }
      ok = placed;
    }
    if (ok) return std::move(b).build(2, nb, nr);
  }
}

Instance generate_instance(const std::string& family, std::uint64_t seed,
                           std::optional<std::pair<std::size_t, std::size_t>> budgets) {
  PointSampler s(seed);
  auto pick = [&](std::size_t nb, std::size_t nr) {
    return budgets ? *budgets : std::make_pair(nb, nr);
  };
  if (family == "separable") {
    auto [nb, nr] = pick(1, 1);
    return separable_family(s, nb, nr);
  }
  if (family == "xor") {
    auto [nb, nr] = pick(2, 2);
    return xor_family(s, nb, nr);
  }
  if (family == "hull-inclusion") {
    auto [nb, nr] = pick(1, 2);
    return hull_inclusion_family(s, nb, nr);
  }
  if (family == "obstacle-triangle") {
    auto [nb, nr] = pick(1, 2);
    return obstacle_triangle_family(s, nb, nr);
  }
  if (family == "paper-4d") {
    auto [nb, nr] = pick(1, 1);
    return paper_4d_instance(nb, nr);
  }
  throw InputError("unknown instance family '" + family + "'");
}

}  // namespace pwlsep
