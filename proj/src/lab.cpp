#include "pwlsep/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "pwlsep/generators.hpp"

namespace pwlsep {

// ------------------------------------------------------------ enumeration

namespace {

struct PartialAssignment {
  std::vector<int> group;  // first `depth` points decided
  std::uint32_t mask = 0;
};

class FeasibleWalker {
 public:
  FeasibleWalker(const Instance& inst, FeasibilityOracle& oracle) : inst_(inst), oracle_(oracle) {
    members_.resize(2);
    members_[0].resize(inst.blue_groups());
    members_[1].resize(inst.red_groups());
  }

  /// All feasible completions of `start` from point `from` onward, or the
  /// feasible prefixes of length `stop` when stop < size.
  void walk(const PartialAssignment& start, std::size_t stop, std::vector<PartialAssignment>& prefixes,
            std::vector<std::uint32_t>* leaves) {
    for (auto& side : members_)
      for (auto& g : side) g.clear();
    cur_ = start;
    for (std::size_t p = 0; p < start.group.size(); ++p) {
      if (start.group[p] >= 0) members_[side_id(p)][static_cast<std::size_t>(start.group[p])].push_back(p);
    }
    stop_ = stop;
    prefixes_ = &prefixes;
    leaves_ = leaves;
    rec(start.group.size());
  }

 private:
  std::size_t side_id(std::size_t p) const { return inst_.label(p) == Label::Blue ? 0 : 1; }

  bool compatible(std::size_t p, std::size_t g) {
    const auto& own = members_[side_id(p)][g];
    IndexList grown = own;
    grown.push_back(p);
    bool blue = inst_.label(p) == Label::Blue;
    for (const auto& other : members_[1 - side_id(p)]) {
      if (other.empty()) continue;
      if (!(blue ? oracle_.separable(grown, other) : oracle_.separable(other, grown))) return false;
    }
    return true;
  }

  void rec(std::size_t p) {
    if (p == stop_) {
      if (p == inst_.size() && leaves_) {
        leaves_->push_back(cur_.mask);
      } else {
        prefixes_->push_back(cur_);
      }
      return;
    }
    cur_.group.push_back(-1);
    rec(p + 1);
    for (std::size_t g = 0; g < inst_.groups_of(p); ++g) {
      if (!compatible(p, g)) continue;  // feasibility is hereditary
      members_[side_id(p)][g].push_back(p);
      cur_.group.back() = static_cast<int>(g);
      std::uint32_t bit = std::uint32_t{1} << inst_.z_index(p, g);
      cur_.mask |= bit;
      rec(p + 1);
      cur_.mask &= ~bit;
      members_[side_id(p)][g].pop_back();
    }
    cur_.group.pop_back();
  }

  const Instance& inst_;
  FeasibilityOracle& oracle_;
  std::vector<std::vector<IndexList>> members_;
  PartialAssignment cur_;
  std::size_t stop_ = 0;
  std::vector<PartialAssignment>* prefixes_ = nullptr;
  std::vector<std::uint32_t>* leaves_ = nullptr;
};

}  // namespace

ZPolytope enumerate_feasible(const Instance& inst, std::size_t workers) {
  if (inst.num_z() > kMaxEnumeratedZ) {
    throw PreconditionError("enumeration refused: " + std::to_string(inst.num_z()) + " z-variables (limit 24)");
  }
  ZPolytope zp;
  zp.n = inst.num_z();
  FeasibilityOracle oracle(inst);
  workers = std::max<std::size_t>(1, workers);
  if (workers == 1) {
    FeasibleWalker w(inst, oracle);
    std::vector<PartialAssignment> none;
    w.walk({}, inst.size(), none, &zp.points);
  } else {
    // Prefix blocks: extend the prefix depth until there is enough work.
    std::vector<PartialAssignment> blocks{{}};
    std::size_t depth = 0;
    while (depth < inst.size() && blocks.size() < 4 * workers) {
      std::vector<PartialAssignment> next;
      FeasibleWalker w(inst, oracle);
      for (const auto& b : blocks) w.walk(b, depth + 1, next, nullptr);
      blocks = std::move(next);
      ++depth;
    }
    if (depth == inst.size()) {
      for (const auto& b : blocks) zp.points.push_back(b.mask);
    } else {
      std::vector<std::vector<std::uint32_t>> parts(blocks.size());
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
          FeasibleWalker w(inst, oracle);
          std::vector<PartialAssignment> none;
          for (std::size_t i; (i = next.fetch_add(1)) < blocks.size();) w.walk(blocks[i], inst.size(), none, &parts[i]);
        });
      }
      for (auto& t : threads) t.join();
      for (auto& p : parts) zp.points.insert(zp.points.end(), p.begin(), p.end());
    }
  }
  std::sort(zp.points.begin(), zp.points.end());
  return zp;
}

// ---------------------------------------------------------------- ranks

namespace {

int rank_mod(const std::vector<std::uint32_t>& pts, std::size_t n, std::uint64_t p) {
  const std::size_t cols = n + 1;
  std::vector<std::vector<std::uint64_t>> rows(cols);
  std::vector<bool> has(cols, false);
  auto inverse = [p](std::uint64_t a) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  std::vector<std::uint64_t> v(cols);
  for (auto m : pts) {
    v[0] = 1;
    for (std::size_t b = 0; b < n; ++b) v[b + 1] = m >> b & 1u;
    for (std::size_t c = 0; c < cols; ++c) {
      if (v[c] == 0) continue;
      if (has[c]) {
        std::uint64_t f = v[c];
        const auto& r = rows[c];
        for (std::size_t x = c; x < cols; ++x) v[x] = (v[x] + (p - f) * r[x]) % p;
        continue;
      }
      std::uint64_t inv = inverse(v[c]);
      for (std::size_t x = c; x < cols; ++x) v[x] = v[x] * inv % p;
      rows[c] = v;
      has[c] = true;
      ++rank;
      break;
    }
    if (rank == static_cast<int>(cols)) break;
  }
  return rank;
}

}  // namespace

int affine_dimension(const std::vector<std::uint32_t>& points, std::size_t n) {
  if (n > kMaxEnumeratedZ) throw PreconditionError("modular rank is exact only up to 24 variables");
  if (points.empty()) return -1;
  int r = std::max(rank_mod(points, n, 2147483647ull), rank_mod(points, n, 2147483629ull));
  return r - 1;
}

int affine_dimension_exact(const std::vector<std::uint32_t>& points, std::size_t n) {
  if (points.empty()) return -1;
  const std::size_t cols = n + 1;
  std::vector<RationalVector> rows(cols);
  std::vector<bool> has(cols, false);
  int rank = 0;
  for (auto m : points) {
    RationalVector v(cols);
    v[0] = 1;
    for (std::size_t b = 0; b < n; ++b) v[b + 1] = (m >> b & 1u) ? 1 : 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (sgn(v[c]) == 0) continue;
      if (has[c]) {
        Rational f = v[c];
        for (std::size_t x = c; x < cols; ++x) v[x] -= f * rows[c][x];
        continue;
      }
      Rational f = v[c];
      for (std::size_t x = c; x < cols; ++x) v[x] /= f;
      rows[c] = v;
      has[c] = true;
      ++rank;
      break;
    }
  }
  return rank - 1;
}

int polytope_dimension(const ZPolytope& zp) { return affine_dimension(zp.points, zp.n); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Facet: return "Facet";
    case Verdict::ProperFaceNotFacet: return "ProperFaceNotFacet";
    case Verdict::NotValid: return "NotValid";
    case Verdict::NotSupporting: return "NotSupporting";
  }
  return "?";
}

FacetReport check_inequality(const ZPolytope& zp, const ZInequality& q) {
  return check_inequality(zp, q, polytope_dimension(zp));
}

FacetReport check_inequality(const ZPolytope& zp, const ZInequality& q, int polytope_dim) {
  for (const auto& [v, c] : q.coeffs) {
    (void)c;
    if (v >= zp.n) throw InputError("inequality refers to a z-variable outside the polytope");
  }
  FacetReport r;
  r.inequality = q;
  r.polytope_dimension = polytope_dim;
  std::vector<std::uint32_t> tight;
  r.valid = true;
  for (auto m : zp.points) {
    Rational lhs = q.lhs(m);
    if (lhs > q.rhs) {
      r.valid = false;
      r.violating = m;
      break;
    }
    if (lhs == q.rhs) tight.push_back(m);
  }
  if (!r.valid) {
    r.verdict = Verdict::NotValid;
    return r;
  }
  r.tight_count = tight.size();
  r.face_dimension = affine_dimension(tight, zp.n);
  if (tight.empty()) {
    r.verdict = Verdict::NotSupporting;
  } else if (r.face_dimension == polytope_dim - 1) {
    r.verdict = Verdict::Facet;
  } else {
    r.verdict = Verdict::ProperFaceNotFacet;
  }
  return r;
}

std::vector<ZInequality> model_row_inequalities(const Instance& inst) {
  std::vector<ZInequality> out;
  for (std::size_t p = 0; p < inst.size(); ++p) {
    ZInequality q;
    for (std::size_t g = 0; g < inst.groups_of(p); ++g) q.coeffs[inst.z_index(p, g)] = 1;
    q.rhs = 1;
    q.provenance.family = CutFamily::ModelRow;
    q.provenance.endpoints = {p};
    q.provenance.detail = "assign";
    out.push_back(std::move(q));
  }
  for (std::size_t v = 0; v < inst.num_z(); ++v) {
    ZInequality q;
    q.coeffs[v] = -1;
    q.rhs = 0;
    q.provenance.family = CutFamily::ModelRow;
    q.provenance.endpoints = {inst.z_point(v)};
    q.provenance.endpoint_group = inst.z_group(v);
    q.provenance.detail = "nonnegative";
    out.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------- theorem suite

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names{
      "convex-inclusion-minimal", "convex-inclusion-nonminimal", "obstacle-minimal", "obstacle-trivial",
      "obstacle-nonminimal",      "rank-single-group",           "rank-round-robin", "model-rows",
      "full-dimension"};
  return names;
}

namespace {

std::uint64_t mix(const std::string& name, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
  return h ^ (seed * 0x9E3779B97F4A7C15ull);
}

struct Layout {
  std::vector<Point> points;
  std::vector<Label> labels;
  std::size_t add(Point p, Label l) {
    points.push_back(std::move(p));
    labels.push_back(l);
    return points.size() - 1;
  }
};

bool in_triangle(const Point& x, const Point& a, const Point& b, const Point& c) {
  return in_convex_hull(x, std::vector<Point>{a, b, c}).has_value();
}

Point fresh_triangle_point(PointSampler& s, const Point& a, const Point& b, const Point& c) {
  for (;;) {
    Point x = s.point(2);
    if (in_triangle(x, a, b, c)) return x;
  }
}

void add_extras(PointSampler& s, Layout& l, std::size_t blue, std::size_t red) {
  for (std::size_t i = 0; i < blue; ++i) l.add(s.point(2), Label::Blue);
  for (std::size_t i = 0; i < red; ++i) l.add(s.point(2), Label::Red);
}

bool distinct(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  return std::adjacent_find(pts.begin(), pts.end()) == pts.end();
}

struct Target {
  Instance inst;
  ZInequality cut;
  bool applicable = true;
  bool expected_facet = false;
  std::string note;
};

Target convex_inclusion_target(PointSampler& s, bool minimal) {
  for (;;) {
    Layout l;
    Point a = s.point(2), b = s.point(2), c = s.point(2);
    if (abs(orient2d(a, b, c)) < 10) continue;
    std::size_t ia = l.add(a, Label::Blue), ib = l.add(b, Label::Blue), ic = l.add(c, Label::Blue);
    std::size_t j = l.add(fresh_triangle_point(s, a, b, c), Label::Red);
    std::size_t extra_blue = static_cast<std::size_t>(s.integer(minimal ? 0 : 1, 2));
    add_extras(s, l, extra_blue, static_cast<std::size_t>(s.integer(0, 2)));
    if (!distinct(l.points)) continue;
    std::size_t nb = static_cast<std::size_t>(s.integer(1, 2));
    Instance inst(2, l.points, l.labels, nb, 2);
    IndexList tri{ia, ib, ic};
    IndexList local = minimal_inclusion_subset(inst.point(j), gather(inst.points(), tri));
    IndexList set;
    for (auto i : local) set.push_back(tri[i]);
    if (!minimal) set.push_back(j + 1);  // first extra blue point
    std::size_t k = static_cast<std::size_t>(s.integer(0, static_cast<long>(nb) - 1));
    ZInequality q = convex_inclusion_inequality(inst, j, set, k);
    // The theorem's condition, recomputed by per-element removal.
    bool is_min = true;
    for (auto drop : q.provenance.set) {
      IndexList rest;
      for (auto i : q.provenance.set)
        if (i != drop) rest.push_back(i);
      if (!rest.empty() && in_convex_hull(inst.point(j), gather(inst.points(), rest))) is_min = false;
    }
    Target t{inst, q, true, is_min, is_min ? "S minimal" : "S not minimal"};
    return t;
  }
}

enum class ObstacleKind { Minimal, Trivial, NonMinimal };

Target obstacle_target(PointSampler& s, ObstacleKind kind) {
  for (;;) {
    Layout l;
    std::size_t nb = static_cast<std::size_t>(s.integer(1, 2)), nr = static_cast<std::size_t>(s.integer(1, 2));
    Point y1 = s.point(2), y2 = s.point(2);
    if (y1 == y2) continue;
    std::size_t j1 = l.add(y1, Label::Red), j2 = l.add(y2, Label::Red);
    IndexList set;
    if (kind == ObstacleKind::Trivial) {
      Point a = s.point(2), b = s.point(2), c = s.point(2);
      if (abs(orient2d(a, b, c)) < 10 || !in_triangle(y1, a, b, c) || in_triangle(y2, a, b, c)) continue;
      set = {l.add(a, Label::Blue), l.add(b, Label::Blue), l.add(c, Label::Blue)};
    } else {
      Point a = s.point(2), b = s.point(2);
      if (!segments_cross(a, b, y1, y2)) continue;
      set = {l.add(a, Label::Blue), l.add(b, Label::Blue)};
      if (kind == ObstacleKind::NonMinimal) set.push_back(l.add(s.point(2), Label::Blue));
    }
    add_extras(s, l, static_cast<std::size_t>(s.integer(0, 2)), static_cast<std::size_t>(s.integer(0, 1)));
    if (!distinct(l.points)) continue;
    Instance inst(2, l.points, l.labels, nb, nr);
    ObstacleClass cls = classify_obstacle(y1, y2, gather(inst.points(), set));
    ObstacleClass want = kind == ObstacleKind::Minimal   ? ObstacleClass::NontrivialMinimal
                         : kind == ObstacleKind::Trivial ? ObstacleClass::Trivial
                                                         : ObstacleClass::NonMinimal;
    if (cls != want) continue;
    std::size_t k = static_cast<std::size_t>(s.integer(0, static_cast<long>(nb) - 1));
    std::size_t ell = static_cast<std::size_t>(s.integer(0, static_cast<long>(nr) - 1));
    ZInequality q = obstacle_inequality(inst, j1, j2, set, k, ell);
    return Target{inst, q, true, cls == ObstacleClass::NontrivialMinimal, to_string(cls)};
  }
}

Target rank_target(PointSampler& s, bool round_robin) {
  bool extra_red = s.coin(), extra_blue = s.coin();
  if (round_robin && extra_blue) extra_red = false;  // stay within 24 variables
  std::size_t nb = round_robin ? 3 : 1;
  std::size_t nr = round_robin && (extra_red || extra_blue) ? 1 : static_cast<std::size_t>(s.integer(1, 2));
  Instance base = obstacle_triangle_family(s, nb, nr);
  std::vector<Point> pts = base.points();
  std::vector<Label> labels = base.labels();
  auto add_fresh = [&](Label l) {
    for (;;) {
      Point x = s.point(2);
      if (std::find(pts.begin(), pts.end(), x) != pts.end()) continue;
      pts.push_back(std::move(x));
      labels.push_back(l);
      return;
    }
  };
  if (extra_red) add_fresh(Label::Red);
  if (extra_blue) add_fresh(Label::Blue);
  Instance inst(2, pts, labels, nb, nr);
  std::vector<ObstacleEdge> edges{{0, 1, {3, 4}, 0}, {1, 2, {5, 6}, round_robin ? 1u : 0u},
                                  {0, 2, {7, 8}, round_robin ? 2u : 0u}};
  ObstacleGraph g = make_obstacle_graph(inst, {0, 1, 2}, edges);
  GraphCertificates c = certify_graph(inst, g);
  RankHypotheses h = check_rank_hypotheses(inst, g, c);
  std::size_t ell = static_cast<std::size_t>(s.integer(0, static_cast<long>(nr) - 1));
  ZInequality q = gen_rank(inst, g, ell, c);
  std::ostringstream note;
  note << "alpha=" << c.alpha << " structural=" << h.structural
       << " i=" << h.separable_max_sets.value_or(false) << " ii=" << h.extra_red_points.value_or(false)
       << " iii=" << h.extra_blue_points.value_or(false);
  return Target{inst, q, h.verified(), true, note.str()};
}

Instance random_small_instance(PointSampler& s) {
  for (;;) {
    std::size_t d = static_cast<std::size_t>(s.integer(1, 3));
    std::size_t m = static_cast<std::size_t>(s.integer(2, 8));
    std::size_t nb = static_cast<std::size_t>(s.integer(1, 2)), nr = static_cast<std::size_t>(s.integer(1, 2));
    std::vector<Point> pts;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < m; ++i) {
      pts.push_back(s.point(d));
      labels.push_back(s.coin() ? Label::Blue : Label::Red);
    }
    if (!distinct(pts)) continue;
    Instance inst(d, pts, labels, nb, nr);
    if (inst.num_z() <= 20) return inst;
  }
}

}  // namespace

TheoremCase run_theorem_case(const std::string& theorem, std::uint64_t seed, std::size_t workers) {
  PointSampler s(mix(theorem, seed));
  TheoremCase tc;
  tc.theorem = theorem;
  tc.seed = seed;
  std::optional<Target> target;
  if (theorem == "convex-inclusion-minimal") {
    target = convex_inclusion_target(s, true);
  } else if (theorem == "convex-inclusion-nonminimal") {
    target = convex_inclusion_target(s, false);
  } else if (theorem == "obstacle-minimal") {
    target = obstacle_target(s, ObstacleKind::Minimal);
  } else if (theorem == "obstacle-trivial") {
    target = obstacle_target(s, ObstacleKind::Trivial);
  } else if (theorem == "obstacle-nonminimal") {
    target = obstacle_target(s, ObstacleKind::NonMinimal);
  } else if (theorem == "rank-single-group") {
    target = rank_target(s, false);
  } else if (theorem == "rank-round-robin") {
    target = rank_target(s, true);
  } else if (theorem == "model-rows" || theorem == "full-dimension") {
    Instance inst = random_small_instance(s);
    ZPolytope zp = enumerate_feasible(inst, workers);
    int dim = polytope_dimension(zp);
    tc.num_z = inst.num_z();
    tc.instance = inst;
    tc.expected_facet = true;
    if (theorem == "full-dimension") {
      tc.report.polytope_dimension = dim;
      tc.report.verdict = dim == static_cast<int>(zp.n) ? Verdict::Facet : Verdict::ProperFaceNotFacet;
      tc.contradiction = dim != static_cast<int>(zp.n);
      tc.note = "dim=" + std::to_string(dim) + " n=" + std::to_string(zp.n);
      return tc;
    }
    std::size_t facets = 0, rows = 0;
    for (const auto& q : model_row_inequalities(inst)) {
      FacetReport r = check_inequality(zp, q, dim);
      ++rows;
      if (r.verdict == Verdict::Facet) {
        ++facets;
      } else if (!tc.contradiction) {
        tc.contradiction = true;
        tc.report = r;
      }
      if (rows == 1 && !tc.contradiction) tc.report = r;
    }
    tc.note = std::to_string(facets) + "/" + std::to_string(rows) + " model rows are facets";
    return tc;
  } else {
    throw InputError("unknown theorem family '" + theorem + "'");
  }
  tc.num_z = target->inst.num_z();
  tc.instance = target->inst;
  tc.applicable = target->applicable;
  tc.expected_facet = target->expected_facet;
  tc.note = target->note;
  ZPolytope zp = enumerate_feasible(target->inst, workers);
  tc.report = check_inequality(zp, target->cut);
  bool is_facet = tc.report.verdict == Verdict::Facet;
  tc.contradiction = tc.report.verdict == Verdict::NotValid || (tc.applicable && is_facet != tc.expected_facet);
  return tc;
}

SuiteReport theorem_suite(const std::vector<std::string>& theorems, std::size_t instances, std::uint64_t base_seed,
                          std::size_t workers) {
  auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  for (const auto& name : theorems) {
    TheoremSummary sum;
    sum.theorem = name;
    for (std::size_t i = 0; i < instances; ++i) {
      TheoremCase tc = run_theorem_case(name, base_seed + i, workers);
      ++sum.instances;
      if (tc.applicable) ++sum.applicable;
      if (tc.report.verdict == Verdict::Facet) ++sum.facets;
      if (tc.contradiction) ++sum.contradictions;
      rep.cases.push_back(std::move(tc));
    }
    rep.contradictions += sum.contradictions;
    rep.summary.push_back(sum);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace pwlsep
