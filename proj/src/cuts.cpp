#include "pwlsep/cuts.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pwlsep {

namespace {

using nlohmann::json;

IndexList sorted(IndexList v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Point> points_of(const Instance& inst, const IndexList& ids) { return gather(inst.points(), ids); }

IndexList map_ids(const IndexList& local, const IndexList& global) {
  IndexList out;
  out.reserve(local.size());
  for (auto i : local) out.push_back(global.at(i));
  return sorted(out);
}

void check_point(const Instance& inst, std::size_t i) {
  if (i >= inst.size()) throw InputError("point index " + std::to_string(i) + " out of range");
}

void check_group(const Instance& inst, Label side, std::size_t g) {
  if (g >= inst.groups_of(side)) throw InputError("group index " + std::to_string(g) + " out of range");
}

json ids_json(const IndexList& ids) { return json(ids); }

}  // namespace

// ------------------------------------------------------------ single cuts

ZInequality convex_inclusion_inequality(const Instance& inst, std::size_t point, const IndexList& set,
                                        std::size_t set_group) {
  check_point(inst, point);
  Label pside = inst.label(point), sside = opposite(pside);
  check_group(inst, sside, set_group);
  IndexList s = sorted(set);
  if (s.empty()) throw PreconditionError("convex-inclusion set is empty");
  for (auto i : s) {
    check_point(inst, i);
    if (inst.label(i) != sside) throw PreconditionError("convex-inclusion set must lie in the opposite class");
  }
  if (!in_convex_hull(inst.point(point), points_of(inst, s))) {
    throw PreconditionError("point is not in the convex hull of the set");
  }
  ZInequality q;
  for (auto i : s) q.coeffs[inst.z_index(i, set_group)] += 1;
  for (std::size_t g = 0; g < inst.groups_of(pside); ++g) q.coeffs[inst.z_index(point, g)] += 1;
  q.rhs = Rational(static_cast<long>(s.size()));
  q.provenance.family = CutFamily::ConvexInclusion;
  q.provenance.mirrored = pside == Label::Blue;
  q.provenance.set = s;
  q.provenance.endpoints = {point};
  q.provenance.set_group = set_group;
  return q;
}

namespace {

std::vector<ZInequality> convex_inclusion_all(const Instance& inst, std::size_t point, std::size_t set_group,
                                              Label expected) {
  check_point(inst, point);
  if (inst.label(point) != expected) throw InputError("point has the wrong class for this cut family");
  const IndexList& hull_ids = inst.side(opposite(expected));
  check_group(inst, opposite(expected), set_group);
  std::vector<ZInequality> out;
  if (hull_ids.empty()) return out;
  auto hull = points_of(inst, hull_ids);
  const Point& x = inst.point(point);
  if (!in_convex_hull(x, hull)) return out;

  std::set<IndexList> found;
  IndexList first = map_ids(minimal_inclusion_subset(x, hull), hull_ids);
  found.insert(first);
  // Alternatives: forbid each member of the first subset in turn.
  for (auto banned : first) {
    IndexList rest;
    for (auto i : hull_ids)
      if (i != banned) rest.push_back(i);
    if (rest.empty()) continue;
    auto rp = points_of(inst, rest);
    if (!in_convex_hull(x, rp)) continue;
    found.insert(map_ids(minimal_inclusion_subset(x, rp), rest));
  }
  for (const auto& s : found) out.push_back(convex_inclusion_inequality(inst, point, s, set_group));
  return out;
}

}  // namespace

std::vector<ZInequality> gen_convex_inclusion(const Instance& inst, std::size_t red_point, std::size_t blue_group) {
  return convex_inclusion_all(inst, red_point, blue_group, Label::Red);
}

std::vector<ZInequality> gen_convex_inclusion_mirrored(const Instance& inst, std::size_t blue_point,
                                                       std::size_t red_group) {
  return convex_inclusion_all(inst, blue_point, red_group, Label::Blue);
}

ZInequality obstacle_inequality(const Instance& inst, std::size_t j1, std::size_t j2, const IndexList& set,
                                std::size_t set_group, std::size_t endpoint_group) {
  check_point(inst, j1);
  check_point(inst, j2);
  if (j1 == j2) throw InputError("obstacle endpoints must differ");
  Label eside = inst.label(j1);
  if (inst.label(j2) != eside) throw InputError("obstacle endpoints must share a class");
  Label sside = opposite(eside);
  check_group(inst, sside, set_group);
  check_group(inst, eside, endpoint_group);
  IndexList s = sorted(set);
  for (auto i : s) {
    check_point(inst, i);
    if (inst.label(i) != sside) throw PreconditionError("obstacle set must lie in the opposite class");
  }
  if (s.empty() || !obstacle_between(inst.point(j1), inst.point(j2), points_of(inst, s))) {
    throw PreconditionError("set is not an obstacle between the endpoints");
  }
  ZInequality q;
  q.coeffs[inst.z_index(j1, endpoint_group)] += 1;
  q.coeffs[inst.z_index(j2, endpoint_group)] += 1;
  for (auto i : s) q.coeffs[inst.z_index(i, set_group)] += 1;
  q.rhs = Rational(static_cast<long>(s.size() + 1));
  q.provenance.family = CutFamily::Obstacle;
  q.provenance.mirrored = eside == Label::Blue;
  q.provenance.set = s;
  q.provenance.endpoints = {std::min(j1, j2), std::max(j1, j2)};
  q.provenance.set_group = set_group;
  q.provenance.endpoint_group = endpoint_group;
  return q;
}

std::optional<ZInequality> gen_obstacle(const Instance& inst, std::size_t j1, std::size_t j2, std::size_t set_group,
                                        std::size_t endpoint_group) {
  check_point(inst, j1);
  check_point(inst, j2);
  if (j1 == j2) throw InputError("obstacle endpoints must differ");
  Label eside = inst.label(j1);
  if (inst.label(j2) != eside) throw InputError("obstacle endpoints must share a class");
  const IndexList& ids = inst.side(opposite(eside));
  if (ids.empty()) return std::nullopt;
  auto pts = points_of(inst, ids);
  const Point &y1 = inst.point(j1), &y2 = inst.point(j2);
  if (!obstacle_between(y1, y2, pts)) return std::nullopt;
  try {
    IndexList s = map_ids(minimal_obstacle_subset(y1, y2, pts), ids);
    return obstacle_inequality(inst, j1, j2, s, set_group, endpoint_group);
  } catch (const TrivialOnlyError&) {
    for (auto j : {j1, j2}) {
      if (!in_convex_hull(inst.point(j), pts)) continue;
      IndexList s = map_ids(minimal_inclusion_subset(inst.point(j), pts), ids);
      return convex_inclusion_inequality(inst, j, s, set_group);
    }
    return std::nullopt;
  } catch (const LimitError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------- obstacle graph

GroupRule default_group_rule(const Instance& inst) {
  std::size_t nb = inst.blue_groups();
  return [nb](std::size_t e, const ObstacleEdge&) { return nb == 1 ? std::size_t{0} : e % nb; };
}

namespace {

void validate_vertices(const Instance& inst, const IndexList& v) {
  for (auto j : v) {
    check_point(inst, j);
    if (inst.label(j) != Label::Red) throw InputError("obstacle graph vertices must be red points");
  }
}

}  // namespace

ObstacleGraph build_obstacle_graph(const Instance& inst, const IndexList& vertices, const GroupRule& rule) {
  ObstacleGraph g;
  g.vertices = sorted(vertices);
  validate_vertices(inst, g.vertices);
  GroupRule r = rule ? rule : default_group_rule(inst);
  const IndexList& blue = inst.blue();
  if (blue.empty()) return g;
  auto pts = points_of(inst, blue);
  for (std::size_t a = 0; a < g.vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < g.vertices.size(); ++b) {
      std::size_t u = g.vertices[a], v = g.vertices[b];
      if (!obstacle_between(inst.point(u), inst.point(v), pts)) continue;
      try {
        ObstacleEdge e{u, v, map_ids(minimal_obstacle_subset(inst.point(u), inst.point(v), pts), blue), 0};
        e.group = r(g.edges.size(), e);
        check_group(inst, Label::Blue, e.group);
        g.edges.push_back(std::move(e));
      } catch (const TrivialOnlyError&) {
      } catch (const LimitError&) {
      }
    }
  }
  return g;
}

ObstacleGraph make_obstacle_graph(const Instance& inst, IndexList vertices, std::vector<ObstacleEdge> edges) {
  ObstacleGraph g;
  g.vertices = sorted(std::move(vertices));
  validate_vertices(inst, g.vertices);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw InputError("obstacle graph edge is a loop");
    if (!std::binary_search(g.vertices.begin(), g.vertices.end(), e.u) ||
        !std::binary_search(g.vertices.begin(), g.vertices.end(), e.v)) {
      throw InputError("obstacle graph edge leaves the vertex set");
    }
    if (!seen.insert({e.u, e.v}).second) throw InputError("duplicate obstacle graph edge");
    check_group(inst, Label::Blue, e.group);
    e.obstacle = sorted(e.obstacle);
    for (auto i : e.obstacle) {
      check_point(inst, i);
      if (inst.label(i) != Label::Blue) throw InputError("edge obstacles must be blue points");
    }
    if (e.obstacle.empty() ||
        !obstacle_between(inst.point(e.u), inst.point(e.v), points_of(inst, e.obstacle))) {
      throw PreconditionError("edge set is not an obstacle between its endpoints");
    }
  }
  g.edges = std::move(edges);
  return g;
}

int stability_number(std::size_t n, const std::vector<std::uint64_t>& adjacency, std::uint64_t* witness) {
  if (n > 64) throw InputError("stability number limited to 64 vertices");
  int best = 0;
  std::uint64_t best_set = 0;
  auto rec = [&](auto&& self, std::uint64_t cand, std::uint64_t chosen, int size) -> void {
    if (cand == 0) {
      if (size > best) {
        best = size;
        best_set = chosen;
      }
      return;
    }
    if (size + std::popcount(cand) <= best) return;
    // Branch on the candidate of largest remaining degree (lowest index on ties).
    int pick = -1, deg = -1;
    for (std::uint64_t c = cand; c; c &= c - 1) {
      int v = std::countr_zero(c);
      int dv = std::popcount(adjacency[v] & cand);
      if (dv > deg) {
        deg = dv;
        pick = v;
      }
    }
    std::uint64_t bit = std::uint64_t{1} << pick;
    if (deg == 0) {
      self(self, 0, chosen | cand, size + std::popcount(cand));
      return;
    }
    self(self, cand & ~bit & ~adjacency[pick], chosen | bit, size + 1);
    self(self, cand & ~bit, chosen, size);
  };
  std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  rec(rec, all, 0, 0);
  if (witness) *witness = best_set;
  return best;
}

namespace {

struct LocalGraph {
  std::size_t n = 0;
  std::vector<std::uint64_t> adj;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // local endpoints
};

LocalGraph localize(const ObstacleGraph& g) {
  if (g.vertices.size() > 64) throw InputError("obstacle graphs are limited to 64 vertices");
  LocalGraph lg;
  lg.n = g.vertices.size();
  lg.adj.assign(lg.n, 0);
  auto pos = [&](std::size_t j) {
    return static_cast<std::size_t>(std::lower_bound(g.vertices.begin(), g.vertices.end(), j) - g.vertices.begin());
  };
  for (const auto& e : g.edges) {
    std::size_t a = pos(e.u), b = pos(e.v);
    lg.adj[a] |= std::uint64_t{1} << b;
    lg.adj[b] |= std::uint64_t{1} << a;
    lg.edges.emplace_back(a, b);
  }
  return lg;
}

IndexList unmask(std::uint64_t m, const IndexList& vertices) {
  IndexList out;
  for (; m; m &= m - 1) out.push_back(vertices[static_cast<std::size_t>(std::countr_zero(m))]);
  return out;
}

}  // namespace

GraphCertificates certify_graph(const Instance& inst, const ObstacleGraph& g, std::size_t enumeration_limit) {
  GraphCertificates c;
  LocalGraph lg = localize(g);
  std::uint64_t w = 0;
  c.alpha = stability_number(lg.n, lg.adj, &w);
  c.max_stable_set = unmask(w, g.vertices);

  c.disjoint = true;
  for (std::size_t a = 0; a < g.edges.size() && c.disjoint; ++a) {
    for (std::size_t b = a + 1; b < g.edges.size(); ++b) {
      const auto &sa = g.edges[a].obstacle, &sb = g.edges[b].obstacle;
      IndexList common;
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
      if (!common.empty()) {
        c.disjoint = false;
        c.overlapping_edges = std::make_pair(a, b);
        break;
      }
    }
  }

  c.minimal = true;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (!is_minimal_obstacle(inst.point(edge.u), inst.point(edge.v), points_of(inst, edge.obstacle))) {
      c.minimal = false;
      c.nonminimal_edge = e;
      break;
    }
  }

  c.critical = true;
  c.critical_witness.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto adj = lg.adj;
    auto [a, b] = lg.edges[e];
    adj[a] &= ~(std::uint64_t{1} << b);
    adj[b] &= ~(std::uint64_t{1} << a);
    std::uint64_t we = 0;
    int ae = stability_number(lg.n, adj, &we);
    if (ae == c.alpha + 1) {
      c.critical_witness[e] = unmask(we, g.vertices);
    } else if (c.critical) {
      c.critical = false;
      c.noncritical_edge = e;
    }
  }

  c.connected = true;
  if (lg.n > 0) {
    std::uint64_t seen = 1, frontier = 1;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= lg.adj[static_cast<std::size_t>(std::countr_zero(f))];
      frontier = next & ~seen;
      seen |= next;
    }
    for (std::size_t v = 0; v < lg.n; ++v) {
      if (!(seen >> v & 1u)) {
        c.connected = false;
        c.disconnected_vertex = g.vertices[v];
        break;
      }
    }
  }

  if (lg.n <= enumeration_limit && lg.n < 63) {
    std::uint64_t total = std::uint64_t{1} << lg.n;
    for (std::uint64_t m = 0; m < total; ++m) {
      if (std::popcount(m) != c.alpha) continue;
      bool stable = true;
      for (std::uint64_t r = m; r && stable; r &= r - 1) {
        if (lg.adj[static_cast<std::size_t>(std::countr_zero(r))] & m) stable = false;
      }
      if (stable) c.maximum_stable_sets.push_back(unmask(m, g.vertices));
    }
    std::sort(c.maximum_stable_sets.begin(), c.maximum_stable_sets.end());
    c.maximum_sets_complete = true;
  }
  return c;
}

namespace {

/// S_t for every t in L_B.
std::vector<IndexList> sets_by_group(const Instance& inst, const ObstacleGraph& g) {
  std::vector<IndexList> st(inst.blue_groups());
  for (const auto& e : g.edges) st.at(e.group).insert(st.at(e.group).end(), e.obstacle.begin(), e.obstacle.end());
  for (auto& s : st) s = sorted(s);
  return st;
}

IndexList union_of_obstacles(const ObstacleGraph& g) {
  IndexList s;
  for (const auto& e : g.edges) s.insert(s.end(), e.obstacle.begin(), e.obstacle.end());
  return sorted(s);
}

bool ids_separable(const Instance& inst, const IndexList& red_ids, const IndexList& blue_ids) {
  return separable(points_of(inst, blue_ids), points_of(inst, red_ids));
}

}  // namespace

RankHypotheses check_rank_hypotheses(const Instance& inst, const ObstacleGraph& g, const GraphCertificates& certs) {
  RankHypotheses h;
  h.structural =
      g.vertices.size() > 1 && certs.disjoint && certs.minimal && certs.critical && certs.connected;
  if (!certs.maximum_sets_complete) return h;
  auto st = sets_by_group(inst, g);
  IndexList all_s = union_of_obstacles(g);
  const auto& maxsets = certs.maximum_stable_sets;

  bool ok = true;
  for (const auto& I : maxsets) {
    for (const auto& s : st) {
      if (!ids_separable(inst, I, s)) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
  }
  h.separable_max_sets = ok;

  ok = true;
  for (auto j : inst.red()) {
    if (std::binary_search(g.vertices.begin(), g.vertices.end(), j)) continue;
    bool some = false;
    for (const auto& I : maxsets) {
      IndexList ij = I;
      ij.push_back(j);
      bool all_t = true;
      for (const auto& s : st) {
        if (!ids_separable(inst, ij, s)) {
          all_t = false;
          break;
        }
      }
      if (all_t) {
        some = true;
        break;
      }
    }
    if (!some) {
      ok = false;
      break;
    }
  }
  h.extra_red_points = ok;

  ok = true;
  for (auto i : inst.blue()) {
    if (std::binary_search(all_s.begin(), all_s.end(), i)) continue;
    for (std::size_t t = 0; t < st.size() && ok; ++t) {
      IndexList s = st[t];
      s.push_back(i);
      bool some = false;
      for (const auto& I : maxsets) {
        if (ids_separable(inst, I, s)) {
          some = true;
          break;
        }
      }
      if (!some) ok = false;
    }
    if (!ok) break;
  }
  h.extra_blue_points = ok;
  return h;
}

ZInequality gen_rank(const Instance& inst, const ObstacleGraph& g, std::size_t red_group,
                     const GraphCertificates& certs, bool check_hypotheses) {
  check_group(inst, Label::Red, red_group);
  if (g.vertices.empty()) throw PreconditionError("rank inequality needs a nonempty vertex set");
  ZInequality q;
  Rational rhs = certs.alpha;
  for (auto j : g.vertices) q.coeffs[inst.z_index(j, red_group)] += 1;
  json edges = json::array();
  for (const auto& e : g.edges) {
    for (auto i : e.obstacle) q.coeffs[inst.z_index(i, e.group)] += 1;
    rhs += static_cast<long>(e.obstacle.size());
    edges.push_back({e.u, e.v, ids_json(e.obstacle), e.group});
  }
  q.rhs = rhs;
  q.provenance.family = CutFamily::ObstacleRank;
  q.provenance.set = union_of_obstacles(g);
  q.provenance.endpoints = g.vertices;
  q.provenance.endpoint_group = red_group;
  json detail = {{"alpha", certs.alpha},
                 {"edges", edges},
                 {"disjoint", certs.disjoint},
                 {"minimal", certs.minimal},
                 {"critical", certs.critical},
                 {"connected", certs.connected}};
  if (check_hypotheses) {
    RankHypotheses h = check_rank_hypotheses(inst, g, certs);
    auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
    detail["hypotheses"] = {{"structural", h.structural},
                            {"i", opt(h.separable_max_sets)},
                            {"ii", opt(h.extra_red_points)},
                            {"iii", opt(h.extra_blue_points)},
                            {"verified", h.verified()}};
  }
  q.provenance.detail = detail.dump();
  return q;
}

// -------------------------------------------------------------- separation

CutSeparator::CutSeparator(const Instance& inst, SeparationConfig cfg)
    : inst_(inst), cfg_(std::move(cfg)), inside_(inst.size(), -1) {}

bool CutSeparator::inside_opposite_hull(std::size_t p) {
  {
    std::lock_guard lock(mutex_);
    if (inside_[p] >= 0) return inside_[p] == 1;
  }
  const IndexList& ids = inst_.side(opposite(inst_.label(p)));
  bool in = !ids.empty() && in_convex_hull(inst_.point(p), points_of(inst_, ids)).has_value();
  std::lock_guard lock(mutex_);
  inside_[p] = in ? 1 : 0;
  return in;
}

std::optional<IndexList> CutSeparator::obstacle_set(std::size_t a, std::size_t b) {
  auto key = std::make_pair(std::min(a, b), std::max(a, b));
  {
    std::lock_guard lock(mutex_);
    if (auto it = obstacles_.find(key); it != obstacles_.end()) return it->second;
  }
  std::optional<IndexList> result;
  const IndexList& ids = inst_.side(opposite(inst_.label(a)));
  if (!ids.empty()) {
    auto pts = points_of(inst_, ids);
    if (obstacle_between(inst_.point(a), inst_.point(b), pts)) {
      try {
        result = map_ids(minimal_obstacle_subset(inst_.point(a), inst_.point(b), pts), ids);
      } catch (const TrivialOnlyError&) {
      } catch (const LimitError&) {
      }
    }
  }
  std::lock_guard lock(mutex_);
  obstacles_.emplace(key, result);
  return result;
}

std::vector<ZInequality> CutSeparator::separate(std::span<const double> zstar) {
  if (zstar.size() != inst_.num_z()) throw InputError("fractional point has the wrong length");
  std::vector<Candidate> found;
  auto consider = [&](ZInequality q) {
    Rational v = q.violation(zstar);
    if (v > cfg_.threshold) found.push_back({std::move(v), std::move(q)});
  };
  auto mass = [&](std::size_t p) {
    double s = 0;
    for (std::size_t g = 0; g < inst_.groups_of(p); ++g) s += zstar[inst_.z_index(p, g)];
    return s;
  };
  auto zval = [&](std::size_t p, std::size_t g) { return zstar[inst_.z_index(p, g)]; };

  std::vector<Label> sides{Label::Red};
  if (cfg_.mirrored) sides.push_back(Label::Blue);

  if (cfg_.convex_inclusion) {
    for (Label side : sides) {
      Label other = opposite(side);
      const IndexList& hull_ids = inst_.side(other);
      for (auto p : inst_.side(side)) {
        if (mass(p) <= 0 || !inside_opposite_hull(p)) continue;
        auto hull = points_of(inst_, hull_ids);
        for (std::size_t k = 0; k < inst_.groups_of(other); ++k) {
          // Remove lightly used points first so the surviving set carries mass.
          std::vector<std::size_t> order(hull_ids.size());
          std::iota(order.begin(), order.end(), 0);
          std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return zval(hull_ids[a], k) < zval(hull_ids[b], k);
          });
          IndexList s = map_ids(minimal_inclusion_subset(inst_.point(p), hull, order), hull_ids);
          consider(convex_inclusion_inequality(inst_, p, s, k));
        }
      }
    }
  }

  if (cfg_.obstacle) {
    for (Label side : sides) {
      Label other = opposite(side);
      const IndexList& ends = inst_.side(side);
      for (std::size_t a = 0; a < ends.size(); ++a) {
        for (std::size_t b = a + 1; b < ends.size(); ++b) {
          std::size_t j1 = ends[a], j2 = ends[b];
          std::vector<std::size_t> common;
          for (std::size_t l = 0; l < inst_.groups_of(side); ++l) {
            if (zval(j1, l) >= 0.5 && zval(j2, l) >= 0.5) common.push_back(l);
          }
          if (common.empty()) continue;
          auto s = obstacle_set(j1, j2);
          if (!s) continue;
          for (auto l : common) {
            for (std::size_t k = 0; k < inst_.groups_of(other); ++k) {
              consider(obstacle_inequality(inst_, j1, j2, *s, k, l));
            }
          }
        }
      }
    }
  }

  if (cfg_.rank && !inst_.blue().empty()) {
    GroupRule rule = default_group_rule(inst_);
    for (std::size_t l = 0; l < inst_.red_groups(); ++l) {
      IndexList v;
      for (auto j : inst_.red())
        if (zval(j, l) > 0) v.push_back(j);
      if (v.size() < 3) continue;  // single edges are obstacle cuts already
      if (v.size() > cfg_.max_rank_vertices) {
        std::stable_sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) { return zval(a, l) > zval(b, l); });
        v.resize(cfg_.max_rank_vertices);
      }
      v = sorted(v);
      ObstacleGraph g;
      g.vertices = v;
      for (std::size_t a = 0; a < v.size(); ++a) {
        for (std::size_t b = a + 1; b < v.size(); ++b) {
          if (auto s = obstacle_set(v[a], v[b])) {
            ObstacleEdge e{v[a], v[b], *s, 0};
            e.group = rule(g.edges.size(), e);
            g.edges.push_back(std::move(e));
          }
        }
      }
      if (g.edges.size() < 2) continue;
      GraphCertificates c = certify_graph(inst_, g, 0);
      consider(gen_rank(inst_, g, l, c, false));
    }
  }

  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return a.cut.provenance.key() < b.cut.provenance.key();
  });
  std::vector<ZInequality> out;
  std::unordered_set<std::string> keys;
  for (auto& c : found) {
    if (out.size() >= cfg_.max_cuts) break;
    if (keys.insert(c.cut.provenance.key()).second) out.push_back(std::move(c.cut));
  }
  return out;
}

std::vector<ZInequality> separate_cuts(const Instance& inst, std::span<const double> zstar,
                                       const SeparationConfig& cfg) {
  CutSeparator s(inst, cfg);
  return s.separate(zstar);
}

bool CutPool::add(ZInequality cut) {
  if (!keys_.insert(cut.provenance.key()).second) return false;
  cuts_.push_back(std::move(cut));
  return true;
}

std::vector<ZInequality> all_cuts(const Instance& inst, const CutFamilies& families) {
  CutPool pool;
  std::vector<Label> sides{Label::Red};
  if (families.mirrored) sides.push_back(Label::Blue);
  if (families.convex_inclusion) {
    for (Label side : sides) {
      for (auto p : inst.side(side)) {
        for (std::size_t k = 0; k < inst.groups_of(opposite(side)); ++k) {
          auto cuts = side == Label::Red ? gen_convex_inclusion(inst, p, k) : gen_convex_inclusion_mirrored(inst, p, k);
          for (auto& c : cuts) pool.add(std::move(c));
        }
      }
    }
  }
  if (families.obstacle) {
    for (Label side : sides) {
      const IndexList& ends = inst.side(side);
      for (std::size_t a = 0; a < ends.size(); ++a) {
        for (std::size_t b = a + 1; b < ends.size(); ++b) {
          for (std::size_t k = 0; k < inst.groups_of(opposite(side)); ++k) {
            for (std::size_t l = 0; l < inst.groups_of(side); ++l) {
              if (auto c = gen_obstacle(inst, ends[a], ends[b], k, l)) pool.add(std::move(*c));
            }
          }
        }
      }
    }
  }
  if (families.rank && inst.red().size() >= 2 && inst.red().size() <= 12) {
    ObstacleGraph g = build_obstacle_graph(inst, inst.red());
    // Restrict to vertices touched by an edge.
    IndexList touched;
    for (const auto& e : g.edges) {
      touched.push_back(e.u);
      touched.push_back(e.v);
    }
    g.vertices = sorted(touched);
    if (g.edges.size() >= 2) {
      GraphCertificates c = certify_graph(inst, g);
      for (std::size_t l = 0; l < inst.red_groups(); ++l) pool.add(gen_rank(inst, g, l, c));
    }
  }
  return pool.cuts();
}

// --------------------------------------------------------------- lifting

namespace {

void check_subsets(const Instance& inst, const IndexList& b, const IndexList& r) {
  for (auto i : b) {
    check_point(inst, i);
    if (inst.label(i) != Label::Blue) throw InputError("B' must contain blue points");
  }
  for (auto j : r) {
    check_point(inst, j);
    if (inst.label(j) != Label::Red) throw InputError("R' must contain red points");
  }
}

}  // namespace

bool hyperplane_inequality_valid(const Instance& inst, const IndexList& blue_subset, const IndexList& red_subset,
                                 const RationalVector& alpha, const Rational& lambda0) {
  check_subsets(inst, blue_subset, red_subset);
  std::size_t d = inst.dimension();
  if (alpha.size() != d + 1) throw InputError("alpha must have d+1 entries");
  LinearProgram lp(d + 1);
  lp.objective = alpha;
  for (auto i : blue_subset) {
    RationalVector row = inst.point(i);
    row.push_back(1);
    lp.add_row(row, RowSense::LessEqual, -1);
  }
  for (auto j : red_subset) {
    RationalVector row = inst.point(j);
    row.push_back(1);
    lp.add_row(row, RowSense::GreaterEqual, 1);
  }
  LpOutcome o = solve_exact(lp);
  if (o.status == LpStatus::Infeasible) return true;
  if (o.status == LpStatus::Unbounded) return false;
  return o.objective_value <= lambda0;
}

MilpRow lift_hyperplane_inequality(const Instance& inst, const MilpModel& model, const IndexList& blue_subset,
                                   const IndexList& red_subset, const RationalVector& alpha, const Rational& lambda0,
                                   const Rational& big_m_prime, std::size_t blue_group, std::size_t red_group) {
  check_subsets(inst, blue_subset, red_subset);
  check_group(inst, Label::Blue, blue_group);
  check_group(inst, Label::Red, red_group);
  std::size_t d = inst.dimension();
  if (alpha.size() != d + 1) throw InputError("alpha must have d+1 entries");
  auto var = [&](const std::string& name) {
    auto v = model.find(name);
    if (!v) throw InputError("model lacks variable " + name);
    return *v;
  };
  std::string kl = std::to_string(blue_group) + "_" + std::to_string(red_group);
  MilpRow row;
  row.name = "lift_" + kl + "_" + std::to_string(model.rows.size());
  for (std::size_t a = 0; a < d; ++a) {
    if (sgn(alpha[a]) != 0) row.terms.emplace_back(var("p_" + kl + "_" + std::to_string(a)), alpha[a]);
  }
  if (sgn(alpha[d]) != 0) row.terms.emplace_back(var("q_" + kl), alpha[d]);
  for (auto i : blue_subset) row.terms.emplace_back(var(inst.z_name(inst.z_index(i, blue_group))), big_m_prime);
  for (auto j : red_subset) row.terms.emplace_back(var(inst.z_name(inst.z_index(j, red_group))), big_m_prime);
  row.sense = RowSense::LessEqual;
  row.rhs = lambda0 + big_m_prime * static_cast<long>(blue_subset.size() + red_subset.size());
  return row;
}

}  // namespace pwlsep
