#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "pwlsep/inequality.hpp"
#include "pwlsep/model.hpp"

namespace pwlsep {

// ------------------------------------------------------------ single cuts

/// Σ_{i∈S} z_{i,set_group} + Σ_g z_{point,g} ≤ |S| for x_point ∈ conv(x_S),
/// S on the side opposite to `point`. Throws PreconditionError otherwise.
ZInequality convex_inclusion_inequality(const Instance& inst, std::size_t point, const IndexList& set,
                                        std::size_t set_group);

/// All minimal S found for red point j and blue group k: the greedy one plus
/// those obtained by forbidding each of its members once. Empty when x_j is
/// outside conv(X_B).
std::vector<ZInequality> gen_convex_inclusion(const Instance& inst, std::size_t red_point, std::size_t blue_group);

/// Same with colours swapped: blue point i inside conv of red points.
std::vector<ZInequality> gen_convex_inclusion_mirrored(const Instance& inst, std::size_t blue_point,
                                                       std::size_t red_group);

/// z_{j1,eg} + z_{j2,eg} + Σ_{i∈S} z_{i,sg} ≤ |S| + 1; S must obstruct the
/// segment [x_j1, x_j2]. Endpoints share a colour, S has the other one.
ZInequality obstacle_inequality(const Instance& inst, std::size_t j1, std::size_t j2, const IndexList& set,
                                std::size_t set_group, std::size_t endpoint_group);

/// Obstacle cut from a nontrivial minimal obstacle inside the opposite
/// class. If only trivial obstacles exist, returns the convex-inclusion cut
/// of the endpoint lying in the hull (which dominates it together with the
/// assignment row). nullopt when the segment is separable.
std::optional<ZInequality> gen_obstacle(const Instance& inst, std::size_t j1, std::size_t j2, std::size_t set_group,
                                        std::size_t endpoint_group);

// ---------------------------------------------------------- obstacle graph

struct ObstacleEdge {
  std::size_t u = 0, v = 0;  // red point indices, u < v
  IndexList obstacle;        // blue point indices
  std::size_t group = 0;     // k_e
};

struct ObstacleGraph {
  IndexList vertices;  // sorted red point indices
  std::vector<ObstacleEdge> edges;
};

/// k_e as a function of the edge's position in the edge list.
using GroupRule = std::function<std::size_t(std::size_t edge_index, const ObstacleEdge&)>;

/// Single group when |L_B| = 1, otherwise round-robin over edges.
GroupRule default_group_rule(const Instance& inst);

/// One edge per vertex pair admitting a nontrivial minimal obstacle in X_B.
ObstacleGraph build_obstacle_graph(const Instance& inst, const IndexList& vertices, const GroupRule& rule = {});

/// Explicit graph; every obstacle is checked geometrically.
ObstacleGraph make_obstacle_graph(const Instance& inst, IndexList vertices, std::vector<ObstacleEdge> edges);

struct GraphCertificates {
  int alpha = 0;
  bool disjoint = false, minimal = false, critical = false, connected = false;
  IndexList max_stable_set;
  std::vector<IndexList> critical_witness;  // per edge: stable set of G∖e of size α+1, or empty
  std::optional<std::size_t> noncritical_edge;
  std::optional<std::size_t> nonminimal_edge;
  std::optional<std::pair<std::size_t, std::size_t>> overlapping_edges;
  std::optional<std::size_t> disconnected_vertex;
  std::vector<IndexList> maximum_stable_sets;  // filled when |V| ≤ enumeration limit
  bool maximum_sets_complete = false;
};

GraphCertificates certify_graph(const Instance& inst, const ObstacleGraph& g, std::size_t enumeration_limit = 12);

/// α by branch and bound over a bitmask adjacency (n ≤ 64).
int stability_number(std::size_t n, const std::vector<std::uint64_t>& adjacency, std::uint64_t* witness = nullptr);

struct RankHypotheses {
  bool structural = false;  // |V| > 1, disjoint, minimal, critical, connected
  std::optional<bool> separable_max_sets;     // (i)
  std::optional<bool> extra_red_points;       // (ii)
  std::optional<bool> extra_blue_points;      // (iii)

  bool verified() const {
    return structural && separable_max_sets.value_or(false) && extra_red_points.value_or(false) &&
           extra_blue_points.value_or(false);
  }
};

/// Facet hypotheses for the rank cut; separability parts stay unset when
/// the maximum stable sets could not be enumerated.
RankHypotheses check_rank_hypotheses(const Instance& inst, const ObstacleGraph& g, const GraphCertificates& certs);

/// Σ_{j∈V} z_jℓ + Σ_e Σ_{i∈S_e} z_{i,k_e} ≤ α(G) + Σ_e |S_e|.
ZInequality gen_rank(const Instance& inst, const ObstacleGraph& g, std::size_t red_group, const GraphCertificates& certs,
                     bool check_hypotheses = true);

// -------------------------------------------------------------- separation

struct SeparationConfig {
  Rational threshold = Rational(1, 100);
  bool convex_inclusion = true;
  bool obstacle = true;
  bool rank = true;
  bool mirrored = true;
  std::size_t max_rank_vertices = 12;
  std::size_t max_cuts = 64;
};

/// Violated cuts for a fractional point, most violated first. Geometry is
/// cached across calls; safe for concurrent use.
class CutSeparator {
 public:
  CutSeparator(const Instance& inst, SeparationConfig cfg = {});

  std::vector<ZInequality> separate(std::span<const double> zstar);

 private:
  struct Candidate {
    Rational violation;
    ZInequality cut;
  };
  std::optional<IndexList> obstacle_set(std::size_t a, std::size_t b);
  bool inside_opposite_hull(std::size_t p);

  const Instance& inst_;
  SeparationConfig cfg_;
  std::mutex mutex_;
  std::vector<int> inside_;  // -1 unknown, 0 no, 1 yes
  std::map<std::pair<std::size_t, std::size_t>, std::optional<IndexList>> obstacles_;
};

std::vector<ZInequality> separate_cuts(const Instance& inst, std::span<const double> zstar,
                                       const SeparationConfig& cfg = {});

/// Append-only pool deduplicated by provenance key.
class CutPool {
 public:
  bool add(ZInequality cut);
  const std::vector<ZInequality>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }

 private:
  std::vector<ZInequality> cuts_;
  std::unordered_set<std::string> keys_;
};

struct CutFamilies {
  bool convex_inclusion = true, obstacle = true, rank = true, mirrored = true;
};

/// Every cut the generators can produce for the instance, in a fixed order.
std::vector<ZInequality> all_cuts(const Instance& inst, const CutFamilies& families = {});

// --------------------------------------------------------------- lifting

/// Is α·(p, q) ≤ λ0 valid on {p·x_i + q ≤ -1 (i ∈ B'), p·x_j + q ≥ 1 (j ∈ R')}?
bool hyperplane_inequality_valid(const Instance& inst, const IndexList& blue_subset, const IndexList& red_subset,
                                 const RationalVector& alpha, const Rational& lambda0);

/// α·(p_kℓ, q_kℓ) ≤ λ0 + M'(|B'| + |R'| − Σ_{B'} z_ik − Σ_{R'} z_jℓ), as a model row.
MilpRow lift_hyperplane_inequality(const Instance& inst, const MilpModel& model, const IndexList& blue_subset,
                                   const IndexList& red_subset, const RationalVector& alpha, const Rational& lambda0,
                                   const Rational& big_m_prime, std::size_t blue_group, std::size_t red_group);

}  // namespace pwlsep
