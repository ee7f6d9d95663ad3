#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pwlsep/rational.hpp"

namespace pwlsep {

using Point = RationalVector;
using IndexList = std::vector<std::size_t>;

/// p·x + q = 0. As a separator of (blue, red) it satisfies
/// p·x + q ≤ -1 on blue and p·x + q ≥ 1 on red.
struct Hyperplane {
  RationalVector p;
  Rational q;

  Rational evaluate(const Point& x) const { return dot(p, x) + q; }
};

/// Convex weights on both sides reconstructing one common point.
struct ConvexCombinationCertificate {
  RationalVector weights_blue;
  RationalVector weights_red;

  Point common_point(std::span<const Point> blue) const;
  IndexList blue_support() const;
  IndexList red_support() const;
};

struct SeparabilityOutcome {
  std::optional<Hyperplane> separator;
  std::optional<ConvexCombinationCertificate> certificate;

  bool separable() const { return separator.has_value(); }
};

/// No strict separation possible once every reduction path ends in a trivial
/// obstacle.
class TrivialOnlyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Search budget exhausted before an answer was certified.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict separation (±1 margins) or a convex-combination certificate. A
/// double-precision LP is tried first; its separator is only returned after
/// exact verification, otherwise the exact LP decides.
SeparabilityOutcome separate(std::span<const Point> blue, std::span<const Point> red);

/// Same answer as separate() using only exact arithmetic.
SeparabilityOutcome separate_exact(std::span<const Point> blue, std::span<const Point> red);

bool separable(std::span<const Point> blue, std::span<const Point> red);

bool verify_separator(std::span<const Point> blue, std::span<const Point> red, const Hyperplane& h);
bool verify_certificate(std::span<const Point> blue, std::span<const Point> red,
                        const ConvexCombinationCertificate& cert);

/// Primal route: solves the convex-weight system directly. Used as the
/// independent check of separate()'s dual certificates.
std::optional<ConvexCombinationCertificate> intersect_hulls(std::span<const Point> blue,
                                                            std::span<const Point> red);

/// Weights over `hull` (weights_blue) reconstructing x (weights_red = {1}).
std::optional<ConvexCombinationCertificate> in_convex_hull(const Point& x, std::span<const Point> hull);

/// Greedy removal in `order` (ascending index by default). Result is sorted,
/// still contains x in its hull, and every single removal loses it.
IndexList minimal_inclusion_subset(const Point& x, std::span<const Point> hull,
                                   std::span<const std::size_t> order = {});

/// Certificate for conv(S) ∩ [y1, y2] ≠ ∅ (weights_red over {y1, y2}).
std::optional<ConvexCombinationCertificate> obstacle_between(const Point& y1, const Point& y2,
                                                             std::span<const Point> set);

enum class ObstacleClass { NotObstacle, Trivial, NonMinimal, NontrivialMinimal };

const char* to_string(ObstacleClass c);

/// Precedence: NotObstacle, then Trivial, then NonMinimal.
ObstacleClass classify_obstacle(const Point& y1, const Point& y2, std::span<const Point> set);

/// Minimality alone (every single removal destroys the obstruction),
/// regardless of triviality.
bool is_minimal_obstacle(const Point& y1, const Point& y2, std::span<const Point> set);

/// Subset of `set` classified NontrivialMinimal. Throws TrivialOnlyError
/// when none exists (always for y1 == y2), PreconditionError when `set` is
/// not an obstacle.
IndexList minimal_obstacle_subset(const Point& y1, const Point& y2, std::span<const Point> set,
                                  std::size_t node_budget = 1u << 16);

/// Dimension of the affine hull; -1 for the empty set.
int affine_dimension(std::span<const Point> points);

std::vector<Point> gather(std::span<const Point> points, std::span<const std::size_t> indices);

}  // namespace pwlsep
