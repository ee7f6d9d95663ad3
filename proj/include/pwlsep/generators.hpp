#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pwlsep/model.hpp"

namespace pwlsep {

/// Instance families understood by the generator.
const std::vector<std::string>& generator_families();

/// Random instance of a named family. Budgets default per family.
/// Throws InputError for an unknown family.
Instance generate_instance(const std::string& family, std::uint64_t seed,
                           std::optional<std::pair<std::size_t, std::size_t>> budgets = std::nullopt);

/// Fixed 4-dimensional instance: two triangles in orthogonal planes whose
/// hulls meet only at the origin.
Instance paper_4d_instance(std::size_t blue_groups = 1, std::size_t red_groups = 1);

/// Small helpers shared with the lab's targeted generators.
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed, long lo = -10, long hi = 10) : rng_(seed), lo_(lo), hi_(hi) {}

  Point point(std::size_t d);
  long integer(long lo, long hi);
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  long lo_, hi_;
};

/// Red triangle (points 0, 1, 2) with a blue pair crossing each edge:
/// points 3-4 cross edge 0-1, 5-6 cross 1-2, 7-8 cross 2-0.
Instance obstacle_triangle_family(PointSampler& s, std::size_t blue_groups, std::size_t red_groups);

/// Twice the signed area of (a, b, c) in the plane.
Rational orient2d(const Point& a, const Point& b, const Point& c);

/// Proper crossing of the open segments [a, b] and [c, d] in the plane.
bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d);

}  // namespace pwlsep
