#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwlsep/geometry.hpp"

namespace pwlsep {

enum class CutFamily { ConvexInclusion, Obstacle, ObstacleRank, FarkasProjection, Lifted, ModelRow };

const char* to_string(CutFamily f);
CutFamily parse_cut_family(const std::string& name);

/// Generating data of an inequality. Point indices are instance-global.
struct Provenance {
  CutFamily family = CutFamily::ModelRow;
  bool mirrored = false;            // blue and red roles swapped
  IndexList set;                    // S: hull / obstacle set
  IndexList endpoints;              // j, or j1 < j2
  std::optional<std::size_t> set_group;
  std::optional<std::size_t> endpoint_group;
  std::string detail;               // free-form JSON text (graphs, hypotheses)

  std::string key() const;
};

/// Σ coeffs[v]·z_v ≤ rhs over z-variable ids.
struct ZInequality {
  std::map<std::size_t, Rational> coeffs;
  Rational rhs;
  Provenance provenance;

  Rational lhs(std::span<const std::uint8_t> z) const;
  Rational lhs(std::uint32_t zmask) const;
  double lhs(std::span<const double> z) const;
  bool satisfied_by(std::span<const std::uint8_t> z) const { return lhs(z) <= rhs; }
  bool satisfied_by(std::uint32_t zmask) const { return lhs(zmask) <= rhs; }

  /// Positive when violated; evaluated exactly after rationalising `z`.
  Rational violation(std::span<const double> z) const;
};

}  // namespace pwlsep
