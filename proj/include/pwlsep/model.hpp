#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pwlsep/geometry.hpp"
#include "pwlsep/inequality.hpp"
#include "pwlsep/lp.hpp"

namespace pwlsep {

enum class Label { Blue, Red };

/// Labelled point set with group budgets. Immutable after construction.
///
/// z-variables are numbered point by point (ascending point index), and
/// within a point by group index.
class Instance {
 public:
  Instance(std::size_t dimension, std::vector<Point> points, std::vector<Label> labels,
           std::size_t blue_groups, std::size_t red_groups);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t i) const { return points_.at(i); }
  const std::vector<Label>& labels() const { return labels_; }
  Label label(std::size_t i) const { return labels_.at(i); }
  std::size_t blue_groups() const { return blue_groups_; }
  std::size_t red_groups() const { return red_groups_; }
  const IndexList& blue() const { return blue_; }
  const IndexList& red() const { return red_; }
  const IndexList& side(Label l) const { return l == Label::Blue ? blue_ : red_; }
  std::size_t groups_of(std::size_t point) const;
  std::size_t groups_of(Label l) const { return l == Label::Blue ? blue_groups_ : red_groups_; }

  std::size_t num_z() const { return num_z_; }
  std::size_t z_index(std::size_t point, std::size_t group) const;
  std::size_t z_point(std::size_t var) const { return z_point_.at(var); }
  std::size_t z_group(std::size_t var) const { return z_group_.at(var); }
  std::string z_name(std::size_t var) const;

  Instance with_budgets(std::size_t blue_groups, std::size_t red_groups) const;
  Rational max_abs_coordinate() const;

 private:
  std::size_t dimension_;
  std::vector<Point> points_;
  std::vector<Label> labels_;
  std::size_t blue_groups_, red_groups_;
  IndexList blue_, red_;
  std::vector<std::size_t> z_offset_;
  std::vector<std::size_t> z_point_, z_group_;
  std::size_t num_z_ = 0;
};

Label opposite(Label l);

/// Group per point, -1 for outliers. Assignment rows hold by construction.
struct Assignment {
  std::vector<int> group;

  static Assignment all_outliers(const Instance& inst);
  /// Rejects z vectors violating an assignment row.
  static Assignment from_z(const Instance& inst, std::span<const std::uint8_t> z);
  static Assignment from_mask(const Instance& inst, std::uint32_t zmask);

  std::vector<std::uint8_t> to_z(const Instance& inst) const;
  std::uint32_t to_mask(const Instance& inst) const;
  std::vector<std::uint8_t> outlier_flags() const;
  IndexList outliers() const;
  IndexList members(const Instance& inst, Label side, std::size_t g) const;

  bool operator==(const Assignment&) const = default;
};

/// Number of assigned points (the maximisation objective).
std::size_t objective_value(const Assignment& a);
std::size_t outlier_count(const Assignment& a);

/// Certificate with instance-global point indices and convex weights.
struct IndexedCertificate {
  std::vector<std::pair<std::size_t, Rational>> blue;
  std::vector<std::pair<std::size_t, Rational>> red;

  static IndexedCertificate from(const ConvexCombinationCertificate& cert, const IndexList& blue_ids,
                                 const IndexList& red_ids);
};

struct PairSeparator {
  std::size_t blue_group = 0, red_group = 0;
  Hyperplane hyperplane;
};

struct PairFailure {
  std::size_t blue_group = 0, red_group = 0;
  IndexedCertificate certificate;
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<PairSeparator> separators;  // all pairs when feasible
  std::optional<PairFailure> failure;     // first failing pair otherwise
};

/// Every blue group separable from every red group; pairs are scanned
/// (k, ℓ) lexicographically and the first failing pair is reported.
FeasibilityReport is_feasible(const Instance& inst, const Assignment& a);

/// Memoised pairwise separability, safe for concurrent callers.
class FeasibilityOracle {
 public:
  explicit FeasibilityOracle(const Instance& inst) : inst_(inst) {}

  bool separable(const IndexList& blue_ids, const IndexList& red_ids);
  bool feasible(const Assignment& a);
  bool feasible_mask(std::uint32_t zmask) { return feasible(Assignment::from_mask(inst_, zmask)); }
  const Instance& instance() const { return inst_; }
  std::size_t cache_size() const;

 private:
  const Instance& inst_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, bool> cache_;
};

struct BigMConfig {
  Rational M = 10;

  /// 10 · (1 + max |coordinate|) · d
  static BigMConfig defaults(const Instance& inst);
};

enum class VariableType { Continuous, Binary };

struct MilpVariable {
  std::string name;
  VariableType type = VariableType::Continuous;
  std::optional<Rational> lower, upper;
};

struct MilpRow {
  std::string name;
  std::vector<std::pair<std::size_t, Rational>> terms;
  RowSense sense = RowSense::LessEqual;
  Rational rhs;
};

struct MilpModel {
  bool maximize = true;
  std::vector<MilpVariable> variables;
  std::vector<MilpRow> rows;
  std::vector<std::pair<std::size_t, Rational>> objective;
  Rational big_m;
  std::vector<std::string> notes;

  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t add_variable(MilpVariable v);
};

enum class ObjectiveForm { MaximizeAssigned, MinimizeOutliers };

MilpModel build_milp(const Instance& inst, const BigMConfig& cfg,
                     ObjectiveForm form = ObjectiveForm::MaximizeAssigned);

/// With binaries fixed to `z`, is the continuous part of `model` feasible?
bool milp_admits(const MilpModel& model, const Instance& inst, std::span<const std::uint8_t> z);

/// CPLEX-style LP text. Rows with fractional data are scaled by the least
/// common denominator so every written coefficient is an exact integer or
/// terminating decimal.
void export_lp_format(const MilpModel& model, std::ostream& out);
void export_lp_format(const MilpModel& model, const std::string& path);

/// Reader for the subset of the LP format written above.
MilpModel parse_lp_format(std::istream& in);

/// (M+1)(Σ υ_ik z_ik + Σ υ_jℓ z_jℓ) ≤ 2M over the certificate support.
///
/// M is raised to max(cfg.M, 2/υ_min − 1) so that dropping any single
/// support point restores validity; with the configured M alone the cut can
/// exclude feasible assignments when some weight is below 2/(M+1).
ZInequality farkas_projection_cut(const Instance& inst, std::size_t blue_group, std::size_t red_group,
                                  const IndexedCertificate& cert, const BigMConfig& cfg);

}  // namespace pwlsep
