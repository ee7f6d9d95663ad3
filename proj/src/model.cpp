#include "pwlsep/model.hpp"

#include <algorithm>
#include <sstream>

namespace pwlsep {

// ---------------------------------------------------------------- inequality

const char* to_string(CutFamily f) {
  switch (f) {
    case CutFamily::ConvexInclusion: return "convex-inclusion";
    case CutFamily::Obstacle: return "obstacle";
    case CutFamily::ObstacleRank: return "obstacle-rank";
    case CutFamily::FarkasProjection: return "farkas-projection";
    case CutFamily::Lifted: return "lifted";
    case CutFamily::ModelRow: return "model-row";
  }
  return "?";
}

CutFamily parse_cut_family(const std::string& name) {
  for (auto f : {CutFamily::ConvexInclusion, CutFamily::Obstacle, CutFamily::ObstacleRank,
                 CutFamily::FarkasProjection, CutFamily::Lifted, CutFamily::ModelRow}) {
    if (name == to_string(f)) return f;
  }
  if (name == "rank") return CutFamily::ObstacleRank;
  if (name == "farkas") return CutFamily::FarkasProjection;
  throw InputError("unknown cut family '" + name + "'");
}

std::string Provenance::key() const {
  std::ostringstream os;
  os << to_string(family) << (mirrored ? "~m" : "") << "|S";
  for (auto i : set) os << ',' << i;
  os << "|E";
  for (auto j : endpoints) os << ',' << j;
  os << "|k" << (set_group ? static_cast<long>(*set_group) : -1);
  os << "|l" << (endpoint_group ? static_cast<long>(*endpoint_group) : -1);
  os << '|' << detail;
  return os.str();
}

Rational ZInequality::lhs(std::span<const std::uint8_t> z) const {
  Rational s = 0;
  for (const auto& [v, c] : coeffs) {
    if (v < z.size() && z[v]) s += c;
  }
  return s;
}

Rational ZInequality::lhs(std::uint32_t zmask) const {
  Rational s = 0;
  for (const auto& [v, c] : coeffs) {
    if (v < 32 && (zmask >> v & 1u)) s += c;
  }
  return s;
}

double ZInequality::lhs(std::span<const double> z) const {
  double s = 0;
  for (const auto& [v, c] : coeffs) {
    if (v < z.size()) s += c.get_d() * z[v];
  }
  return s;
}

Rational ZInequality::violation(std::span<const double> z) const {
  Rational s = 0;
  for (const auto& [v, c] : coeffs) {
    if (v < z.size() && z[v] != 0.0) s += c * from_double(z[v]);
  }
  return s - rhs;
}

// ------------------------------------------------------------------ instance

Instance::Instance(std::size_t dimension, std::vector<Point> points, std::vector<Label> labels,
                   std::size_t blue_groups, std::size_t red_groups)
    : dimension_(dimension),
      points_(std::move(points)),
      labels_(std::move(labels)),
      blue_groups_(blue_groups),
      red_groups_(red_groups) {
  if (dimension_ == 0) throw InputError("dimension must be positive");
  if (points_.empty()) throw InputError("instance needs at least one point");
  if (labels_.size() != points_.size()) throw InputError("one label per point required");
  if (blue_groups_ == 0 || red_groups_ == 0) throw InputError("group budgets must be positive");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dimension_) {
      throw InputError("point " + std::to_string(i) + " has dimension " + std::to_string(points_[i].size()) +
                       ", expected " + std::to_string(dimension_));
    }
    (labels_[i] == Label::Blue ? blue_ : red_).push_back(i);
  }
  z_offset_.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    z_offset_[i] = num_z_;
    for (std::size_t g = 0; g < groups_of(i); ++g) {
      z_point_.push_back(i);
      z_group_.push_back(g);
    }
    num_z_ += groups_of(i);
  }
}

std::size_t Instance::groups_of(std::size_t point) const {
  return labels_.at(point) == Label::Blue ? blue_groups_ : red_groups_;
}

std::size_t Instance::z_index(std::size_t point, std::size_t group) const {
  if (point >= points_.size() || group >= groups_of(point)) {
    throw InputError("no z-variable for point " + std::to_string(point) + ", group " + std::to_string(group));
  }
  return z_offset_[point] + group;
}

std::string Instance::z_name(std::size_t var) const {
  return "z_" + std::to_string(z_point(var)) + "_" + std::to_string(z_group(var));
}

Instance Instance::with_budgets(std::size_t blue_groups, std::size_t red_groups) const {
  return Instance(dimension_, points_, labels_, blue_groups, red_groups);
}

Rational Instance::max_abs_coordinate() const {
  Rational m = 0;
  for (const auto& x : points_) {
    for (const auto& c : x) m = std::max(m, Rational(abs(c)));
  }
  return m;
}

Label opposite(Label l) { return l == Label::Blue ? Label::Red : Label::Blue; }

// ---------------------------------------------------------------- assignment

Assignment Assignment::all_outliers(const Instance& inst) {
  return Assignment{std::vector<int>(inst.size(), -1)};
}

Assignment Assignment::from_z(const Instance& inst, std::span<const std::uint8_t> z) {
  if (z.size() != inst.num_z()) throw InputError("z-vector has wrong length");
  Assignment a = all_outliers(inst);
  for (std::size_t v = 0; v < z.size(); ++v) {
    if (!z[v]) continue;
    std::size_t i = inst.z_point(v);
    if (a.group[i] >= 0) {
      throw InputError("point " + std::to_string(i) + " assigned to more than one group");
    }
    a.group[i] = static_cast<int>(inst.z_group(v));
  }
  return a;
}

Assignment Assignment::from_mask(const Instance& inst, std::uint32_t zmask) {
  if (inst.num_z() > 32) throw InputError("bitmask form limited to 32 z-variables");
  std::vector<std::uint8_t> z(inst.num_z());
  for (std::size_t v = 0; v < z.size(); ++v) z[v] = zmask >> v & 1u;
  return from_z(inst, z);
}

std::vector<std::uint8_t> Assignment::to_z(const Instance& inst) const {
  std::vector<std::uint8_t> z(inst.num_z(), 0);
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (group[i] >= 0) z[inst.z_index(i, static_cast<std::size_t>(group[i]))] = 1;
  }
  return z;
}

std::uint32_t Assignment::to_mask(const Instance& inst) const {
  if (inst.num_z() > 32) throw InputError("bitmask form limited to 32 z-variables");
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (group[i] >= 0) m |= std::uint32_t{1} << inst.z_index(i, static_cast<std::size_t>(group[i]));
  }
  return m;
}

std::vector<std::uint8_t> Assignment::outlier_flags() const {
  std::vector<std::uint8_t> o(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) o[i] = group[i] < 0;
  return o;
}

IndexList Assignment::outliers() const {
  IndexList out;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (group[i] < 0) out.push_back(i);
  }
  return out;
}

IndexList Assignment::members(const Instance& inst, Label side, std::size_t g) const {
  IndexList out;
  for (std::size_t i : inst.side(side)) {
    if (group[i] == static_cast<int>(g)) out.push_back(i);
  }
  return out;
}

std::size_t objective_value(const Assignment& a) {
  return static_cast<std::size_t>(std::count_if(a.group.begin(), a.group.end(), [](int g) { return g >= 0; }));
}

std::size_t outlier_count(const Assignment& a) { return a.group.size() - objective_value(a); }

IndexedCertificate IndexedCertificate::from(const ConvexCombinationCertificate& cert, const IndexList& blue_ids,
                                            const IndexList& red_ids) {
  IndexedCertificate out;
  for (std::size_t t = 0; t < blue_ids.size(); ++t) {
    if (sgn(cert.weights_blue[t]) != 0) out.blue.emplace_back(blue_ids[t], cert.weights_blue[t]);
  }
  for (std::size_t t = 0; t < red_ids.size(); ++t) {
    if (sgn(cert.weights_red[t]) != 0) out.red.emplace_back(red_ids[t], cert.weights_red[t]);
  }
  return out;
}

FeasibilityReport is_feasible(const Instance& inst, const Assignment& a) {
  if (a.group.size() != inst.size()) throw InputError("assignment length differs from instance size");
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (a.group[i] >= static_cast<int>(inst.groups_of(i))) {
      throw InputError("point " + std::to_string(i) + " assigned to a nonexistent group");
    }
  }
  FeasibilityReport rep;
  for (std::size_t k = 0; k < inst.blue_groups(); ++k) {
    IndexList bk = a.members(inst, Label::Blue, k);
    auto bpts = gather(inst.points(), bk);
    for (std::size_t l = 0; l < inst.red_groups(); ++l) {
      IndexList rl = a.members(inst, Label::Red, l);
      auto rpts = gather(inst.points(), rl);
      SeparabilityOutcome out = separate(bpts, rpts);
      if (!out.separable()) {
        rep.feasible = false;
        rep.separators.clear();
        rep.failure = PairFailure{k, l, IndexedCertificate::from(*out.certificate, bk, rl)};
        return rep;
      }
      rep.separators.push_back(PairSeparator{k, l, *out.separator});
    }
  }
  rep.feasible = true;
  return rep;
}

bool FeasibilityOracle::separable(const IndexList& blue_ids, const IndexList& red_ids) {
  if (blue_ids.empty() || red_ids.empty()) return true;
  std::string key;
  key.reserve(4 * (blue_ids.size() + red_ids.size()) + 1);
  for (auto i : blue_ids) key.append(std::to_string(i)).push_back(',');
  key.push_back('|');
  for (auto j : red_ids) key.append(std::to_string(j)).push_back(',');
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  bool result = pwlsep::separable(gather(inst_.points(), blue_ids), gather(inst_.points(), red_ids));
  std::lock_guard lock(mutex_);
  cache_.emplace(std::move(key), result);
  return result;
}

bool FeasibilityOracle::feasible(const Assignment& a) {
  for (std::size_t k = 0; k < inst_.blue_groups(); ++k) {
    IndexList bk = a.members(inst_, Label::Blue, k);
    if (bk.empty()) continue;
    for (std::size_t l = 0; l < inst_.red_groups(); ++l) {
      if (!separable(bk, a.members(inst_, Label::Red, l))) return false;
    }
  }
  return true;
}

std::size_t FeasibilityOracle::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

// --------------------------------------------------------------------- MILP

BigMConfig BigMConfig::defaults(const Instance& inst) {
  return BigMConfig{Rational(10) * (Rational(1) + inst.max_abs_coordinate()) * Rational(inst.dimension())};
}

std::optional<std::size_t> MilpModel::find(const std::string& name) const {
  for (std::size_t v = 0; v < variables.size(); ++v) {
    if (variables[v].name == name) return v;
  }
  return std::nullopt;
}

std::size_t MilpModel::add_variable(MilpVariable v) {
  variables.push_back(std::move(v));
  return variables.size() - 1;
}

MilpModel build_milp(const Instance& inst, const BigMConfig& cfg, ObjectiveForm form) {
  if (cfg.M < 1) throw InputError("big-M must be at least 1");
  const std::size_t d = inst.dimension();
  const std::size_t nb = inst.blue_groups(), nr = inst.red_groups();
  MilpModel model;
  model.big_m = cfg.M;
  model.maximize = form == ObjectiveForm::MaximizeAssigned;

  // p_k_l_a, q_k_l
  std::vector<std::size_t> p_base(nb * nr), q_var(nb * nr);
  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t l = 0; l < nr; ++l) {
      std::string kl = std::to_string(k) + "_" + std::to_string(l);
      p_base[k * nr + l] = model.variables.size();
      for (std::size_t a = 0; a < d; ++a) {
        model.add_variable({"p_" + kl + "_" + std::to_string(a), VariableType::Continuous, {}, {}});
      }
      q_var[k * nr + l] = model.add_variable({"q_" + kl, VariableType::Continuous, {}, {}});
    }
  }
  std::vector<std::size_t> z_var(inst.num_z());
  for (std::size_t v = 0; v < inst.num_z(); ++v) {
    z_var[v] = model.add_variable({inst.z_name(v), VariableType::Binary, Rational(0), Rational(1)});
  }
  std::vector<std::size_t> o_var;
  if (form == ObjectiveForm::MinimizeOutliers) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
      o_var.push_back(model.add_variable({"o_" + std::to_string(i), VariableType::Binary, Rational(0), Rational(1)}));
    }
  }

  const Rational M = cfg.M;
  const Rational M1 = cfg.M + 1;
  for (std::size_t i : inst.blue()) {
    for (std::size_t k = 0; k < nb; ++k) {
      for (std::size_t l = 0; l < nr; ++l) {
        MilpRow row;
        row.name = "blue_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(l);
        for (std::size_t a = 0; a < d; ++a) {
          if (sgn(inst.point(i)[a]) != 0) row.terms.emplace_back(p_base[k * nr + l] + a, inst.point(i)[a]);
        }
        row.terms.emplace_back(q_var[k * nr + l], Rational(1));
        row.terms.emplace_back(z_var[inst.z_index(i, k)], M1);
        row.sense = RowSense::LessEqual;
        row.rhs = M;
        model.rows.push_back(std::move(row));
      }
    }
  }
  for (std::size_t j : inst.red()) {
    for (std::size_t l = 0; l < nr; ++l) {
      for (std::size_t k = 0; k < nb; ++k) {
        MilpRow row;
        row.name = "red_" + std::to_string(j) + "_" + std::to_string(l) + "_" + std::to_string(k);
        for (std::size_t a = 0; a < d; ++a) {
          if (sgn(inst.point(j)[a]) != 0) row.terms.emplace_back(p_base[k * nr + l] + a, inst.point(j)[a]);
        }
        row.terms.emplace_back(q_var[k * nr + l], Rational(1));
        row.terms.emplace_back(z_var[inst.z_index(j, l)], Rational(-M1));
        row.sense = RowSense::GreaterEqual;
        row.rhs = -M;
        model.rows.push_back(std::move(row));
      }
    }
  }
  for (std::size_t i = 0; i < inst.size(); ++i) {
    MilpRow row;
    for (std::size_t g = 0; g < inst.groups_of(i); ++g) row.terms.emplace_back(z_var[inst.z_index(i, g)], Rational(1));
    if (form == ObjectiveForm::MinimizeOutliers) {
      row.name = "outlier_" + std::to_string(i);
      row.terms.emplace_back(o_var[i], Rational(1));
      row.sense = RowSense::Equal;
    } else {
      row.name = "assign_" + std::to_string(i);
      row.sense = RowSense::LessEqual;
    }
    row.rhs = 1;
    model.rows.push_back(std::move(row));
  }

  if (form == ObjectiveForm::MinimizeOutliers) {
    for (auto o : o_var) model.objective.emplace_back(o, Rational(1));
  } else {
    for (auto z : z_var) model.objective.emplace_back(z, Rational(1));
  }
  model.notes.push_back("M = " + to_string(M));
  model.notes.push_back(
      "M does not affect feasibility of the model (all points outliers is always feasible); "
      "a smaller M only removes hyperplane solutions and possibly some assignments");
  return model;
}

bool milp_admits(const MilpModel& model, const Instance& inst, std::span<const std::uint8_t> z) {
  if (z.size() != inst.num_z()) throw InputError("z-vector has wrong length");
  std::vector<std::optional<Rational>> fixed(model.variables.size());
  for (std::size_t v = 0; v < inst.num_z(); ++v) {
    auto idx = model.find(inst.z_name(v));
    if (!idx) throw InputError("model lacks variable " + inst.z_name(v));
    fixed[*idx] = Rational(z[v]);
  }
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (auto idx = model.find("o_" + std::to_string(i))) {
      Rational used = 0;
      for (std::size_t g = 0; g < inst.groups_of(i); ++g) used += z[inst.z_index(i, g)];
      fixed[*idx] = Rational(1) - used;
    }
  }
  std::vector<std::size_t> column(model.variables.size(), 0);
  std::size_t free_count = 0;
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    if (!fixed[v]) column[v] = free_count++;
  }
  LinearProgram lp(free_count);
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    if (fixed[v]) continue;
    lp.lower[column[v]] = model.variables[v].lower;
    lp.upper[column[v]] = model.variables[v].upper;
  }
  for (const auto& row : model.rows) {
    RationalVector coeffs(free_count, Rational(0));
    Rational rhs = row.rhs;
    for (const auto& [v, c] : row.terms) {
      if (fixed[v]) rhs -= c * *fixed[v];
      else coeffs[column[v]] += c;
    }
    lp.add_row(std::move(coeffs), row.sense, std::move(rhs));
  }
  return solve_exact(lp).status != LpStatus::Infeasible;
}

ZInequality farkas_projection_cut(const Instance& inst, std::size_t blue_group, std::size_t red_group,
                                  const IndexedCertificate& cert, const BigMConfig& cfg) {
  if (cert.blue.empty() || cert.red.empty()) throw PreconditionError("certificate has an empty side");
  Rational sb = 0, sr = 0, wmin = 1;
  for (const auto& [i, w] : cert.blue) {
    if (inst.label(i) != Label::Blue || sgn(w) <= 0) throw PreconditionError("malformed certificate entry");
    sb += w;
    wmin = std::min(wmin, w);
  }
  for (const auto& [j, w] : cert.red) {
    if (inst.label(j) != Label::Red || sgn(w) <= 0) throw PreconditionError("malformed certificate entry");
    sr += w;
    wmin = std::min(wmin, w);
  }
  if (sb != 1 || sr != 1) throw PreconditionError("certificate weights must sum to one on each side");

  Rational needed = Rational(2) / wmin - 1;
  Rational M = std::max<Rational>(cfg.M, needed);
  ZInequality cut;
  for (const auto& [i, w] : cert.blue) cut.coeffs[inst.z_index(i, blue_group)] += (M + 1) * w;
  for (const auto& [j, w] : cert.red) cut.coeffs[inst.z_index(j, red_group)] += (M + 1) * w;
  cut.rhs = 2 * M;
  auto& pv = cut.provenance;
  pv.family = CutFamily::FarkasProjection;
  for (const auto& e : cert.blue) pv.set.push_back(e.first);
  for (const auto& e : cert.red) pv.endpoints.push_back(e.first);
  pv.set_group = blue_group;
  pv.endpoint_group = red_group;
  std::ostringstream os;
  os << "{\"M\":\"" << to_string(M) << "\",\"weights\":[";
  bool first = true;
  for (const auto* side : {&cert.blue, &cert.red}) {
    for (const auto& [i, w] : *side) {
      os << (first ? "" : ",") << "[" << i << ",\"" << to_string(w) << "\"]";
      first = false;
    }
  }
  os << "]}";
  pv.detail = os.str();
  return cut;
}

}  // namespace pwlsep
