#include "pwlsep/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace pwlsep {

const char* to_string(SolveStatus s) { return s == SolveStatus::Optimal ? "optimal" : "incomplete"; }

namespace {

using Clock = std::chrono::steady_clock;

std::size_t max_index(const std::vector<std::pair<std::size_t, Rational>>& w) {
  std::size_t best = w.front().first;
  Rational bw = w.front().second;
  for (const auto& [i, v] : w) {
    if (v > bw || (v == bw && i < best)) {
      best = i;
      bw = v;
    }
  }
  return best;
}

IndexedCertificate failure_certificate(const FeasibilityReport& r) { return r.failure->certificate; }

}  // namespace

Assignment repair_feasibility(const Instance& inst, Assignment a) {
  if (a.group.size() != inst.size()) throw InputError("assignment size does not match the instance");
  for (;;) {
    FeasibilityReport r = is_feasible(inst, a);
    if (r.feasible) return a;
    const IndexedCertificate& c = r.failure->certificate;
    // Drop the heaviest support point; ties prefer the lower index.
    std::size_t bi = max_index(c.blue), rj = max_index(c.red);
    Rational wb, wr;
    for (const auto& [i, w] : c.blue)
      if (i == bi) wb = w;
    for (const auto& [j, w] : c.red)
      if (j == rj) wr = w;
    std::size_t drop = wb > wr || (wb == wr && bi < rj) ? bi : rj;
    a.group[drop] = -1;
  }
}

Assignment greedy_extend(const Instance& inst, Assignment a, FeasibilityOracle& oracle) {
  for (std::size_t p = 0; p < inst.size(); ++p) {
    if (a.group[p] >= 0) continue;
    for (std::size_t g = 0; g < inst.groups_of(p); ++g) {
      a.group[p] = static_cast<int>(g);
      if (oracle.feasible(a)) break;
      a.group[p] = -1;
    }
  }
  return a;
}

// ------------------------------------------------------------ enumeration

namespace {

struct Enumerator {
  const Instance& inst;
  FeasibilityOracle oracle;
  Assignment cur;
  Assignment best;
  std::size_t best_value = 0;
  std::size_t nodes = 0;
  std::vector<std::vector<IndexList>> members;  // [side][group]

  explicit Enumerator(const Instance& i) : inst(i), oracle(i), cur(Assignment::all_outliers(i)), best(cur) {
    members.resize(2);
    members[0].resize(i.blue_groups());
    members[1].resize(i.red_groups());
  }

  static std::size_t side_id(Label l) { return l == Label::Blue ? 0 : 1; }

  bool compatible(std::size_t p, std::size_t g) {
    Label s = inst.label(p);
    const auto& own = members[side_id(s)][g];
    IndexList grown = own;
    grown.push_back(p);
    for (const auto& other : members[side_id(opposite(s))]) {
      if (other.empty()) continue;
      bool ok = s == Label::Blue ? oracle.separable(grown, other) : oracle.separable(other, grown);
      if (!ok) return false;
    }
    return true;
  }

  void run(std::size_t p, std::size_t value) {
    ++nodes;
    if (value + (inst.size() - p) <= best_value) return;
    if (p == inst.size()) {
      if (value > best_value) {
        best_value = value;
        best = cur;
      }
      return;
    }
    Label s = inst.label(p);
    auto& groups = members[side_id(s)];
    // Groups are interchangeable: only the first empty group is tried.
    bool tried_empty = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty()) {
        if (tried_empty) continue;
        tried_empty = true;
      }
      if (!compatible(p, g)) continue;
      groups[g].push_back(p);
      cur.group[p] = static_cast<int>(g);
      run(p + 1, value + 1);
      cur.group[p] = -1;
      groups[g].pop_back();
    }
    run(p + 1, value);
  }
};

void finish_result(const Instance& inst, SolveResult& r) {
  r.assigned = objective_value(r.incumbent);
  r.outliers = r.incumbent.outliers();
  FeasibilityReport rep = is_feasible(inst, r.incumbent);
  if (!rep.feasible) throw std::logic_error("incumbent failed exact re-verification");
  r.separators = rep.separators;
  r.gap = r.upper_bound - static_cast<long>(r.assigned);
}

}  // namespace

SolveResult solve_enumerative(const Instance& inst) {
  if (inst.num_z() > 24) throw PreconditionError("enumeration is limited to 24 z-variables");
  auto start = Clock::now();
  Enumerator e(inst);
  e.run(0, 0);
  SolveResult r;
  r.status = SolveStatus::Optimal;
  r.incumbent = e.best;
  r.upper_bound = static_cast<long>(e.best_value);
  r.big_m = BigMConfig::defaults(inst).M;
  r.stats.nodes = e.nodes;
  finish_result(inst, r);
  r.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// ------------------------------------------------------- branch and cut

namespace {

struct Node {
  std::size_t id = 0;
  std::size_t depth = 0;
  long bound = 0;  // integer upper bound on assigned points
  std::vector<std::int8_t> fix;  // -1 free, 0, 1
};

struct NodeOutcome {
  enum Kind { Pruned, Integer, Branch } kind = Pruned;
  long bound = 0;
  std::optional<Assignment> candidate;
  std::vector<ZInequality> new_cuts;
  std::vector<FarkasEvent> farkas;
  std::size_t branch_var = 0;
  std::size_t lp_solves = 0, exact_fallbacks = 0, rounds = 0, integer_checks = 0;
};

constexpr double kIntTol = 1e-6;

class BranchAndCut {
 public:
  BranchAndCut(const Instance& inst, const SolveOptions& opt)
      : inst_(inst),
        opt_(opt),
        big_m_{opt.big_m ? *opt.big_m : BigMConfig::defaults(inst).M},
        oracle_(inst),
        separator_(inst, separation_config(opt)) {}

  SolveResult run();

 private:
  static SeparationConfig separation_config(const SolveOptions& opt) {
    SeparationConfig c;
    c.convex_inclusion = opt.families.convex_inclusion;
    c.obstacle = opt.families.obstacle;
    c.rank = opt.families.rank;
    c.mirrored = opt.families.mirrored;
    return c;
  }

  NodeOutcome process(const Node& node, long incumbent_value, const std::vector<ZInequality>& pool) const;
  std::optional<std::vector<double>> relax(const Node& node, const std::vector<ZInequality>& pool,
                                           const std::vector<ZInequality>& local, double& value,
                                           NodeOutcome& out) const;
  std::vector<ZInequality> projection_cuts(const Assignment& a, std::vector<FarkasEvent>& log) const;
  bool add_to_pool(ZInequality cut);

  const Instance& inst_;
  SolveOptions opt_;
  BigMConfig big_m_;
  mutable FeasibilityOracle oracle_;
  mutable CutSeparator separator_;
  std::vector<ZInequality> pool_;
  std::unordered_set<std::string> pool_keys_;
  SolveStats stats_;
};

bool BranchAndCut::add_to_pool(ZInequality cut) {
  if (!pool_keys_.insert(cut.provenance.key()).second) return false;
  ++stats_.cuts_by_family[cut.provenance.family];
  pool_.push_back(std::move(cut));
  return true;
}

std::optional<std::vector<double>> BranchAndCut::relax(const Node& node, const std::vector<ZInequality>& pool,
                                                       const std::vector<ZInequality>& local, double& value,
                                                       NodeOutcome& out) const {
  const std::size_t n = inst_.num_z();
  LinearProgram lp(n);
  lp.objective.assign(n, Rational(1));
  for (std::size_t v = 0; v < n; ++v) {
    lp.lower[v] = Rational(node.fix[v] == 1 ? 1 : 0);
    lp.upper[v] = Rational(node.fix[v] == 0 ? 0 : 1);
  }
  for (std::size_t p = 0; p < inst_.size(); ++p) {
    if (inst_.groups_of(p) < 2) continue;  // covered by the bound z ≤ 1
    RationalVector row(n, Rational(0));
    for (std::size_t g = 0; g < inst_.groups_of(p); ++g) row[inst_.z_index(p, g)] = 1;
    lp.add_row(std::move(row), RowSense::LessEqual, 1);
  }
  for (const auto* cuts : {&pool, &local}) {
    for (const auto& c : *cuts) {
      RationalVector row(n, Rational(0));
      for (const auto& [v, coef] : c.coeffs) row[v] = coef;
      lp.add_row(std::move(row), RowSense::LessEqual, c.rhs);
    }
  }
  ++out.lp_solves;
  if (opt_.float_lp) {
    FloatLpOutcome f = solve_float(lp);
    if (f.status == FloatLpStatus::Infeasible) return std::nullopt;
    if (f.status == FloatLpStatus::Optimal) {
      value = f.objective_value;
      for (auto& z : f.primal) z = std::clamp(z, 0.0, 1.0);
      return f.primal;
    }
    ++out.exact_fallbacks;
  }
  LpOutcome e = solve_exact(lp);
  if (e.status == LpStatus::Infeasible) return std::nullopt;
  if (e.status == LpStatus::Unbounded) throw std::logic_error("bounded relaxation reported unbounded");
  value = e.objective_value.get_d();
  std::vector<double> z;
  z.reserve(n);
  for (const auto& v : e.primal) z.push_back(v.get_d());
  return z;
}

std::vector<ZInequality> BranchAndCut::projection_cuts(const Assignment& a, std::vector<FarkasEvent>& log) const {
  FeasibilityReport r = is_feasible(inst_, a);
  std::vector<ZInequality> out;
  if (r.feasible) return out;
  IndexedCertificate cert = failure_certificate(r);
  ZInequality cut = farkas_projection_cut(inst_, r.failure->blue_group, r.failure->red_group, cert, big_m_);
  log.push_back({a, cut});
  out.push_back(cut);
  // Groups are interchangeable, so the same certificate cuts every pair.
  for (std::size_t k = 0; k < inst_.blue_groups(); ++k) {
    for (std::size_t l = 0; l < inst_.red_groups(); ++l) {
      if (k == r.failure->blue_group && l == r.failure->red_group) continue;
      out.push_back(farkas_projection_cut(inst_, k, l, cert, big_m_));
    }
  }
  return out;
}

NodeOutcome BranchAndCut::process(const Node& node, long incumbent_value, const std::vector<ZInequality>& pool) const {
  NodeOutcome out;
  out.bound = node.bound;
  std::unordered_set<std::string> local_keys;
  std::size_t max_rounds = node.depth == 0 ? opt_.root_rounds : opt_.node_rounds;
  std::size_t rounds = 0;
  for (;;) {
    double value = 0;
    auto z = relax(node, pool, out.new_cuts, value, out);
    if (!z) {
      out.kind = NodeOutcome::Pruned;
      return out;
    }
    out.bound = std::min<long>(out.bound, static_cast<long>(std::floor(value + kIntTol)));
    if (out.bound <= incumbent_value) {
      out.kind = NodeOutcome::Pruned;
      return out;
    }
    // Most fractional variable; ties by z index (point, then group).
    std::size_t pick = z->size();
    double best = kIntTol;
    for (std::size_t v = 0; v < z->size(); ++v) {
      double frac = std::min((*z)[v], 1.0 - (*z)[v]);
      if (frac > best + 1e-12) {
        best = frac;
        pick = v;
      }
    }
    if (pick == z->size()) {
      std::vector<std::uint8_t> zi(z->size());
      for (std::size_t v = 0; v < z->size(); ++v) zi[v] = (*z)[v] > 0.5 ? 1 : 0;
      Assignment a = Assignment::from_z(inst_, zi);
      ++out.integer_checks;
      if (oracle_.feasible(a)) {
        out.kind = NodeOutcome::Integer;
        out.candidate = a;
        out.bound = std::min<long>(out.bound, static_cast<long>(objective_value(a)));
        return out;
      }
      auto cuts = projection_cuts(a, out.farkas);
      for (auto& c : cuts)
        if (local_keys.insert(c.provenance.key()).second) out.new_cuts.push_back(std::move(c));
      if (!out.candidate) {
        Assignment repaired = repair_feasibility(inst_, a);
        out.candidate = greedy_extend(inst_, repaired, oracle_);
      }
      continue;
    }
    if (rounds >= max_rounds) {
      out.kind = NodeOutcome::Branch;
      out.branch_var = pick;
      return out;
    }
    ++rounds;
    ++out.rounds;
    bool added = false;
    for (auto& c : separator_.separate(*z)) {
      if (local_keys.insert(c.provenance.key()).second) {
        bool in_pool = std::any_of(pool.begin(), pool.end(), [&](const ZInequality& p) {
          return p.provenance.key() == c.provenance.key();
        });
        if (in_pool) continue;
        out.new_cuts.push_back(std::move(c));
        added = true;
      }
    }
    if (!added) {
      out.kind = NodeOutcome::Branch;
      out.branch_var = pick;
      return out;
    }
  }
}

SolveResult BranchAndCut::run() {
  auto start = Clock::now();
  const std::size_t n = inst_.num_z();
  SolveResult result;
  result.big_m = big_m_.M;

  Assignment incumbent = greedy_extend(inst_, Assignment::all_outliers(inst_), oracle_);
  long incumbent_value = static_cast<long>(objective_value(incumbent));

  Node root;
  root.fix.assign(n, -1);
  root.bound = static_cast<long>(inst_.size());
  if (opt_.symmetry_fixing) {
    // Interchangeable groups: the lowest point of each class uses group 0.
    for (Label side : {Label::Blue, Label::Red}) {
      if (inst_.side(side).empty()) continue;
      std::size_t p = inst_.side(side).front();
      for (std::size_t g = 1; g < inst_.groups_of(side); ++g) root.fix[inst_.z_index(p, g)] = 0;
    }
  }

  auto cmp = [](const Node& a, const Node& b) {  // best-first, then deeper, then older
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  };
  std::vector<Node> open{root};
  std::size_t next_id = 1;
  bool limited = false;

  while (!open.empty()) {
    std::sort(open.begin(), open.end(), [&](const Node& a, const Node& b) { return cmp(b, a); });
    // Drop nodes that cannot improve.
    open.erase(std::remove_if(open.begin(), open.end(), [&](const Node& x) { return x.bound <= incumbent_value; }),
               open.end());
    if (open.empty()) break;
    if (opt_.node_limit && stats_.nodes >= opt_.node_limit) {
      limited = true;
      break;
    }
    if (opt_.time_limit > 0 && std::chrono::duration<double>(Clock::now() - start).count() >= opt_.time_limit) {
      limited = true;
      break;
    }
    std::size_t take = std::min(open.size(), std::max<std::size_t>(1, opt_.batch_size));
    std::vector<Node> batch(open.begin(), open.begin() + static_cast<long>(take));
    open.erase(open.begin(), open.begin() + static_cast<long>(take));

    std::vector<NodeOutcome> outcomes(batch.size());
    std::size_t workers = std::clamp<std::size_t>(opt_.workers, 1, batch.size());
    const std::vector<ZInequality>& pool = pool_;
    long inc = incumbent_value;
    if (workers == 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) outcomes[i] = process(batch[i], inc, pool);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            for (std::size_t i; (i = next.fetch_add(1)) < batch.size();) outcomes[i] = process(batch[i], inc, pool);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    // Serial merge in batch order.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      NodeOutcome& o = outcomes[i];
      const Node& node = batch[i];
      ++stats_.nodes;
      stats_.lp_solves += o.lp_solves;
      stats_.exact_fallbacks += o.exact_fallbacks;
      stats_.separation_rounds += o.rounds;
      stats_.integer_checks += o.integer_checks;
      for (auto& c : o.new_cuts) add_to_pool(std::move(c));
      for (auto& f : o.farkas) result.farkas_log.push_back(std::move(f));
      if (o.candidate) {
        long v = static_cast<long>(objective_value(*o.candidate));
        if (v > incumbent_value && oracle_.feasible(*o.candidate)) {
          incumbent = *o.candidate;
          incumbent_value = v;
          ++stats_.incumbent_updates;
        }
      }
      if (o.kind != NodeOutcome::Branch) continue;
      for (std::int8_t val : {1, 0}) {
        Node child;
        child.id = next_id++;
        child.depth = node.depth + 1;
        child.bound = o.bound;
        child.fix = node.fix;
        child.fix[o.branch_var] = val;
        open.push_back(std::move(child));
      }
    }
  }

  long upper = incumbent_value;
  for (const auto& x : open) upper = std::max(upper, x.bound);
  result.status = limited && upper > incumbent_value ? SolveStatus::Incomplete : SolveStatus::Optimal;
  result.incumbent = incumbent;
  result.upper_bound = upper;
  result.pool = pool_;
  result.stats = stats_;
  finish_result(inst_, result);
  result.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace

SolveResult solve(const Instance& inst, const SolveOptions& options) {
  BranchAndCut bc(inst, options);
  return bc.run();
}

}  // namespace pwlsep
