#include "pwlsep/pwlsep.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "pwlsep/generators.hpp"
#include "pwlsep/io.hpp"
#include "pwlsep/lab.hpp"
#include "pwlsep/plot.hpp"
#include "pwlsep/solver.hpp"

using namespace pwlsep;

struct pwlsep_instance {
  Instance inst;
};

struct pwlsep_result {
  Instance inst;
  SolveOptions options;
  SolveResult result;
};

namespace {

thread_local std::string g_last_error;

pwlsep_status fail(pwlsep_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
pwlsep_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const IoError& e) {
    return fail(PWLSEP_ERR_IO, e.what());
  } catch (const InputError& e) {
    return fail(PWLSEP_ERR_INPUT, e.what());
  } catch (const PreconditionError& e) {
    return fail(PWLSEP_ERR_PRECONDITION, e.what());
  } catch (const LimitError& e) {
    return fail(PWLSEP_ERR_LIMIT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PWLSEP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PWLSEP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PWLSEP_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw InputError(std::string(what) + " is null");
}

std::vector<std::string> split_list(const char* list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    auto b = item.find_first_not_of(' '), e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
  return s;
}

CutFamilies parse_families(const char* list) {
  CutFamilies f;
  if (!list) return f;
  f = CutFamilies{false, false, false, false};
  for (const auto& name : split_list(list)) {
    if (name == "all") {
      f = CutFamilies{};
    } else if (name == "none") {
      f = CutFamilies{false, false, false, false};
    } else if (name == "mirrored") {
      f.mirrored = true;
    } else {
      switch (parse_cut_family(name)) {
        case CutFamily::ConvexInclusion: f.convex_inclusion = true; break;
        case CutFamily::Obstacle: f.obstacle = true; break;
        case CutFamily::ObstacleRank: f.rank = true; break;
        default: throw InputError("cut family '" + name + "' cannot be toggled");
      }
    }
  }
  return f;
}

// Maps an ifstream/ofstream failure onto the I/O status.
template <class F>
auto with_files(F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    std::string m = e.what();
    if (m.rfind("cannot open", 0) == 0 || m.rfind("cannot write", 0) == 0 || m.rfind("write failed", 0) == 0)
      throw IoError(m);
    throw;
  }
}

}  // namespace

extern "C" {

const char* pwlsep_version(void) { return "1.0.0"; }

const char* pwlsep_last_error(void) { return g_last_error.c_str(); }

void pwlsep_string_free(char* s) { std::free(s); }

pwlsep_status pwlsep_instance_load(const char* path, pwlsep_instance** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new pwlsep_instance{with_files([&] { return read_instance(path); })};
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_instance_parse(const char* json_text, pwlsep_instance** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw InputError("instance text is not valid JSON");
    *out = new pwlsep_instance{instance_from_json(j)};
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_instance_generate(const char* family, uint64_t seed, int blue_groups, int red_groups,
                                       pwlsep_instance** out) {
  return guarded([&] {
    need(family, "family");
    need(out, "out");
    std::optional<std::pair<std::size_t, std::size_t>> budgets;
    if (blue_groups > 0 && red_groups > 0)
      budgets = std::make_pair(static_cast<std::size_t>(blue_groups), static_cast<std::size_t>(red_groups));
    else if (blue_groups > 0 || red_groups > 0)
      throw InputError("give both budgets or neither");
    *out = new pwlsep_instance{generate_instance(family, seed, budgets)};
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_instance_set_budgets(pwlsep_instance* inst, size_t blue_groups, size_t red_groups) {
  return guarded([&] {
    need(inst, "instance");
    inst->inst = inst->inst.with_budgets(blue_groups, red_groups);
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_instance_save(const pwlsep_instance* inst, const char* path) {
  return guarded([&] {
    need(inst, "instance");
    need(path, "path");
    with_files([&] {
      write_instance(inst->inst, path);
      return 0;
    });
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_instance_to_json(const pwlsep_instance* inst, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup(instance_to_json(inst->inst).dump(2) + "\n");
    return PWLSEP_OK;
  });
}

size_t pwlsep_instance_size(const pwlsep_instance* inst) { return inst ? inst->inst.size() : 0; }
size_t pwlsep_instance_dimension(const pwlsep_instance* inst) { return inst ? inst->inst.dimension() : 0; }
size_t pwlsep_instance_num_z(const pwlsep_instance* inst) { return inst ? inst->inst.num_z() : 0; }
void pwlsep_instance_free(pwlsep_instance* inst) { delete inst; }

pwlsep_status pwlsep_families(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(join(generator_families()));
    return PWLSEP_OK;
  });
}

void pwlsep_solve_options_init(pwlsep_solve_options* opt) {
  if (!opt) return;
  opt->time_limit = 0;
  opt->node_limit = 0;
  opt->workers = 1;
  opt->seed = 0;
  opt->cut_families = nullptr;
  opt->float_lp = 1;
  opt->minimize_outliers = 0;
}

pwlsep_status pwlsep_solve(const pwlsep_instance* inst, const pwlsep_solve_options* opt, pwlsep_result** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    pwlsep_solve_options o;
    pwlsep_solve_options_init(&o);
    if (opt) o = *opt;
    if (o.time_limit < 0) throw InputError("time limit must be non-negative");
    SolveOptions so;
    so.time_limit = o.time_limit;
    so.node_limit = o.node_limit;
    so.workers = o.workers == 0 ? 1 : o.workers;
    so.seed = o.seed;
    so.families = parse_families(o.cut_families);
    so.float_lp = o.float_lp != 0;
    so.objective = o.minimize_outliers ? ObjectiveForm::MinimizeOutliers : ObjectiveForm::MaximizeAssigned;
    SolveResult r = solve(inst->inst, so);
    bool complete = r.status == SolveStatus::Optimal;
    *out = new pwlsep_result{inst->inst, so, std::move(r)};
    if (!complete) return fail(PWLSEP_ERR_LIMIT, "search stopped by a limit; result is incomplete");
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_solve_enumerative(const pwlsep_instance* inst, pwlsep_result** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    SolveResult r = solve_enumerative(inst->inst);
    *out = new pwlsep_result{inst->inst, SolveOptions{}, std::move(r)};
    return PWLSEP_OK;
  });
}

int pwlsep_result_optimal(const pwlsep_result* r) { return r && r->result.status == SolveStatus::Optimal; }
size_t pwlsep_result_assigned(const pwlsep_result* r) { return r ? r->result.assigned : 0; }
size_t pwlsep_result_outlier_count(const pwlsep_result* r) { return r ? r->result.outliers.size() : 0; }

int pwlsep_result_group(const pwlsep_result* r, size_t point) {
  if (!r || point >= r->result.incumbent.group.size()) return -1;
  return r->result.incumbent.group[point];
}

pwlsep_status pwlsep_result_to_json(const pwlsep_result* r, int as_float, char** out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    *out = dup(result_to_json(r->inst, r->result, r->options, as_float != 0).dump(2) + "\n");
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_result_farkas_jsonl(const pwlsep_result* r, char** out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    std::string text;
    for (const auto& ev : r->result.farkas_log) text += cut_to_json(r->inst, ev.cut, ev.spawning).dump() + "\n";
    *out = dup(text);
    return PWLSEP_OK;
  });
}

void pwlsep_result_free(pwlsep_result* r) { delete r; }

pwlsep_status pwlsep_cuts_jsonl(const pwlsep_instance* inst, const char* cut_families, int audit, int as_float,
                                char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    const Instance& in = inst->inst;
    std::vector<ZInequality> cuts = all_cuts(in, parse_families(cut_families));
    std::optional<ZPolytope> zp;
    if (audit) zp = enumerate_feasible(in);
    std::string text;
    std::size_t violations = 0;
    for (const auto& c : cuts) {
      json j = cut_to_json(in, c, cut_witness(in, c), as_float != 0);
      if (zp) {
        std::size_t bad = 0;
        for (auto m : zp->points)
          if (!c.satisfied_by(m)) ++bad;
        j["feasible_violations"] = bad;
        violations += bad;
      }
      text += j.dump() + "\n";
    }
    *out = dup(text);
    if (violations) return fail(PWLSEP_ERR_CONTRADICTION, std::to_string(violations) + " feasible assignment(s) violate a cut");
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_export_lp(const pwlsep_instance* inst, const char* big_m, int minimize_outliers, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    BigMConfig cfg = BigMConfig::defaults(inst->inst);
    if (big_m) cfg.M = parse_rational(big_m);
    if (sgn(cfg.M) <= 0) throw InputError("big-M must be positive");
    MilpModel m = build_milp(inst->inst, cfg,
                             minimize_outliers ? ObjectiveForm::MinimizeOutliers : ObjectiveForm::MaximizeAssigned);
    std::ostringstream os;
    export_lp_format(m, os);
    *out = dup(os.str());
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_plot_svg(const pwlsep_instance* inst, const pwlsep_result* r, double size, double radius,
                              char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    PlotOptions po;
    if (size > 0) po.size = size;
    if (radius > 0) po.radius = radius;
    *out = dup(plot_svg(inst->inst, r ? &r->result : nullptr, po));
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_theorem_suite(const char* theorems, size_t instances, uint64_t base_seed, size_t workers,
                                   char** json_out, char** text_out) {
  return guarded([&] {
    std::vector<std::string> names = theorems ? split_list(theorems) : theorem_names();
    for (const auto& n : names)
      if (std::find(theorem_names().begin(), theorem_names().end(), n) == theorem_names().end())
        throw InputError("unknown theorem family '" + n + "'");
    SuiteReport rep = theorem_suite(names, instances, base_seed, workers == 0 ? 1 : workers);
    if (json_out) *json_out = dup(suite_report_json(rep).dump(2) + "\n");
    if (text_out) *text_out = dup(suite_report_text(rep));
    if (rep.contradictions) return fail(PWLSEP_ERR_CONTRADICTION, std::to_string(rep.contradictions) + " contradiction(s)");
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_theorem_names(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(join(theorem_names()));
    return PWLSEP_OK;
  });
}

pwlsep_status pwlsep_check_inequality(const pwlsep_instance* inst, const char* cut_json, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(cut_json, "cut_json");
    need(out, "out");
    const Instance& in = inst->inst;
    json j = json::parse(cut_json, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("coeffs") || !j.contains("rhs"))
      throw InputError("inequality JSON needs \"coeffs\" and \"rhs\"");
    std::map<std::string, std::size_t> ids;
    for (std::size_t v = 0; v < in.num_z(); ++v) ids[in.z_name(v)] = v;
    auto value = [](const json& x) {
      if (x.is_string()) return parse_rational(x.get<std::string>());
      if (x.is_number()) return parse_rational(x.dump());
      throw InputError("coefficient must be a string or a number");
    };
    ZInequality q;
    for (const auto& [name, c] : j.at("coeffs").items()) {
      auto it = ids.find(name);
      if (it == ids.end()) throw InputError("unknown variable '" + name + "'");
      q.coeffs[it->second] = value(c);
    }
    q.rhs = value(j.at("rhs"));
    if (j.contains("provenance") && j["provenance"].contains("family"))
      q.provenance.family = parse_cut_family(j["provenance"]["family"].get<std::string>());
    FacetReport rep = check_inequality(enumerate_feasible(in), q);
    *out = dup(facet_report_json(in, rep).dump(2) + "\n");
    if (!rep.valid) return fail(PWLSEP_ERR_CONTRADICTION, "inequality is violated by a feasible assignment");
    return PWLSEP_OK;
  });
}

}  // extern "C"
