// pwlsep: solve, verify, cut generation, instance generation, LP export and
// plotting for piecewise linear separation. Links only the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pwlsep/pwlsep.h"

namespace {

// Exit codes.
constexpr int kOk = 0, kInternal = 1, kInput = 2, kContradiction = 3, kLimit = 4;

int exit_code(pwlsep_status s) {
  switch (s) {
    case PWLSEP_OK: return kOk;
    case PWLSEP_ERR_INPUT:
    case PWLSEP_ERR_IO:
    case PWLSEP_ERR_PRECONDITION: return kInput;
    case PWLSEP_ERR_CONTRADICTION: return kContradiction;
    case PWLSEP_ERR_LIMIT: return kLimit;
    default: return kInternal;
  }
}

struct Failure {
  pwlsep_status status;
};

struct InstanceFree {
  void operator()(pwlsep_instance* p) const { pwlsep_instance_free(p); }
};
struct ResultFree {
  void operator()(pwlsep_result* p) const { pwlsep_result_free(p); }
};
using InstancePtr = std::unique_ptr<pwlsep_instance, InstanceFree>;
using ResultPtr = std::unique_ptr<pwlsep_result, ResultFree>;

// Throws unless `s` is OK or one of the tolerated codes.
pwlsep_status check(pwlsep_status s, std::initializer_list<pwlsep_status> tolerated = {}) {
  if (s == PWLSEP_OK) return s;
  for (auto t : tolerated)
    if (s == t) return s;
  std::cerr << "pwlsep: " << pwlsep_last_error() << "\n";
  throw Failure{s};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pwlsep_string_free(s);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    std::cerr << "pwlsep: cannot write '" << path << "'\n";
    throw Failure{PWLSEP_ERR_IO};
  }
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "pwlsep: cannot open '" << path << "'\n";
    throw Failure{PWLSEP_ERR_IO};
  }
  return std::string(std::istreambuf_iterator<char>(f), {});
}

struct Config {
  std::string input, output, family = "separable", budgets, cut_families, theorems, cut_file, big_m;
  double time_limit = 0;
  std::size_t node_limit = 0, workers = 1, instances = 50;
  std::uint64_t seed = 0;
  bool as_float = false, audit = false, minimize_outliers = false, plot_solve = false;
  double size = 0, radius = 0;
  std::string farkas_log;
};

std::optional<std::pair<int, int>> parse_budgets(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    int nb = std::stoi(text.substr(0, comma)), nr = std::stoi(text.substr(comma + 1));
    if (nb < 1 || nr < 1) throw std::invalid_argument(text);
    return std::make_pair(nb, nr);
  } catch (const std::exception&) {
    std::cerr << "pwlsep: --budgets expects nB,nR with both at least 1\n";
    throw Failure{PWLSEP_ERR_INPUT};
  }
}

InstancePtr load(const Config& c) {
  pwlsep_instance* raw = nullptr;
  check(pwlsep_instance_load(c.input.c_str(), &raw));
  InstancePtr inst(raw);
  if (auto b = parse_budgets(c.budgets)) check(pwlsep_instance_set_budgets(inst.get(), b->first, b->second));
  return inst;
}

pwlsep_solve_options solve_options(const Config& c) {
  pwlsep_solve_options o;
  pwlsep_solve_options_init(&o);
  o.time_limit = c.time_limit;
  o.node_limit = c.node_limit;
  o.workers = c.workers;
  o.seed = c.seed;
  o.cut_families = c.cut_families.empty() ? nullptr : c.cut_families.c_str();
  o.minimize_outliers = c.minimize_outliers;
  return o;
}

int cmd_solve(const Config& c) {
  InstancePtr inst = load(c);
  pwlsep_solve_options o = solve_options(c);
  pwlsep_result* raw = nullptr;
  pwlsep_status s = check(pwlsep_solve(inst.get(), &o, &raw), {PWLSEP_ERR_LIMIT});
  ResultPtr r(raw);
  char* text = nullptr;
  check(pwlsep_result_to_json(r.get(), c.as_float, &text));
  emit(take(text), c.output);
  if (!c.farkas_log.empty()) {
    char* log = nullptr;
    check(pwlsep_result_farkas_jsonl(r.get(), &log));
    emit(take(log), c.farkas_log);
  }
  std::ostream& summary = c.output.empty() || c.output == "-" ? std::cerr : std::cout;
  summary << (pwlsep_result_optimal(r.get()) ? "optimal" : "incomplete") << ": "
          << pwlsep_result_assigned(r.get()) << " assigned, " << pwlsep_result_outlier_count(r.get())
          << " outlier(s)\n";
  return exit_code(s);
}

int cmd_verify(const Config& c) {
  if (!c.cut_file.empty()) {
    InstancePtr inst = load(c);
    std::string body = slurp(c.cut_file);
    std::istringstream lines(body);
    std::string out;
    pwlsep_status worst = PWLSEP_OK;
    for (std::string line; std::getline(lines, line);) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      char* rep = nullptr;
      pwlsep_status s = check(pwlsep_check_inequality(inst.get(), line.c_str(), &rep), {PWLSEP_ERR_CONTRADICTION});
      if (s != PWLSEP_OK) worst = s;
      out += take(rep);
    }
    emit(out, c.output);
    return exit_code(worst);
  }
  char *json = nullptr, *text = nullptr;
  pwlsep_status s = check(pwlsep_theorem_suite(c.theorems.empty() ? nullptr : c.theorems.c_str(), c.instances,
                                               c.seed == 0 ? 1 : c.seed, c.workers, &json, &text),
                          {PWLSEP_ERR_CONTRADICTION});
  std::string report = take(json), summary = take(text);
  if (!c.output.empty()) emit(report, c.output);
  std::cout << summary;
  return exit_code(s);
}

int cmd_cuts(const Config& c) {
  InstancePtr inst = load(c);
  char* text = nullptr;
  pwlsep_status s = check(pwlsep_cuts_jsonl(inst.get(), c.cut_families.empty() ? nullptr : c.cut_families.c_str(),
                                            c.audit, c.as_float, &text),
                          {PWLSEP_ERR_CONTRADICTION});
  emit(take(text), c.output);
  return exit_code(s);
}

int cmd_gen(const Config& c) {
  auto b = parse_budgets(c.budgets);
  pwlsep_instance* raw = nullptr;
  check(pwlsep_instance_generate(c.family.c_str(), c.seed, b ? b->first : 0, b ? b->second : 0, &raw));
  InstancePtr inst(raw);
  if (c.output.empty() || c.output == "-") {
    char* text = nullptr;
    check(pwlsep_instance_to_json(inst.get(), &text));
    std::cout << take(text);
  } else {
    check(pwlsep_instance_save(inst.get(), c.output.c_str()));
  }
  return kOk;
}

int cmd_export(const Config& c) {
  InstancePtr inst = load(c);
  char* text = nullptr;
  check(pwlsep_export_lp(inst.get(), c.big_m.empty() ? nullptr : c.big_m.c_str(), c.minimize_outliers, &text));
  emit(take(text), c.output);
  return kOk;
}

int cmd_plot(const Config& c) {
  InstancePtr inst = load(c);
  ResultPtr r;
  pwlsep_status s = PWLSEP_OK;
  if (c.plot_solve) {
    pwlsep_solve_options o = solve_options(c);
    pwlsep_result* raw = nullptr;
    s = check(pwlsep_solve(inst.get(), &o, &raw), {PWLSEP_ERR_LIMIT});
    r.reset(raw);
  }
  char* svg = nullptr;
  check(pwlsep_plot_svg(inst.get(), r.get(), c.size, c.radius, &svg));
  emit(take(svg), c.output);
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise linear separation: exact branch and cut, cut generation and a polytope lab"};
  app.require_subcommand(1);
  Config c;

  auto input = [&](CLI::App* sub, bool required = true) {
    auto* o = sub->add_option("-i,--input", c.input, "Instance file (.json or .csv)")->check(CLI::ExistingFile);
    if (required) o->required();
  };
  auto output = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("-o,--output", c.output, what + " (default: stdout)");
  };
  auto budgets = [&](CLI::App* sub) {
    sub->add_option("--budgets", c.budgets, "Group budgets nB,nR (overrides the instance)");
  };
  auto solver_flags = [&](CLI::App* sub) {
    sub->add_option("--time-limit", c.time_limit, "Seconds, 0 = none")->check(CLI::NonNegativeNumber);
    sub->add_option("--node-limit", c.node_limit, "Nodes, 0 = none");
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Random seed (recorded)");
    sub->add_option("--cut-families", c.cut_families,
                    "Comma list of convex-inclusion,obstacle,rank,mirrored, or all/none");
    sub->add_flag("--min-outliers", c.minimize_outliers, "Use the outlier-minimisation objective form");
  };

  auto* solve = app.add_subcommand("solve", "Solve an instance to optimality");
  input(solve);
  output(solve, "Result JSON");
  budgets(solve);
  solver_flags(solve);
  solve->add_flag("--float", c.as_float, "Write numbers as decimals instead of exact rationals");
  solve->add_option("--farkas-log", c.farkas_log, "Write projection cuts with their spawning assignments (JSONL)");

  auto* verify = app.add_subcommand("verify", "Run the theorem suite, or check inequalities against an instance");
  input(verify, false);
  output(verify, "Report JSON");
  budgets(verify);
  verify->add_option("--theorems", c.theorems, "Comma list of theorem families (default: all)");
  verify->add_option("--instances", c.instances, "Instances per theorem")->check(CLI::PositiveNumber);
  verify->add_option("--seed", c.seed, "Base seed (default 1)");
  verify->add_option("--workers", c.workers, "Enumeration threads")->check(CLI::PositiveNumber);
  verify->add_option("--cut", c.cut_file, "JSON lines of inequalities to check (needs --input)")
      ->check(CLI::ExistingFile)
      ->needs(verify->get_option("--input"));

  auto* cuts = app.add_subcommand("cuts", "Dump every generatable cut with provenance");
  input(cuts);
  output(cuts, "JSON lines");
  budgets(cuts);
  cuts->add_option("--cut-families", c.cut_families, "Comma list of families (default: all)");
  cuts->add_flag("--audit", c.audit, "Check each cut on all feasible assignments (at most 24 z-variables)");
  cuts->add_flag("--float", c.as_float, "Write numbers as decimals");

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--family", c.family, "Instance family")
      ->check(CLI::IsMember({"separable", "xor", "hull-inclusion", "obstacle-triangle", "paper-4d"}));
  gen->add_option("--seed", c.seed, "Random seed");
  budgets(gen);
  output(gen, "Instance file (.json or .csv)");

  auto* exp = app.add_subcommand("export", "Write the big-M model in LP format");
  input(exp);
  output(exp, "LP file");
  budgets(exp);
  exp->add_option("--big-m", c.big_m, "Big-M value (default from coordinates)");
  exp->add_flag("--min-outliers", c.minimize_outliers, "Outlier-minimisation objective");

  auto* plot = app.add_subcommand("plot", "Draw a planar instance as SVG");
  input(plot);
  output(plot, "SVG file");
  budgets(plot);
  solver_flags(plot);
  plot->add_flag("--solve", c.plot_solve, "Solve first and draw groups, separators and outliers");
  plot->add_option("--size", c.size, "Canvas size in px")->check(CLI::PositiveNumber);
  plot->add_option("--radius", c.radius, "Marker radius in px")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*solve) return cmd_solve(c);
    if (*verify) return cmd_verify(c);
    if (*cuts) return cmd_cuts(c);
    if (*gen) return cmd_gen(c);
    if (*exp) return cmd_export(c);
    if (*plot) return cmd_plot(c);
  } catch (const Failure& f) {
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "pwlsep: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
