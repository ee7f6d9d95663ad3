// Acceptance checks, one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N] [--cli PATH]
//
// Exit status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>

#include "pwlsep/generators.hpp"
#include "pwlsep/io.hpp"
#include "pwlsep/lab.hpp"
#include "pwlsep/solver.hpp"

using namespace pwlsep;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t hardware_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Separator margins by plain rational arithmetic.
bool check_separator(const std::vector<Point>& blue, const std::vector<Point>& red, const Hyperplane& h) {
  auto value = [&](const Point& x) {
    Rational s = h.q;
    for (std::size_t a = 0; a < x.size(); ++a) s += h.p.at(a) * x[a];
    return s;
  };
  for (const auto& x : blue)
    if (value(x) > -1) return false;
  for (const auto& x : red)
    if (value(x) < 1) return false;
  return true;
}

// Convex weights on both sides reproducing one point.
bool check_certificate(const std::vector<Point>& blue, const std::vector<Point>& red,
                       const ConvexCombinationCertificate& c, Point* common = nullptr) {
  if (c.weights_blue.size() != blue.size() || c.weights_red.size() != red.size() || blue.empty() || red.empty())
    return false;
  std::size_t d = blue[0].size();
  Point a(d), b(d);
  Rational sa, sb;
  for (std::size_t i = 0; i < blue.size(); ++i) {
    if (sgn(c.weights_blue[i]) < 0) return false;
    sa += c.weights_blue[i];
    for (std::size_t k = 0; k < d; ++k) a[k] += c.weights_blue[i] * blue[i][k];
  }
  for (std::size_t j = 0; j < red.size(); ++j) {
    if (sgn(c.weights_red[j]) < 0) return false;
    sb += c.weights_red[j];
    for (std::size_t k = 0; k < d; ++k) b[k] += c.weights_red[j] * red[j][k];
  }
  if (common) *common = a;
  return sa == 1 && sb == 1 && a == b;
}

Instance random_instance(std::mt19937_64& rng, std::size_t max_points, std::size_t max_d) {
  std::uniform_int_distribution<long> coord(-10, 10);
  std::size_t d = 1 + rng() % max_d;
  std::size_t n = 2 + rng() % (max_points - 1);
  std::vector<Point> pts;
  std::vector<Label> labels;
  // Distinct points: a blue and a red point in the same place can never
  // both be assigned, which trivially flattens faces.
  while (pts.size() < n) {
    Point p(d);
    for (auto& c : p) c = coord(rng);
    if (std::find(pts.begin(), pts.end(), p) != pts.end()) continue;
    labels.push_back(pts.size() % 2 ? Label::Red : Label::Blue);
    pts.push_back(std::move(p));
  }
  std::shuffle(labels.begin(), labels.end(), rng);
  return Instance(d, pts, labels, 1, 1);
}

// Generated families over several seeds and budgets plus random instances,
// all with at most `max_z` z-variables.
std::vector<Instance> corpus(std::size_t max_z, std::size_t random_count, std::uint64_t seed) {
  std::vector<Instance> out;
  const std::vector<std::pair<std::size_t, std::size_t>> budgets{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (const auto& fam : generator_families()) {
    for (std::uint64_t s = 1; s <= 8; ++s) {
      Instance base = generate_instance(fam, s);
      if (base.num_z() <= max_z) out.push_back(base);
      for (auto [nb, nr] : budgets) {
        if (nb == base.blue_groups() && nr == base.red_groups()) continue;
        Instance alt = base.with_budgets(nb, nr);
        if (alt.num_z() <= max_z && (s + nb + nr) % 2 == 0) out.push_back(alt);
      }
    }
  }
  std::mt19937_64 rng(seed);
  while (random_count > 0) {
    Instance inst = random_instance(rng, 10, 3);
    std::size_t nb = 1 + rng() % 2, nr = 1 + rng() % 2;
    Instance sized = inst.with_budgets(nb, nr);
    if (sized.num_z() > max_z) sized = inst;
    if (sized.num_z() > max_z) continue;
    out.push_back(sized);
    --random_count;
  }
  return out;
}

// ------------------------------------------------------------- criteria

Outcome criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<long> coord(-10, 10);
  std::size_t separable = 0, certified = 0, bad = 0;
  for (int t = 0; t < 500; ++t) {
    std::size_t d = 1 + rng() % 4;
    std::size_t n = 2 + rng() % 9;
    std::size_t nb = 1 + rng() % (n - 1);
    std::vector<Point> blue, red;
    for (std::size_t i = 0; i < n; ++i) {
      Point p(d);
      for (auto& c : p) c = coord(rng);
      (i < nb ? blue : red).push_back(std::move(p));
    }
    auto out = separate(blue, red);
    bool one = out.separator.has_value() != out.certificate.has_value();
    bool ok = one && (out.separator ? check_separator(blue, red, *out.separator)
                                    : check_certificate(blue, red, *out.certificate));
    if (!ok) ++bad;
    (out.separator ? separable : certified) += 1;
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "500 instances, " << separable << " separated, " << certified << " certified, " << bad
     << " failed verification, " << secs << " s (limit 60 s)";
  return {bad == 0 && secs < 60, os.str()};
}

Outcome criterion2() {
  Instance inst = paper_4d_instance();
  std::vector<Point> blue = gather(inst.points(), inst.blue());
  std::vector<Point> red = gather(inst.points(), inst.red());
  auto out = separate(blue, red);
  Point common;
  bool cert = !out.separable() && out.certificate && check_certificate(blue, red, *out.certificate, &common);
  bool origin = cert && common == Point(4, Rational(0));
  std::size_t not_obstacle = 0;
  for (std::size_t a = 0; a < red.size(); ++a)
    for (std::size_t b = a + 1; b < red.size(); ++b)
      if (classify_obstacle(red[a], red[b], blue) == ObstacleClass::NotObstacle) ++not_obstacle;
  std::ostringstream os;
  os << "certificate " << (cert ? "verified" : "missing") << ", common point "
     << (origin ? "(0,0,0,0)" : "wrong") << ", " << not_obstacle << "/3 red pairs NotObstacle";
  return {cert && origin && not_obstacle == 3, os.str()};
}

Outcome criterion3() {
  auto insts = corpus(20, 0, 0);
  std::mt19937_64 rng(33);
  while (insts.size() < 100) {
    Instance inst = random_instance(rng, 10, 2);
    Instance two = inst.with_budgets(2, 1);
    insts.push_back(two.num_z() <= 20 && rng() % 2 ? two : inst);
  }
  if (insts.size() > 100) insts.erase(insts.begin() + 100, insts.end());
  std::size_t cuts = 0, violations = 0, largest = 0;
  for (const auto& inst : insts) {
    auto zp = enumerate_feasible(inst, hardware_workers());
    largest = std::max(largest, inst.num_z());
    for (const auto& c : all_cuts(inst)) {
      ++cuts;
      for (auto m : zp.points)
        if (!c.satisfied_by(m)) {
          ++violations;
          std::cerr << "  violated: " << c.provenance.key() << "\n";
          break;
        }
    }
  }
  std::ostringstream os;
  os << insts.size() << " instances (up to " << largest << " z-variables), " << cuts << " cuts, " << violations
     << " violated";
  return {insts.size() == 100 && violations == 0 && cuts > 0, os.str()};
}

Outcome criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep = theorem_suite(theorem_names(), 50, 1, hardware_workers());
  double secs = seconds_since(t0);
  std::ostringstream os;
  bool enough = true;
  for (const auto& s : rep.summary) {
    enough = enough && s.instances >= 50;
    if (s.contradictions)
      os << s.theorem << " " << s.contradictions << "/" << s.applicable << " contradict; ";
  }
  os << rep.contradictions << " contradictions over " << rep.cases.size() << " cases, " << secs
     << " s (limit 600 s)";
  return {enough && rep.contradictions == 0 && secs < 600, os.str()};
}

Outcome criterion5() {
  auto insts = corpus(24, 20, 55);
  std::size_t not_full = 0, rows = 0, non_facet = 0;
  for (const auto& inst : insts) {
    auto zp = enumerate_feasible(inst, hardware_workers());
    int dim = polytope_dimension(zp);
    if (dim != static_cast<int>(inst.num_z())) ++not_full;
    for (const auto& q : model_row_inequalities(inst)) {
      ++rows;
      if (check_inequality(zp, q, dim).verdict != Verdict::Facet) {
        ++non_facet;
        std::cerr << "  not a facet: " << q.provenance.key() << " in " << instance_to_json(inst).dump() << "\n";
      }
    }
  }
  std::ostringstream os;
  os << insts.size() << " instances, " << not_full << " not full-dimensional, " << rows << " model rows, " << non_facet
     << " not facets";
  return {not_full == 0 && non_facet == 0, os.str()};
}

Outcome criterion6() {
  auto insts = corpus(24, 150, 66);
  std::size_t mismatch = 0;
  for (const auto& inst : insts) {
    auto bc = solve(inst);
    auto en = solve_enumerative(inst);
    if (bc.status != SolveStatus::Optimal || bc.assigned != en.assigned || !is_feasible(inst, bc.incumbent).feasible)
      ++mismatch;
  }
  std::size_t sep_outliers = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) sep_outliers += solve(generate_instance("separable", s)).outliers.size();
  std::size_t p4 = solve(paper_4d_instance(1, 1)).outliers.size();
  std::size_t p4_enum = solve_enumerative(paper_4d_instance(1, 1)).outliers.size();
  std::size_t xor22 = 0, xor11_zero = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    xor22 += solve(generate_instance("xor", s, std::pair<std::size_t, std::size_t>{2, 2})).outliers.size();
    if (solve(generate_instance("xor", s, std::pair<std::size_t, std::size_t>{1, 1})).outliers.empty()) ++xor11_zero;
  }
  std::ostringstream os;
  os << insts.size() << " instances, " << mismatch << " mismatches; separable outliers " << sep_outliers
     << "; paper-4d outliers " << p4 << " (enumerative " << p4_enum << "); xor 2/2 outliers " << xor22
     << "; xor 1/1 runs without outliers " << xor11_zero;
  bool ok = insts.size() >= 200 && mismatch == 0 && sep_outliers == 0 && p4 == 1 && p4_enum == 1 && xor22 == 0 &&
            xor11_zero == 0;
  return {ok, os.str()};
}

Outcome criterion7() {
  auto insts = corpus(16, 40, 77);
  std::size_t events = 0, not_violated = 0, invalid = 0;
  for (const auto& inst : insts) {
    auto zp = enumerate_feasible(inst);
    // With the geometric families off, every infeasible integer point is
    // cut by a projection cut; also run the default configuration.
    for (bool families : {false, true}) {
      SolveOptions o;
      if (!families) o.families = {false, false, false, false};
      auto r = solve(inst, o);
      for (const auto& ev : r.farkas_log) {
        ++events;
        if (ev.cut.satisfied_by(ev.spawning.to_mask(inst))) ++not_violated;
        for (auto m : zp.points)
          if (!ev.cut.satisfied_by(m)) {
            ++invalid;
            break;
          }
      }
    }
  }
  std::ostringstream os;
  os << insts.size() << " instances, " << events << " projection cuts, " << not_violated
     << " not violated by their spawning assignment, " << invalid << " violated by a feasible assignment";
  return {events > 0 && not_violated == 0 && invalid == 0, os.str()};
}

std::string strip_timing(const std::string& path) {
  json j = json::parse(read_text_file(path));
  j.erase("timing");
  return j.dump();
}

Outcome criterion8(const std::string& cli) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("pwlsep_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t compared = 0, differ = 0, raw_differ = 0;
  std::vector<std::pair<std::string, std::uint64_t>> runs{
      {"paper-4d", 1}, {"xor", 2}, {"hull-inclusion", 3}, {"obstacle-triangle", 4}, {"separable", 5}};
  for (const auto& [fam, seed] : runs) {
    for (std::size_t workers : {1, 4}) {
      std::string in = (dir / (fam + ".json")).string();
      write_instance(generate_instance(fam, seed), in);
      std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
      if (!cli.empty()) {
        std::string base = "\"" + cli + "\" solve -i \"" + in + "\" --workers " + std::to_string(workers) + " -o ";
        auto run = [&](const std::string& out) { return std::system((base + "\"" + out + "\" >/dev/null").c_str()); };
        if (run(a) != 0 || run(b) != 0)
          return {false, "cli solve failed for " + fam};
      } else {
        Instance inst = read_instance(in);
        SolveOptions o;
        o.workers = workers;
        write_text_file(a, result_to_json(inst, solve(inst, o), o).dump(2));
        write_text_file(b, result_to_json(inst, solve(inst, o), o).dump(2));
      }
      ++compared;
      if (strip_timing(a) != strip_timing(b)) ++differ;
      // Byte comparison of the files with the timing block removed.
      auto bytes = [](const std::string& p) {
        std::string s = read_text_file(p);
        auto k = s.find("\"timing\"");
        if (k == std::string::npos) return s;
        auto e = s.find('}', k);
        return s.substr(0, k) + s.substr(e + 1);
      };
      if (bytes(a) != bytes(b)) ++raw_differ;
    }
  }
  fs::remove_all(dir);
  std::ostringstream os;
  os << compared << " run pairs via " << (cli.empty() ? "library" : "cli") << ", " << differ
     << " differ as JSON, " << raw_differ << " differ as bytes (timing excluded)";
  return {differ == 0 && raw_differ == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--cli", cli, "Command line tool used for the determinism check");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, [&] { return criterion8(cli); }};
  bool all = true;
  for (int c = 1; c <= 8; ++c) {
    if (only && c != only) continue;
    Outcome o;
    try {
      o = checks[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
