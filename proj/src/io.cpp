#include "pwlsep/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace pwlsep {

namespace {

const char* label_name(Label l) { return l == Label::Blue ? "blue" : "red"; }

Label parse_label(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "blue" || s == "b" || s == "-1") return Label::Blue;
  if (s == "red" || s == "r" || s == "1" || s == "+1") return Label::Red;
  throw InputError("unknown label '" + s + "'");
}

Rational coord_from_json(const json& c) {
  if (c.is_string()) return parse_rational(c.get<std::string>());
  if (c.is_number_integer()) return Rational(c.dump());
  if (c.is_number_float()) return parse_rational(c.dump());
  throw InputError("coordinate must be a string or a number");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json names_of(const Instance& inst, const Assignment& a) {
  json out = json::array();
  auto z = a.to_z(inst);
  for (std::size_t v = 0; v < z.size(); ++v)
    if (z[v]) out.push_back(inst.z_name(v));
  return out;
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json pts = json::array(), labels = json::array();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    json coords = json::array();
    for (const auto& c : inst.point(i)) coords.push_back(to_string(c));
    pts.push_back(coords);
    labels.push_back(inst.label(i) == Label::Blue ? "B" : "R");
  }
  return {{"dimension", inst.dimension()},
          {"points", pts},
          {"labels", labels},
          {"blue_groups", inst.blue_groups()},
          {"red_groups", inst.red_groups()}};
}

Instance instance_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("points")) throw InputError("instance JSON needs a \"points\" array");
    std::vector<Point> pts;
    std::vector<Label> labels;
    const json& points = j.at("points");
    bool inline_labels = !points.empty() && points[0].is_object();
    if (!inline_labels && (!j.contains("labels") || j.at("labels").size() != points.size()))
      throw InputError("instance JSON needs one label per point");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const json& p = points[i];
      const json& coords = inline_labels ? p.at("coords") : p;
      Point x;
      for (const auto& c : coords) x.push_back(coord_from_json(c));
      pts.push_back(std::move(x));
      labels.push_back(parse_label((inline_labels ? p.at("label") : j.at("labels")[i]).get<std::string>()));
    }
    std::size_t d = j.contains("dimension") ? j.at("dimension").get<std::size_t>() : (pts.empty() ? 0 : pts[0].size());
    std::size_t nb = j.value("blue_groups", std::size_t{1}), nr = j.value("red_groups", std::size_t{1});
    return Instance(d, std::move(pts), std::move(labels), nb, nr);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed instance JSON: ") + e.what());
  }
}

Instance parse_instance_csv(std::istream& in, std::size_t blue_groups, std::size_t red_groups) {
  std::vector<Point> pts;
  std::vector<Label> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(trim(cell));
    if (cells.size() < 2) throw InputError("line " + std::to_string(lineno) + ": expected label and coordinates");
    // Header rows ("label,x,y") are skipped.
    if (pts.empty() && labels.empty()) {
      try {
        parse_label(cells[0]);
      } catch (const InputError&) {
        continue;
      }
    }
    labels.push_back(parse_label(cells[0]));
    Point x;
    for (std::size_t c = 1; c < cells.size(); ++c) x.push_back(parse_rational(cells[c]));
    pts.push_back(std::move(x));
  }
  std::size_t d = pts.empty() ? 0 : pts[0].size();
  return Instance(d, std::move(pts), std::move(labels), blue_groups, red_groups);
}

void write_instance_csv(const Instance& inst, std::ostream& out) {
  out << "label";
  for (std::size_t a = 0; a < inst.dimension(); ++a) out << ",x" << a + 1;
  out << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) {
    out << label_name(inst.label(i));
    for (const auto& c : inst.point(i)) out << ',' << to_string(c);
    out << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
  if (!f) throw InputError("write failed for '" + path + "'");
}

Instance read_instance(const std::string& path) {
  std::string text = read_text_file(path);
  if (ends_with(path, ".csv")) {
    std::istringstream in(text);
    return parse_instance_csv(in);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

void write_instance(const Instance& inst, const std::string& path) {
  if (ends_with(path, ".csv")) {
    std::ostringstream out;
    write_instance_csv(inst, out);
    write_text_file(path, out.str());
    return;
  }
  write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}

json number_json(const Rational& v, bool as_float) {
  if (as_float) return to_double(v);
  return to_string(v);
}

json hyperplane_json(const Hyperplane& h, bool as_float) {
  json p = json::array();
  for (const auto& c : h.p) p.push_back(number_json(c, as_float));
  return {{"p", p}, {"q", number_json(h.q, as_float)}};
}

json result_to_json(const Instance& inst, const SolveResult& r, const SolveOptions& opt, bool as_float) {
  json groups = json::array();
  for (int g : r.incumbent.group) groups.push_back(g < 0 ? json(nullptr) : json(g));
  json seps = json::array();
  for (const auto& s : r.separators) {
    json h = hyperplane_json(s.hyperplane, as_float);
    h["blue_group"] = s.blue_group;
    h["red_group"] = s.red_group;
    seps.push_back(h);
  }
  json cuts = json::object();
  for (const auto& [f, n] : r.stats.cuts_by_family) cuts[to_string(f)] = n;
  json families = json::array();
  if (opt.families.convex_inclusion) families.push_back("convex-inclusion");
  if (opt.families.obstacle) families.push_back("obstacle");
  if (opt.families.rank) families.push_back("obstacle-rank");
  if (opt.families.mirrored) families.push_back("mirrored");
  return {
      {"status", to_string(r.status)},
      {"objective", opt.objective == ObjectiveForm::MaximizeAssigned ? "max-assigned" : "min-outliers"},
      {"assigned", r.assigned},
      {"outlier_count", r.outliers.size()},
      {"outliers", r.outliers},
      {"groups", groups},
      {"separators", seps},
      {"upper_bound", number_json(r.upper_bound, as_float)},
      {"gap", number_json(r.gap, as_float)},
      {"big_m", number_json(r.big_m, as_float)},
      {"verified", is_feasible(inst, r.incumbent).feasible},
      {"options",
       {{"time_limit", opt.time_limit},
        {"node_limit", opt.node_limit},
        {"workers", opt.workers},
        {"seed", opt.seed},
        {"float_lp", opt.float_lp},
        {"cut_families", families}}},
      {"stats",
       {{"nodes", r.stats.nodes},
        {"lp_solves", r.stats.lp_solves},
        {"exact_fallbacks", r.stats.exact_fallbacks},
        {"separation_rounds", r.stats.separation_rounds},
        {"integer_checks", r.stats.integer_checks},
        {"incumbent_updates", r.stats.incumbent_updates},
        {"pool_size", r.pool.size()},
        {"cuts_by_family", cuts}}},
      {"timing", {{"seconds", r.stats.seconds}}},
  };
}

std::optional<Assignment> cut_witness(const Instance& inst, const ZInequality& cut) {
  Assignment a = Assignment::all_outliers(inst);
  for (const auto& [v, c] : cut.coeffs) {
    if (sgn(c) <= 0) continue;
    std::size_t p = inst.z_point(v);
    if (a.group[p] < 0) a.group[p] = static_cast<int>(inst.z_group(v));
  }
  auto z = a.to_z(inst);
  if (cut.lhs(z) <= cut.rhs) return std::nullopt;
  return a;
}

json cut_to_json(const Instance& inst, const ZInequality& cut, const std::optional<Assignment>& violated_by,
                 bool as_float) {
  const Provenance& pv = cut.provenance;
  json prov = {{"family", to_string(pv.family)},
               {"mirrored", pv.mirrored},
               {"set", pv.set},
               {"endpoints", pv.endpoints},
               {"set_group", pv.set_group ? json(*pv.set_group) : json(nullptr)},
               {"endpoint_group", pv.endpoint_group ? json(*pv.endpoint_group) : json(nullptr)}};
  if (!pv.detail.empty()) {
    json detail = json::parse(pv.detail, nullptr, false);
    prov["detail"] = detail.is_discarded() ? json(pv.detail) : detail;
  }
  json coeffs = json::object();
  for (const auto& [v, c] : cut.coeffs) coeffs[inst.z_name(v)] = number_json(c, as_float);
  return {{"provenance", prov},
          {"coeffs", coeffs},
          {"rhs", number_json(cut.rhs, as_float)},
          {"violated_by", violated_by ? names_of(inst, *violated_by) : json(nullptr)}};
}

json facet_report_json(const Instance& inst, const FacetReport& r) {
  json out = {{"inequality", cut_to_json(inst, r.inequality)},
              {"valid", r.valid},
              {"tight_count", r.tight_count},
              {"face_dimension", r.face_dimension},
              {"polytope_dimension", r.polytope_dimension},
              {"verdict", to_string(r.verdict)},
              {"polytope", r.polytope}};
  if (r.violating) {
    Assignment a = Assignment::from_mask(inst, *r.violating);
    out["violating"] = names_of(inst, a);
  }
  return out;
}

json suite_report_json(const SuiteReport& rep) {
  json cases = json::array();
  for (const auto& c : rep.cases) {
    json jc = {{"theorem", c.theorem},
               {"seed", c.seed},
               {"num_z", c.num_z},
               {"applicable", c.applicable},
               {"expected_facet", c.expected_facet},
               {"verdict", to_string(c.report.verdict)},
               {"face_dimension", c.report.face_dimension},
               {"polytope_dimension", c.report.polytope_dimension},
               {"contradiction", c.contradiction},
               {"note", c.note}};
    if (c.contradiction && c.instance) jc["instance"] = instance_to_json(*c.instance);
    cases.push_back(jc);
  }
  json summary = json::array();
  for (const auto& s : rep.summary)
    summary.push_back({{"theorem", s.theorem},
                       {"instances", s.instances},
                       {"applicable", s.applicable},
                       {"facets", s.facets},
                       {"contradictions", s.contradictions}});
  return {{"summary", summary},
          {"contradictions", rep.contradictions},
          {"cases", cases},
          {"timing", {{"seconds", rep.seconds}}}};
}

std::string suite_report_text(const SuiteReport& rep) {
  std::ostringstream os;
  os << std::left << std::setw(30) << "theorem" << std::right << std::setw(10) << "instances" << std::setw(12)
     << "applicable" << std::setw(8) << "facets" << std::setw(16) << "contradictions" << '\n';
  for (const auto& s : rep.summary)
    os << std::left << std::setw(30) << s.theorem << std::right << std::setw(10) << s.instances << std::setw(12)
       << s.applicable << std::setw(8) << s.facets << std::setw(16) << s.contradictions << '\n';
  for (const auto& c : rep.cases)
    if (c.contradiction)
      os << "contradiction: " << c.theorem << " seed " << c.seed << " verdict " << to_string(c.report.verdict)
         << " face " << c.report.face_dimension << "/" << c.report.polytope_dimension << " (" << c.note << ")\n";
  os << "total contradictions: " << rep.contradictions << '\n';
  return os.str();
}

}  // namespace pwlsep
