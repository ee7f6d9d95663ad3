#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pwlsep/model.hpp"

namespace pwlsep {

namespace {

constexpr std::size_t kTermsPerLine = 8;

mpz_class lcm_of_denominators(const std::vector<std::pair<std::size_t, Rational>>& terms, const Rational& rhs) {
  mpz_class l = rhs.get_den();
  for (const auto& t : terms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.second.get_den().get_mpz_t());
  return l;
}

void write_terms(std::ostream& out, const MilpModel& model,
                 const std::vector<std::pair<std::size_t, Rational>>& terms, const mpz_class& scale) {
  std::size_t on_line = 0;
  for (const auto& [v, c] : terms) {
    Rational s = c * scale;
    if (sgn(s) == 0) continue;
    if (on_line == kTermsPerLine) {
      out << "\n   ";
      on_line = 0;
    }
    out << (sgn(s) < 0 ? " - " : " + ");
    Rational mag = abs(s);
    if (mag != 1) out << mag.get_num().get_str() << ' ';
    out << model.variables[v].name;
    ++on_line;
  }
}

const char* sense_text(RowSense s) {
  switch (s) {
    case RowSense::LessEqual: return "<=";
    case RowSense::GreaterEqual: return ">=";
    case RowSense::Equal: return "=";
  }
  return "?";
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  char c = tok[0];
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
  if ((c == '+' || c == '-') && tok.size() > 1) {
    char n = tok[1];
    return std::isdigit(static_cast<unsigned char>(n)) || n == '.';
  }
  return false;
}

bool is_sense(const std::string& tok) {
  return tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">" || tok == "=<" || tok == "=>";
}

RowSense parse_sense(const std::string& tok) {
  if (tok == "<=" || tok == "<" || tok == "=<") return RowSense::LessEqual;
  if (tok == ">=" || tok == ">" || tok == "=>") return RowSense::GreaterEqual;
  return RowSense::Equal;
}

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      // split "name:" glued to the following token, e.g. "c1:+x"
      if (auto colon = tok.find(':'); colon != std::string::npos && colon + 1 < tok.size()) {
        tokens.push_back(tok.substr(0, colon + 1));
        tokens.push_back(tok.substr(colon + 1));
      } else {
        tokens.push_back(tok);
      }
    }
  }
  return tokens;
}

}  // namespace

void export_lp_format(const MilpModel& model, std::ostream& out) {
  out << "\\ piecewise linear separability model\n";
  for (const auto& note : model.notes) out << "\\ " << note << '\n';
  out << (model.maximize ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  write_terms(out, model, model.objective, mpz_class(1));
  out << "\nSubject To\n";
  for (const auto& row : model.rows) {
    mpz_class scale = lcm_of_denominators(row.terms, row.rhs);
    out << ' ' << row.name << ':';
    write_terms(out, model, row.terms, scale);
    Rational rhs = row.rhs * scale;
    out << ' ' << sense_text(row.sense) << ' ' << rhs.get_num().get_str() << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.variables) {
    if (!v.lower && !v.upper) {
      out << ' ' << v.name << " free\n";
      continue;
    }
    // Bounds are written as decimals only when exact; the model never
    // produces others.
    auto text = [](const Rational& r) {
      if (r.get_den() == 1) return r.get_num().get_str();
      if (!has_terminating_decimal(r)) throw InputError("bound without exact decimal form");
      mpz_class den = r.get_den(), scale = 1;
      int digits = 0;
      while (mpz_divisible_p(scale.get_mpz_t(), den.get_mpz_t()) == 0) {
        scale *= 10;
        ++digits;
      }
      mpz_class n = abs(r.get_num()) * (scale / den);
      std::string s = n.get_str();
      while (static_cast<int>(s.size()) <= digits) s.insert(0, "0");
      s.insert(s.size() - static_cast<std::size_t>(digits), ".");
      return (sgn(r) < 0 ? "-" : "") + s;
    };
    out << ' ' << (v.lower ? text(*v.lower) : std::string("-inf")) << " <= " << v.name << " <= "
        << (v.upper ? text(*v.upper) : std::string("+inf")) << '\n';
  }
  out << "Binaries\n";
  std::size_t on_line = 0;
  for (const auto& v : model.variables) {
    if (v.type != VariableType::Binary) continue;
    out << ' ' << v.name;
    if (++on_line == kTermsPerLine) {
      out << '\n';
      on_line = 0;
    }
  }
  if (on_line) out << '\n';
  out << "End\n";
}

void export_lp_format(const MilpModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  export_lp_format(model, out);
  if (!out) throw InputError("failed writing '" + path + "'");
}

MilpModel parse_lp_format(std::istream& in) {
  MilpModel model;
  std::vector<std::string> tokens = tokenize(in);
  Section section = Section::None;
  auto var_id = [&](const std::string& name) {
    if (auto v = model.find(name)) return *v;
    return model.add_variable({name, VariableType::Continuous, Rational(0), std::nullopt});
  };

  std::size_t pos = 0;
  auto section_of = [&](std::size_t at, std::size_t& consumed) -> std::optional<Section> {
    std::string t = lower(tokens[at]);
    consumed = 1;
    if (t == "maximize" || t == "maximise" || t == "max") {
      model.maximize = true;
      return Section::Objective;
    }
    if (t == "minimize" || t == "minimise" || t == "min") {
      model.maximize = false;
      return Section::Objective;
    }
    if (t == "subject" && at + 1 < tokens.size() && lower(tokens[at + 1]) == "to") {
      consumed = 2;
      return Section::Constraints;
    }
    if (t == "st" || t == "s.t." || t == "such") return Section::Constraints;
    if (t == "bounds" || t == "bound") return Section::Bounds;
    if (t == "binaries" || t == "binary" || t == "bin") return Section::Binaries;
    if (t == "generals" || t == "general" || t == "gen") return Section::Generals;
    if (t == "end") return Section::End;
    return std::nullopt;
  };

  // Reads "[name:] (±) [coef] var ..." until a sense token or section keyword.
  auto read_terms = [&](std::vector<std::pair<std::size_t, Rational>>& terms) {
    Rational sign = 1;
    std::optional<Rational> coef;
    while (pos < tokens.size()) {
      std::size_t consumed = 0;
      if (is_sense(tokens[pos]) || section_of(pos, consumed)) break;
      const std::string& tok = tokens[pos];
      if (tok == "+") {
        sign = 1;
      } else if (tok == "-") {
        sign = -1;
      } else if (is_number(tok)) {
        coef = parse_rational(tok);
      } else {
        Rational c = sign * (coef ? *coef : Rational(1));
        terms.emplace_back(var_id(tok), c);
        sign = 1;
        coef.reset();
      }
      ++pos;
    }
  };

  while (pos < tokens.size() && section != Section::End) {
    std::size_t consumed = 0;
    if (auto s = section_of(pos, consumed)) {
      section = *s;
      pos += consumed;
      continue;
    }
    switch (section) {
      case Section::Objective: {
        if (tokens[pos].back() == ':') ++pos;
        read_terms(model.objective);
        break;
      }
      case Section::Constraints: {
        MilpRow row;
        if (tokens[pos].back() == ':') {
          row.name = tokens[pos].substr(0, tokens[pos].size() - 1);
          ++pos;
        } else {
          row.name = "R" + std::to_string(model.rows.size());
        }
        read_terms(row.terms);
        if (pos + 1 >= tokens.size() || !is_sense(tokens[pos])) throw InputError("row '" + row.name + "' lacks a sense");
        row.sense = parse_sense(tokens[pos]);
        row.rhs = parse_rational(tokens[pos + 1]);
        pos += 2;
        model.rows.push_back(std::move(row));
        break;
      }
      case Section::Bounds: {
        auto parse_bound = [](const std::string& t) -> std::optional<Rational> {
          std::string l = lower(t);
          if (l == "-inf" || l == "-infinity" || l == "+inf" || l == "inf" || l == "infinity" || l == "+infinity") {
            return std::nullopt;
          }
          return parse_rational(t);
        };
        if (pos + 1 < tokens.size() && lower(tokens[pos + 1]) == "free") {
          auto v = var_id(tokens[pos]);
          model.variables[v].lower.reset();
          model.variables[v].upper.reset();
          pos += 2;
        } else if (pos + 4 < tokens.size() && is_sense(tokens[pos + 1]) && is_sense(tokens[pos + 3])) {
          auto v = var_id(tokens[pos + 2]);
          model.variables[v].lower = parse_bound(tokens[pos]);
          model.variables[v].upper = parse_bound(tokens[pos + 4]);
          pos += 5;
        } else if (pos + 2 < tokens.size() && is_sense(tokens[pos + 1])) {
          auto v = var_id(tokens[pos]);
          auto b = parse_bound(tokens[pos + 2]);
          switch (parse_sense(tokens[pos + 1])) {
            case RowSense::LessEqual: model.variables[v].upper = b; break;
            case RowSense::GreaterEqual: model.variables[v].lower = b; break;
            case RowSense::Equal: model.variables[v].lower = model.variables[v].upper = b; break;
          }
          pos += 3;
        } else {
          throw InputError("unreadable bound near '" + tokens[pos] + "'");
        }
        break;
      }
      case Section::Binaries: {
        auto v = var_id(tokens[pos++]);
        model.variables[v].type = VariableType::Binary;
        if (!model.variables[v].upper) model.variables[v].upper = Rational(1);
        if (!model.variables[v].lower) model.variables[v].lower = Rational(0);
        break;
      }
      case Section::Generals:
        ++pos;
        break;
      case Section::None:
      case Section::End:
        throw InputError("unexpected token '" + tokens[pos] + "'");
    }
  }
  return model;
}

}  // namespace pwlsep
