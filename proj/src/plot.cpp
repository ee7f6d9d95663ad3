#include "pwlsep/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwlsep {

namespace {

const char* kPalette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double lo_x, hi_x, lo_y, hi_y, size, margin;

  double sx(double x) const { return margin + (x - lo_x) / (hi_x - lo_x) * (size - 2 * margin); }
  double sy(double y) const { return size - margin - (y - lo_y) / (hi_y - lo_y) * (size - 2 * margin); }
};

// Clips p0·x + p1·y + q = 0 to the frame's data box.
bool clip_line(const Frame& f, double p0, double p1, double q, double out[4]) {
  std::vector<std::pair<double, double>> hits;
  auto add = [&](double x, double y) {
    if (x >= f.lo_x - 1e-9 && x <= f.hi_x + 1e-9 && y >= f.lo_y - 1e-9 && y <= f.hi_y + 1e-9) hits.emplace_back(x, y);
  };
  if (std::abs(p1) > 1e-12) {
    add(f.lo_x, -(p0 * f.lo_x + q) / p1);
    add(f.hi_x, -(p0 * f.hi_x + q) / p1);
  }
  if (std::abs(p0) > 1e-12) {
    add(-(p1 * f.lo_y + q) / p0, f.lo_y);
    add(-(p1 * f.hi_y + q) / p0, f.hi_y);
  }
  if (hits.size() < 2) return false;
  auto far = std::max_element(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
    return std::hypot(a.first - hits[0].first, a.second - hits[0].second) <
           std::hypot(b.first - hits[0].first, b.second - hits[0].second);
  });
  out[0] = hits[0].first;
  out[1] = hits[0].second;
  out[2] = far->first;
  out[3] = far->second;
  return true;
}

}  // namespace

std::string plot_svg(const Instance& inst, const SolveResult* result, const PlotOptions& opt) {
  if (inst.dimension() != 2) throw PreconditionError("plot needs a planar instance (d = 2)");
  double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    double x = to_double(inst.point(i)[0]), y = to_double(inst.point(i)[1]);
    if (i == 0) {
      lo_x = hi_x = x;
      lo_y = hi_y = y;
    }
    lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
  }
  double pad = 0.08 * std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
  Frame f{lo_x - pad, hi_x + pad, lo_y - pad, hi_y + pad, opt.size, opt.margin};

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size << "\" height=\"" << opt.size
     << "\" viewBox=\"0 0 " << opt.size << ' ' << opt.size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (result) {
    os << "<g fill=\"none\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\">\n";
    for (const auto& s : result->separators) {
      double seg[4];
      if (!clip_line(f, to_double(s.hyperplane.p[0]), to_double(s.hyperplane.p[1]), to_double(s.hyperplane.q), seg))
        continue;
      os << "<line x1=\"" << f.sx(seg[0]) << "\" y1=\"" << f.sy(seg[1]) << "\" x2=\"" << f.sx(seg[2]) << "\" y2=\""
         << f.sy(seg[3]) << "\" stroke=\"" << kPalette[s.blue_group % 6] << "\"><title>blue " << s.blue_group
         << " / red " << s.red_group << "</title></line>\n";
    }
    os << "</g>\n";
  }

  double r = opt.radius;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    double x = f.sx(to_double(inst.point(i)[0])), y = f.sy(to_double(inst.point(i)[1]));
    int g = result ? result->incumbent.group.at(i) : 0;
    bool outlier = result && g < 0;
    if (inst.label(i) == Label::Blue) {
      os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" stroke=\"black\" fill=\""
         << (outlier ? "none" : result ? kPalette[g % 6] : "black") << "\"/>\n";
    } else {
      const char* stroke = outlier ? "#999999" : "black";
      os << "<path d=\"M" << x - r << ' ' << y - r << "L" << x + r << ' ' << y + r << "M" << x - r << ' ' << y + r
         << "L" << x + r << ' ' << y - r << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
      if (outlier)
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << 1.6 * r
           << "\" stroke=\"#999999\" fill=\"none\" stroke-dasharray=\"2 2\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pwlsep
