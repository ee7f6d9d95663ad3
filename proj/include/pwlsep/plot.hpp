#pragma once

#include <string>

#include "pwlsep/model.hpp"
#include "pwlsep/solver.hpp"

namespace pwlsep {

struct PlotOptions {
  double size = 480;    // canvas width and height in px
  double radius = 4;    // marker radius in px
  double margin = 24;
};

/// SVG of a planar instance: blue points as circles, red points as crosses.
/// With a result, separators are drawn dashed (one colour per blue group)
/// and outliers hollow. Throws PreconditionError unless d = 2.
std::string plot_svg(const Instance& inst, const SolveResult* result = nullptr, const PlotOptions& opt = {});

}  // namespace pwlsep
