#pragma once

#include <string>

#include "spinchain/csvio.hpp"

namespace spinchain {

struct SvgStyle {
  int width = 760;
  int height = 480;
  std::string title;
  std::string x_label = "t";
  std::string y_label;
};

// Self-contained vector plot: axes with ticks, a legend entry per curve, one
// polyline per curve.
void emit_svg(const Table& table, const std::string& path, const SvgStyle& style = {});

}  // namespace spinchain
