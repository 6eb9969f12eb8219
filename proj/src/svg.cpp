#include "spinchain/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinchain {

namespace {

const char* kPalette[] = {"#c0392b", "#2c3e50", "#2980b9", "#27ae60",
                          "#8e44ad", "#d35400", "#16a085", "#7f8c8d"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void emit_svg(const Table& table, const std::string& path, const SvgStyle& style) {
  if (table.columns.empty()) throw std::invalid_argument("emit_svg: no curves");
  if (table.t.size() == 0) throw std::invalid_argument("emit_svg: empty time grid");

  const double W = style.width, H = style.height;
  const double ml = 64, mr = 16, mt = style.title.empty() ? 16 : 36, mb = 48;
  const double pw = W - ml - mr, ph = H - mt - mb;

  const double x0 = table.t.minCoeff(), x1 = table.t.maxCoeff();
  double y0 = 1e300, y1 = -1e300;
  for (const auto& [label, v] : table.columns) {
    y0 = std::min(y0, v.minCoeff());
    y1 = std::max(y1, v.maxCoeff());
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double ypad = 0.05 * (y1 - y0);
  y0 -= ypad;
  y1 += ypad;
  const double xspan = (x1 - x0) < 1e-300 ? 1.0 : (x1 - x0);

  auto px = [&](double x) { return ml + (x - x0) / xspan * pw; };
  auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  if (!style.title.empty())
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(style.title)
        << "</text>\n";

  // axes
  out << "<g stroke=\"#333333\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\"/>\n";
  out << "</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double xv = x0 + (x1 - x0) * i / nticks;
    const double yv = y0 + (y1 - y0) * i / nticks;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(xv)
        << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
        << py(yv) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << ml - 7 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
      << xml_escape(style.x_label) << "</text>\n";
  if (!style.y_label.empty())
    out << "<text x=\"14\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">"
        << xml_escape(style.y_label) << "</text>\n";
  out << "</g>\n";

  // curves
  std::size_t ci = 0;
  for (const auto& [label, v] : table.columns) {
    const char* color = kPalette[ci % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < table.t.size(); ++i) {
      if (i) out << ' ';
      out << fmt(px(table.t[i])) << ',' << fmt(py(v[i]));
    }
    out << "\"/>\n";
    ++ci;
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  ci = 0;
  for (const auto& [label, v] : table.columns) {
    const char* color = kPalette[ci % (sizeof kPalette / sizeof kPalette[0])];
    const double ly = mt + 14 + 16.0 * ci;
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 126
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text class=\"legend\" x=\"" << ml + pw - 120 << "\" y=\"" << ly + 4 << "\">"
        << xml_escape(label) << "</text>\n";
    ++ci;
  }
  out << "</g>\n";
  out << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_svg: cannot open " + path);
  f << out.str();
}

}  // namespace spinchain
