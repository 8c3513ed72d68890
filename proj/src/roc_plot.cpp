#include "pcarf/roc_plot.hpp"

#include <cstdio>
#include <sstream>

namespace pcarf {

namespace {

constexpr double kSize = 400.0;    // plot area edge, px
constexpr double kLeft = 70.0;
constexpr double kTop = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

double px(double fpr) { return kLeft + fpr * kSize; }
double py(double tpr) { return kTop + (1.0 - tpr) * kSize; }

std::string escape(const std::string& s) {
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

}  // namespace

std::string roc_svg(const RocCurve& curve, const std::string& title) {
  const double width = kLeft + kSize + 30.0;
  const double height = kTop + kSize + 60.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft + kSize / 2) << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double t = i / 5.0;
    svg << "<line class=\"grid\" x1=\"" << num(px(t)) << "\" y1=\"" << num(py(0)) << "\" x2=\""
        << num(px(t)) << "\" y2=\"" << num(py(1)) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<line class=\"grid\" x1=\"" << num(px(0)) << "\" y1=\"" << num(py(t)) << "\" x2=\""
        << num(px(1)) << "\" y2=\"" << num(py(t)) << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << num(px(t)) << "\" y=\"" << num(py(0) + 18) << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << num(t) << "</text>\n";
    svg << "<text x=\"" << num(px(0) - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << num(t) << "</text>\n";
  }
  svg << "<rect id=\"axes\" x=\"" << num(px(0)) << "\" y=\"" << num(py(1)) << "\" width=\"" << num(kSize)
      << "\" height=\"" << num(kSize) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(kLeft + kSize / 2) << "\" y=\"" << num(py(0) + 40)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << "False positive rate</text>\n";
  svg << "<text x=\"18\" y=\"" << num(kTop + kSize / 2) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(kTop + kSize / 2) << ")\">True positive rate</text>\n";

  svg << "<line id=\"baseline\" x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\""
      << num(px(1)) << "\" y2=\"" << num(py(1))
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

  svg << "<polyline id=\"curve\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    svg << (i ? " " : "") << num(px(curve.points[i].fpr)) << ',' << num(py(curve.points[i].tpr));
  }
  svg << "\"/>\n";

  const double lx = px(0.45);
  const double ly = py(0.18);
  svg << "<rect x=\"" << num(lx - 8) << "\" y=\"" << num(ly - 16) << "\" width=\"215\" height=\"44\" "
      << "fill=\"white\" stroke=\"#999\"/>\n";
  svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24)
      << "\" y2=\"" << num(ly - 4) << "\" stroke=\"#1f5fbf\" stroke-width=\"2\"/>\n";
  char auc[32];
  std::snprintf(auc, sizeof auc, "%.3f", curve.auc);
  svg << "<text id=\"legend-auc\" x=\"" << num(lx + 32) << "\" y=\"" << num(ly)
      << "\" font-family=\"sans-serif\" font-size=\"12\">Model (AUC = " << auc << ")</text>\n";
  svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly + 16) << "\" x2=\"" << num(lx + 24)
      << "\" y2=\"" << num(ly + 16) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  svg << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 20)
      << "\" font-family=\"sans-serif\" font-size=\"12\">Chance</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pcarf
