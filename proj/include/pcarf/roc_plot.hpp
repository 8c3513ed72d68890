#pragma once

#include <string>

#include "pcarf/metrics.hpp"

namespace pcarf {

// Standalone SVG: unit axes with ticks, dashed chance diagonal, the curve as
// a polyline, and the AUC in the legend.
std::string roc_svg(const RocCurve& curve, const std::string& title = "ROC curve");

}  // namespace pcarf
