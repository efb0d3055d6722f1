#pragma once

#include <string>

#include "spinecurve/diagnosis.hpp"
#include "spinecurve/metrics.hpp"

namespace spinecurve {

/// Angle-matrix heatmap. Cells where the pairing has no clinical meaning
/// (upper endplate of a caudal vertebra against the lower endplate of a
/// cranial one) are left blank.
std::string gamma_heatmap_svg(const AngleMatrix& am, const std::string& title);

/// PC1 score polyline with extremum markers.
std::string pc1_curve_svg(const Pc1Scores& pc1, const std::vector<Extremum>& extrema,
                          const std::string& title);

/// Posteroanterior sketch of the spine with end-vertebra endplate lines
/// and per-curve Cobb labels.
std::string spine_overlay_svg(const Spine& spine, const CurveReport& report);

/// 3x3 severity confusion matrix (rows: ground truth, columns: predicted).
std::string confusion_matrix_svg(const EvalReport& report);

} // namespace spinecurve
