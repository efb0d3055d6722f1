#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "spinecurve/diagnosis.hpp"

namespace spinecurve {

/// One evaluated case: ground-truth and predicted landmark sets with
/// their diagnosis reports (both produced by the same pipeline version).
struct CasePair {
    std::string case_id;
    Spine gt_spine;
    CurveReport gt;
    Spine pred_spine;
    CurveReport pred;
};

struct EvalReport {
    double mmae_deg = 0.0;
    double da_pct = 0.0;
    double cdr_pct = 0.0;
    double fdr_pct = 0.0;
    double mpe_px = 0.0;
    double mae_deg = 0.0;
    // Severity confusion counts, [ground truth][predicted], ordered
    // NormalMild / Moderate / Severe.
    std::array<std::array<int, 3>, 3> confusion{};
    int n_cases = 0;
    int n_gt_curves = 0;
    int n_pred_curves = 0;
    std::string diagnose_version = kDiagnoseVersion;
    // Positional/angular means divide by all 36 landmarks of every case.
    std::string landmark_averaging = "per-landmark (divisor 36*N)";
};

/// Mean absolute difference between predicted and ground-truth maximum
/// Cobb angles.
double mmae(std::span<const CasePair> pairs);

/// Percentage of cases whose severity class matches.
double diagnostic_accuracy(std::span<const CasePair> pairs);

/// Percentage of ground-truth curves with a predicted curve whose end
/// vertebrae both lie within one level. Matching is one-to-one, greedy
/// cranial-first.
double curve_detection_rate(std::span<const CasePair> pairs);

/// Percentage of predicted curves matching no ground-truth curve in
/// their case (some end vertebra off by more than one level for every
/// ground-truth curve).
double false_detection_rate(std::span<const CasePair> pairs);

/// Mean Euclidean distance between corresponding endplate midpoints,
/// averaged over all 36 landmarks of all cases. Pixels.
double mean_position_error(std::span<const CasePair> pairs);

/// Mean absolute difference between corresponding endplate angles,
/// averaged over all 36 endplates of all cases. Degrees.
double mean_angle_error(std::span<const CasePair> pairs);

/// Sample Pearson correlation with a two-sided p-value from the Student-t
/// transform t = r * sqrt((n-2)/(1-r^2)) on n-2 degrees of freedom.
struct Correlation {
    double r = 0.0;
    double p = 1.0;
};
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// All metrics plus the severity confusion matrix in one pass.
EvalReport evaluate_cases(std::span<const CasePair> pairs);

} // namespace spinecurve
