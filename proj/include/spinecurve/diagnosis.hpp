#pragma once

#include <string>
#include <vector>

#include "spinecurve/angle_matrix.hpp"
#include "spinecurve/landmark.hpp"

namespace spinecurve {

inline constexpr const char* kDiagnoseVersion = "spinecurve-1.0";

/// Clinical thresholds and detection knobs. Defaults follow standard
/// practice: 10 degrees for clinical significance, 20/40 degree severity
/// boundaries, a +/-2 vertebra extremum window relaxed to +/-1 for L2-L4.
struct DiagnosisConfig {
    double gamma_threshold_deg = 10.0;
    double severity_moderate_deg = 20.0;
    double severity_severe_deg = 40.0;
    int extremum_window = 2;
    int lumbar_relaxed_window = 1;
    double constraint_eps_deg = 5.0;
    double svd_rank_tol = 1e-8;
};

enum class ExtremumKind { Max, Min };

struct Extremum {
    VertebraId vertebra;
    ExtremumKind kind;
    double score = 0.0;
};

enum class CurveDirection { Right, Left };

struct Curve {
    VertebraId upper_ev;
    VertebraId lower_ev;
    CurveDirection direction = CurveDirection::Right;
    double cobb_deg = 0.0;
    double vwi_deg = 0.0;
};

enum class Severity { NormalMild, Moderate, Severe };

const char* to_string(CurveDirection d);
const char* to_string(Severity s);
const char* to_string(ExtremumKind k);

Severity classify_severity(double max_cobb_deg, const DiagnosisConfig& cfg = {});

struct CurveReport {
    std::string case_id;
    std::vector<Curve> curves; // cranial to caudal
    double max_cobb_deg = 0.0;
    Severity severity = Severity::NormalMild;
    std::vector<Extremum> extrema;
    Pc1Scores pc1;
    double constraint_score_deg = 0.0;
};

/// Local extrema of the PC1 curve: candidate end vertebrae.
/// A vertebra qualifies as a Max when its score is >= every neighbor
/// within the window (both kinds at once means a flat stretch, which is
/// not an extremum). L5 is excluded outright; L2-L4 use the relaxed
/// window. Runs of consecutive same-kind qualifiers collapse to the
/// largest |score| (cranial-most on an exact tie).
std::vector<Extremum> detect_extrema(const Pc1Scores& pc1,
                                     const DiagnosisConfig& cfg = {});

/// Candidate curves from adjacent opposite-kind extrema, kept when the
/// masked pairwise angle clears the significance threshold. When no
/// extremum lies below L1, L4 may terminate a final curve if the residual
/// angle is significant.
std::vector<Curve> identify_curves(const std::vector<Extremum>& extrema,
                                   const AngleMatrix& am,
                                   const DiagnosisConfig& cfg = {});

/// Drop heavily overlapping curves (smaller Cobb loses, cranial kept on
/// tie), then merge consecutive same-direction curves re-reading the
/// merged Cobb from the angle matrix; repeats to fixpoint and re-applies
/// the significance threshold.
std::vector<Curve> postprocess_curves(std::vector<Curve> curves,
                                      const AngleMatrix& am,
                                      const DiagnosisConfig& cfg = {});

/// Vertebral Wedging Index: mean |upper angle - lower angle| over all
/// vertebrae in the range, both ends inclusive.
double vwi(VertebraId upper_ev, VertebraId lower_ev, const Spine& spine);

struct ConstraintViolation {
    VertebraId vertebra;
    double deviation_deg = 0.0; // |mean tilt - mean directional angle|
};

struct ConstraintReport {
    double score_deg = 0.0; // sum of deviations that exceed the threshold
    std::vector<ConstraintViolation> violations;
};

/// Biomechanical coherence check: for each interior vertebra, compares
/// its mean tilt against the mean directional angle to its neighbors,
/// counting deviations only beyond eps_deg. Intended as an annotation
/// quality metric, not a diagnosis gate.
ConstraintReport constraint_violation(const Spine& spine, double eps_deg);

/// Full pipeline: angle matrix, PC1, extrema, curves, post-processing,
/// per-curve VWI, severity. Pure and deterministic.
CurveReport diagnose(const Spine& spine, const DiagnosisConfig& cfg = {});

} // namespace spinecurve
