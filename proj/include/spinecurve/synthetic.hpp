#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinecurve/diagnosis.hpp"

namespace spinecurve {

/// One planted scoliotic curve. wedge_fraction splits the local angular
/// change between vertebral wedging and disc tilt: 0 keeps every
/// vertebra's endplates parallel, 1 expresses the whole change inside
/// the vertebral bodies.
struct CurveSpec {
    VertebraId upper_ev;
    VertebraId lower_ev;
    CurveDirection direction = CurveDirection::Right;
    double cobb_deg = 0.0;
    double wedge_fraction = 0.5;
};

struct SpineSpec {
    std::string case_id = "synthetic";
    std::vector<CurveSpec> curves; // cranial to caudal, alternating directions
    double vertebra_height_px = 40.0;
    double disc_height_px = 14.0;
    double vertebra_width_px = 160.0;
    double noise_deg = 0.0; // endplate rotation jitter, applied to corners
    double noise_px = 0.0;  // positional jitter per corner coordinate
    uint64_t seed = 0;
};

struct GeneratedCase {
    Spine spine;
    CurveReport ground_truth; // planted curves; extrema/pc1 left empty
};

/// Build a spine whose diagnosis ground truth is known by construction.
///
/// The per-vertebra tilt follows cosine ramps between the planted end
/// vertebrae (zero angular increment at the end vertebrae, peak increment
/// at the apex), so the pairwise angle between the planted end vertebrae
/// equals the requested Cobb angle exactly before noise. Segments outside
/// the curves ease slightly off the end-vertebra tilt so every planted
/// end vertebra is a strict extremum. Centers are laid out so the
/// directional-angle constraint holds exactly. Noise, when requested, is
/// applied to the corner landmarks after the ground truth is recorded.
GeneratedCase generate(const SpineSpec& spec);

/// Longitudinal cohort rows for correlation-harness testing: two visits
/// per patient with a planted linear correlation between baseline VWI
/// and Cobb progression. Risser and baseline Cobb are uncorrelated.
struct CohortRow {
    std::string case_id;
    std::string date;
    double vwi = 0.0;
    int risser = 0;
    double cobb = 0.0;
};

std::vector<CohortRow> generate_cohort(int n_patients, double planted_r, uint64_t seed);

} // namespace spinecurve
