#include "spinecurve/diagnosis.hpp"

#include <algorithm>
#include <cmath>

namespace spinecurve {

namespace {

constexpr int kL1 = 14;
constexpr int kL2 = 15;
constexpr int kL4 = 17;

// L5 articulates with the sacrum and never serves as an end vertebra;
// the eligible extremum domain ends at L4.
constexpr int kLastEligible = kL4;

int shared_vertebrae(const Curve& a, const Curve& b) {
    const int lo = std::max(a.upper_ev.index(), b.upper_ev.index());
    const int hi = std::min(a.lower_ev.index(), b.lower_ev.index());
    return std::max(0, hi - lo + 1);
}

Curve make_curve(int upper_index, int lower_index, const AngleMatrix& am) {
    const double g = am.gamma_at(upper_index, lower_index);
    Curve c;
    c.upper_ev = VertebraId(upper_index);
    c.lower_ev = VertebraId(lower_index);
    c.direction = g > 0.0 ? CurveDirection::Right : CurveDirection::Left;
    c.cobb_deg = std::abs(g);
    double wedge_sum = 0.0;
    for (int i = upper_index; i <= lower_index; ++i)
        wedge_sum += std::abs(am.gamma_at(i, i));
    c.vwi_deg = wedge_sum / (lower_index - upper_index + 1);
    return c;
}

void sort_curves(std::vector<Curve>& curves) {
    std::sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) {
        if (a.upper_ev.index() != b.upper_ev.index())
            return a.upper_ev.index() < b.upper_ev.index();
        return a.lower_ev.index() < b.lower_ev.index();
    });
}

} // namespace

const char* to_string(CurveDirection d) {
    return d == CurveDirection::Right ? "right" : "left";
}

const char* to_string(Severity s) {
    switch (s) {
        case Severity::NormalMild: return "normal_mild";
        case Severity::Moderate: return "moderate";
        case Severity::Severe: return "severe";
    }
    return "unknown";
}

const char* to_string(ExtremumKind k) {
    return k == ExtremumKind::Max ? "max" : "min";
}

Severity classify_severity(double max_cobb_deg, const DiagnosisConfig& cfg) {
    if (max_cobb_deg >= cfg.severity_severe_deg) return Severity::Severe;
    if (max_cobb_deg >= cfg.severity_moderate_deg) return Severity::Moderate;
    return Severity::NormalMild;
}

std::vector<Extremum> detect_extrema(const Pc1Scores& pc1, const DiagnosisConfig& cfg) {
    // 0 = neither, 1 = max, -1 = min; 1-based over the eligible domain.
    std::array<int, kNumVertebrae + 1> kind{};
    for (int i = 1; i <= kLastEligible; ++i) {
        const int w = (i >= kL2) ? cfg.lumbar_relaxed_window : cfg.extremum_window;
        const double si = pc1.scores[static_cast<size_t>(i - 1)];
        bool is_max = true;
        bool is_min = true;
        for (int j = std::max(1, i - w); j <= std::min(kLastEligible, i + w); ++j) {
            if (j == i) continue;
            const double sj = pc1.scores[static_cast<size_t>(j - 1)];
            if (si < sj) is_max = false;
            if (si > sj) is_min = false;
        }
        if (is_max && is_min) continue; // flat neighborhood
        kind[static_cast<size_t>(i)] = is_max ? 1 : (is_min ? -1 : 0);
    }

    // Collapse each run of consecutive same-kind qualifiers to its most
    // representative vertebra: largest |score|, cranial-most on a tie.
    std::vector<Extremum> out;
    int i = 1;
    while (i <= kLastEligible) {
        const int k = kind[static_cast<size_t>(i)];
        if (k == 0) {
            ++i;
            continue;
        }
        int best = i;
        int j = i;
        while (j + 1 <= kLastEligible && kind[static_cast<size_t>(j + 1)] == k) {
            ++j;
            if (std::abs(pc1.scores[static_cast<size_t>(j - 1)]) >
                std::abs(pc1.scores[static_cast<size_t>(best - 1)]))
                best = j;
        }
        out.push_back(Extremum{VertebraId(best),
                               k == 1 ? ExtremumKind::Max : ExtremumKind::Min,
                               pc1.scores[static_cast<size_t>(best - 1)]});
        i = j + 1;
    }
    return out;
}

std::vector<Curve> identify_curves(const std::vector<Extremum>& extrema,
                                   const AngleMatrix& am, const DiagnosisConfig& cfg) {
    std::vector<Extremum> sorted = extrema;
    std::sort(sorted.begin(), sorted.end(), [](const Extremum& a, const Extremum& b) {
        return a.vertebra.index() < b.vertebra.index();
    });

    std::vector<Curve> curves;
    for (size_t k = 0; k + 1 < sorted.size(); ++k) {
        if (sorted[k].kind == sorted[k + 1].kind) continue;
        const int u = sorted[k].vertebra.index();
        const int l = sorted[k + 1].vertebra.index();
        if (!am.valid(u, l)) continue;
        if (std::abs(am.gamma_at(u, l)) < cfg.gamma_threshold_deg) continue;
        curves.push_back(make_curve(u, l, am));
    }

    // Terminal fallback: with no extremum below L1, L4 may close a final
    // curve if the residual angle is clinically significant.
    if (!sorted.empty()) {
        const int tail = sorted.back().vertebra.index();
        if (tail <= kL1 && std::abs(am.gamma_at(tail, kL4)) >= cfg.gamma_threshold_deg)
            curves.push_back(make_curve(tail, kL4, am));
    }
    return curves;
}

std::vector<Curve> postprocess_curves(std::vector<Curve> curves, const AngleMatrix& am,
                                      const DiagnosisConfig& cfg) {
    sort_curves(curves);
    bool changed = true;
    while (changed) {
        changed = false;

        // Overlap removal: sharing more than one boundary vertebra drops
        // the smaller-Cobb curve (cranial kept on an exact tie).
        for (size_t i = 0; !changed && i < curves.size(); ++i) {
            for (size_t j = i + 1; !changed && j < curves.size(); ++j) {
                if (shared_vertebrae(curves[i], curves[j]) <= 1) continue;
                const size_t victim =
                    curves[j].cobb_deg > curves[i].cobb_deg ? i : j;
                curves.erase(curves.begin() + static_cast<long>(victim));
                changed = true;
            }
        }
        if (changed) continue;

        // Merge consecutive same-direction curves; the merged Cobb is
        // re-read from the angle matrix, and the threshold re-applies.
        for (size_t i = 0; !changed && i + 1 < curves.size(); ++i) {
            if (curves[i].direction != curves[i + 1].direction) continue;
            const int u = curves[i].upper_ev.index();
            const int l = curves[i + 1].lower_ev.index();
            curves.erase(curves.begin() + static_cast<long>(i),
                         curves.begin() + static_cast<long>(i) + 2);
            if (std::abs(am.gamma_at(u, l)) >= cfg.gamma_threshold_deg)
                curves.insert(curves.begin() + static_cast<long>(i), make_curve(u, l, am));
            changed = true;
        }
        if (changed) sort_curves(curves);
    }
    return curves;
}

double vwi(VertebraId upper_ev, VertebraId lower_ev, const Spine& spine) {
    const int s = upper_ev.index();
    const int e = lower_ev.index();
    if (s > e) throw SpineValidation("vwi: upper end vertebra below lower end vertebra");
    double sum = 0.0;
    for (int i = s; i <= e; ++i) {
        const Vertebra& v = spine.at(i);
        sum += std::abs(v.upper.angle_deg - v.lower.angle_deg);
    }
    return sum / (e - s + 1);
}

ConstraintReport constraint_violation(const Spine& spine, double eps_deg) {
    if (eps_deg < 0.0) throw Error("constraint_violation: eps_deg must be >= 0");
    ConstraintReport report;
    std::array<Point2, kNumVertebrae> centers;
    for (int i = 0; i < kNumVertebrae; ++i)
        centers[static_cast<size_t>(i)] = vertebra_center(spine.at(i + 1));

    for (int i = 2; i <= kNumVertebrae - 1; ++i) {
        const double beta_up = directional_angle(centers[static_cast<size_t>(i - 2)],
                                                 centers[static_cast<size_t>(i - 1)]);
        const double beta_down = directional_angle(centers[static_cast<size_t>(i - 1)],
                                                   centers[static_cast<size_t>(i)]);
        const double beta_mean = (beta_up + beta_down) / 2.0;
        const double deviation = std::abs(mean_tilt(spine.at(i)) - beta_mean);
        if (deviation > eps_deg) {
            report.score_deg += deviation;
            report.violations.push_back(ConstraintViolation{VertebraId(i), deviation});
        }
    }
    return report;
}

CurveReport diagnose(const Spine& spine, const DiagnosisConfig& cfg) {
    CurveReport report;
    report.case_id = spine.case_id();

    const AngleMatrix am = build_angle_matrix(spine);
    report.pc1 = pc1_scores(am);

    // The pairwise-difference matrix is rank <= 2 by construction; more
    // surviving singular values means the decomposition degraded.
    if (!report.pc1.sigma.empty() && report.pc1.sigma.front() > 0.0) {
        int rank = 0;
        for (double s : report.pc1.sigma)
            if (s > cfg.svd_rank_tol * report.pc1.sigma.front()) ++rank;
        if (rank > 2)
            throw Error("diagnose: angle matrix decomposition exceeded rank 2 (numerical rank " +
                        std::to_string(rank) + ")");
    }

    report.extrema = detect_extrema(report.pc1, cfg);
    report.curves = postprocess_curves(identify_curves(report.extrema, am, cfg), am, cfg);

    report.max_cobb_deg = 0.0;
    for (const Curve& c : report.curves)
        report.max_cobb_deg = std::max(report.max_cobb_deg, c.cobb_deg);
    report.severity = classify_severity(report.max_cobb_deg, cfg);
    report.constraint_score_deg = constraint_violation(spine, cfg.constraint_eps_deg).score_deg;
    return report;
}

} // namespace spinecurve
