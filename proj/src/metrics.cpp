#include "spinecurve/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace spinecurve {

namespace {

bool within_one_level(const Curve& pred, const Curve& gt) {
    return std::abs(pred.upper_ev.index() - gt.upper_ev.index()) <= 1 &&
           std::abs(pred.lower_ev.index() - gt.lower_ev.index()) <= 1;
}

std::vector<Curve> sorted_cranial(std::vector<Curve> curves) {
    std::sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) {
        if (a.upper_ev.index() != b.upper_ev.index())
            return a.upper_ev.index() < b.upper_ev.index();
        return a.lower_ev.index() < b.lower_ev.index();
    });
    return curves;
}

// Greedy cranial-first one-to-one matching; returns the detected count.
int match_curves(const std::vector<Curve>& gt, const std::vector<Curve>& pred) {
    std::vector<bool> used(pred.size(), false);
    int detected = 0;
    for (const Curve& g : gt) {
        for (size_t j = 0; j < pred.size(); ++j) {
            if (used[j] || !within_one_level(pred[j], g)) continue;
            used[j] = true;
            ++detected;
            break;
        }
    }
    return detected;
}

int severity_bucket(Severity s) {
    switch (s) {
        case Severity::NormalMild: return 0;
        case Severity::Moderate: return 1;
        case Severity::Severe: return 2;
    }
    return 0;
}

// Regularized incomplete beta I_x(a, b) by the Lentz continued fraction.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-15;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// Two-sided tail probability of Student-t with nu degrees of freedom.
double student_t_two_sided(double t, double nu) {
    return incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

void require_nonempty(std::span<const CasePair> pairs, const char* op) {
    if (pairs.empty()) throw EmptySet(std::string(op) + ": no case pairs");
}

} // namespace

double mmae(std::span<const CasePair> pairs) {
    require_nonempty(pairs, "mmae");
    double sum = 0.0;
    for (const CasePair& p : pairs) sum += std::abs(p.pred.max_cobb_deg - p.gt.max_cobb_deg);
    return sum / static_cast<double>(pairs.size());
}

double diagnostic_accuracy(std::span<const CasePair> pairs) {
    require_nonempty(pairs, "diagnostic_accuracy");
    int matches = 0;
    for (const CasePair& p : pairs)
        if (p.pred.severity == p.gt.severity) ++matches;
    return 100.0 * matches / static_cast<double>(pairs.size());
}

double curve_detection_rate(std::span<const CasePair> pairs) {
    int total = 0;
    int detected = 0;
    for (const CasePair& p : pairs) {
        total += static_cast<int>(p.gt.curves.size());
        detected += match_curves(sorted_cranial(p.gt.curves), sorted_cranial(p.pred.curves));
    }
    if (total == 0) throw NoGtCurves("curve_detection_rate: no ground-truth curves");
    return 100.0 * detected / static_cast<double>(total);
}

double false_detection_rate(std::span<const CasePair> pairs) {
    int total = 0;
    int false_count = 0;
    for (const CasePair& p : pairs) {
        total += static_cast<int>(p.pred.curves.size());
        for (const Curve& pred : p.pred.curves) {
            bool near_any = false;
            for (const Curve& gt : p.gt.curves)
                if (within_one_level(pred, gt)) {
                    near_any = true;
                    break;
                }
            if (!near_any) ++false_count;
        }
    }
    if (total == 0) throw NoPredCurves("false_detection_rate: no predicted curves");
    return 100.0 * false_count / static_cast<double>(total);
}

double mean_position_error(std::span<const CasePair> pairs) {
    require_nonempty(pairs, "mean_position_error");
    double sum = 0.0;
    for (const CasePair& p : pairs) {
        for (int i = 1; i <= kNumVertebrae; ++i) {
            sum += distance(p.pred_spine.at(i).upper.midpoint, p.gt_spine.at(i).upper.midpoint);
            sum += distance(p.pred_spine.at(i).lower.midpoint, p.gt_spine.at(i).lower.midpoint);
        }
    }
    return sum / (2.0 * kNumVertebrae * static_cast<double>(pairs.size()));
}

double mean_angle_error(std::span<const CasePair> pairs) {
    require_nonempty(pairs, "mean_angle_error");
    double sum = 0.0;
    for (const CasePair& p : pairs) {
        for (int i = 1; i <= kNumVertebrae; ++i) {
            sum += std::abs(p.pred_spine.at(i).upper.angle_deg - p.gt_spine.at(i).upper.angle_deg);
            sum += std::abs(p.pred_spine.at(i).lower.angle_deg - p.gt_spine.at(i).lower.angle_deg);
        }
    }
    return sum / (2.0 * kNumVertebrae * static_cast<double>(pairs.size()));
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw LengthMismatch("pearson: series lengths differ");
    const size_t n = x.size();
    if (n < 3) throw TooFewPoints("pearson: need at least 3 points");

    double mean_x = 0.0;
    double mean_y = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ConstantSeries("pearson: a series is constant");

    Correlation out;
    out.r = sxy / std::sqrt(sxx * syy);
    out.r = std::clamp(out.r, -1.0, 1.0);
    const double nu = static_cast<double>(n) - 2.0;
    const double denom = 1.0 - out.r * out.r;
    if (denom <= 0.0) {
        out.p = 0.0;
        return out;
    }
    const double t = out.r * std::sqrt(nu / denom);
    out.p = student_t_two_sided(t, nu);
    return out;
}

EvalReport evaluate_cases(std::span<const CasePair> pairs) {
    require_nonempty(pairs, "evaluate_cases");
    EvalReport report;
    report.n_cases = static_cast<int>(pairs.size());
    for (const CasePair& p : pairs) {
        report.n_gt_curves += static_cast<int>(p.gt.curves.size());
        report.n_pred_curves += static_cast<int>(p.pred.curves.size());
        ++report.confusion[static_cast<size_t>(severity_bucket(p.gt.severity))]
                          [static_cast<size_t>(severity_bucket(p.pred.severity))];
    }
    report.mmae_deg = mmae(pairs);
    report.da_pct = diagnostic_accuracy(pairs);
    report.cdr_pct = curve_detection_rate(pairs);
    report.fdr_pct = false_detection_rate(pairs);
    report.mpe_px = mean_position_error(pairs);
    report.mae_deg = mean_angle_error(pairs);
    return report;
}

} // namespace spinecurve
