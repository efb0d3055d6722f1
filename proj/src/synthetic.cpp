#include "spinecurve/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "spinecurve/rng.hpp"

namespace spinecurve {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

// How far the head/tail/gap segments ease off the end-vertebra tilt.
// Must stay below the clinical threshold so the eased segments never
// register as curves, while keeping planted end vertebrae strict extrema
// that survive landmark noise.
constexpr double kRelaxDeg = 6.0;
constexpr int kRelaxSharpness = 1; // steps from an end vertebra to full offset

// Tilt overshoot of the lone interior vertebra of a two-level gap; kept
// well under the 0.5 degree Cobb recovery tolerance.
constexpr double kGapNudgeDeg = 0.35;

constexpr double kMaxAngleDeg = 89.0;

double curve_sign(const CurveSpec& c) {
    return c.direction == CurveDirection::Right ? 1.0 : -1.0;
}

// Fraction of the relaxation offset at distance k from an end vertebra:
// quadratic ease (zero slope at the end vertebra), holding beyond
// kRelaxSharpness steps.
double relax_ease(int k) {
    const int m = std::min(k, kRelaxSharpness);
    return static_cast<double>(m * m) / (kRelaxSharpness * kRelaxSharpness);
}

struct TiltProfile {
    std::array<double, kNumVertebrae> tilt{};  // mean tilt per vertebra
    std::array<double, kNumVertebrae> slope{}; // analytic d(tilt)/d(index)
};

// Piecewise profile. Inside each curve the tilt follows a half-cosine
// ramp between the end-vertebra tilts, so the angular increment is zero
// at the end vertebrae and peaks at the apex. Head, tail and gap
// segments ease away from the end-vertebra tilt on the side opposite its
// extremal kind, keeping every planted end vertebra a strict extremum;
// those segments carry no wedge (slope 0).
TiltProfile build_profile(const std::vector<CurveSpec>& curves) {
    TiltProfile p;
    if (curves.empty()) return p;

    const size_t k = curves.size();
    std::vector<double> partial(k + 1, 0.0); // tilt offsets at curve ends
    for (size_t c = 0; c < k; ++c)
        partial[c + 1] = partial[c] - curve_sign(curves[c]) * curves[c].cobb_deg;
    const double hi = *std::max_element(partial.begin(), partial.end());
    const double lo = *std::min_element(partial.begin(), partial.end());
    const double base = -(hi + lo) / 2.0; // center the tilt range on zero

    auto ev_tilt = [&](size_t boundary) { return base + partial[boundary]; };

    auto set_curve_ramp = [&](int from, int to, double t_from, double t_to) {
        const double span = to - from;
        for (int i = from; i <= to; ++i) {
            const size_t idx = static_cast<size_t>(i - 1);
            if (i == from || i == to) {
                p.tilt[idx] = i == from ? t_from : t_to;
                p.slope[idx] = 0.0;
            } else {
                const double x = (i - from) / span;
                p.tilt[idx] = t_from + (t_to - t_from) * (1.0 - std::cos(M_PI * x)) / 2.0;
                p.slope[idx] = (t_to - t_from) * M_PI / (2.0 * span) * std::sin(M_PI * x);
            }
        }
    };

    // Head: drop away from the first end vertebra.
    const int first_ev = curves.front().upper_ev.index();
    const double head_offset = curve_sign(curves.front()) * kRelaxDeg;
    for (int i = 1; i < first_ev; ++i)
        p.tilt[static_cast<size_t>(i - 1)] = ev_tilt(0) - head_offset * relax_ease(first_ev - i);

    for (size_t c = 0; c < k; ++c) {
        set_curve_ramp(curves[c].upper_ev.index(), curves[c].lower_ev.index(),
                       ev_tilt(c), ev_tilt(c + 1));
        if (c + 1 < k) {
            // Gap: bump away from the shared extremal kind of the two
            // flanking end vertebrae so both stay strict extrema.
            const int gap_from = curves[c].lower_ev.index();
            const int gap_to = curves[c + 1].upper_ev.index();
            const double bump = curve_sign(curves[c]) * kRelaxDeg;
            if (gap_to - gap_from == 2) {
                // Both flanks sit inside each other's detection window, so
                // they cannot both qualify as extrema. Nudge the single
                // interior vertebra just past them instead: detection then
                // lands on it, within one level of both planted end
                // vertebrae and within a sub-tolerance Cobb shift.
                p.tilt[static_cast<size_t>(gap_from)] =
                    ev_tilt(c + 1) - curve_sign(curves[c]) * kGapNudgeDeg;
            } else {
                for (int i = gap_from + 1; i < gap_to; ++i)
                    p.tilt[static_cast<size_t>(i - 1)] =
                        ev_tilt(c + 1) + bump * relax_ease(std::min(i - gap_from, gap_to - i));
            }
        }
    }

    // Tail: move away from the last end vertebra.
    const int last_ev = curves.back().lower_ev.index();
    const double tail_offset = curve_sign(curves.back()) * kRelaxDeg;
    for (int i = last_ev + 1; i <= kNumVertebrae; ++i)
        p.tilt[static_cast<size_t>(i - 1)] = ev_tilt(k) + tail_offset * relax_ease(i - last_ev);
    return p;
}

void validate_spec(const SpineSpec& spec) {
    if (spec.vertebra_height_px <= 0.0 || spec.disc_height_px <= 0.0 ||
        spec.vertebra_width_px <= 0.0)
        throw InfeasibleSpec("spine geometry dimensions must be positive");
    if (spec.noise_deg < 0.0 || spec.noise_px < 0.0)
        throw InfeasibleSpec("noise magnitudes must be non-negative");
    for (size_t c = 0; c < spec.curves.size(); ++c) {
        const CurveSpec& cur = spec.curves[c];
        if (cur.upper_ev.index() >= cur.lower_ev.index())
            throw InfeasibleSpec("curve upper end vertebra must be cranial to the lower");
        if (cur.lower_ev.index() > 17)
            throw InfeasibleSpec("L5 cannot be a curve end vertebra");
        if (!(cur.cobb_deg > 0.0))
            throw InfeasibleSpec("curve magnitude must be positive");
        if (cur.wedge_fraction < 0.0 || cur.wedge_fraction > 1.0)
            throw InfeasibleSpec("wedge_fraction must lie in [0, 1]");
        if (c > 0) {
            if (cur.upper_ev.index() < spec.curves[c - 1].lower_ev.index())
                throw InfeasibleSpec("curves overlap beyond a shared boundary vertebra");
            if (cur.direction == spec.curves[c - 1].direction)
                throw InfeasibleSpec("adjacent curves must alternate direction");
        }
    }
}

// Wedge fraction governing vertebra i: the curve containing it, else the
// nearest curve for head/gap/tail segments.
double wedge_fraction_at(int index, const std::vector<CurveSpec>& curves) {
    if (curves.empty()) return 0.0;
    for (const CurveSpec& c : curves) {
        if (index < c.upper_ev.index()) return c.wedge_fraction;
        if (index <= c.lower_ev.index()) return c.wedge_fraction;
    }
    return curves.back().wedge_fraction;
}

Point2 rotate_about(const Point2& p, const Point2& pivot, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    const double dx = p.x - pivot.x;
    const double dy = p.y - pivot.y;
    return {pivot.x + c * dx - s * dy, pivot.y + s * dx + c * dy};
}

} // namespace

GeneratedCase generate(const SpineSpec& spec) {
    validate_spec(spec);
    const TiltProfile profile = build_profile(spec.curves);

    std::array<double, kNumVertebrae> theta_upper{};
    std::array<double, kNumVertebrae> theta_lower{};
    for (int i = 1; i <= kNumVertebrae; ++i) {
        const size_t idx = static_cast<size_t>(i - 1);
        const double wedge = wedge_fraction_at(i, spec.curves) * profile.slope[idx];
        theta_upper[idx] = profile.tilt[idx] - wedge / 2.0;
        theta_lower[idx] = profile.tilt[idx] + wedge / 2.0;
        if (std::abs(theta_upper[idx]) > kMaxAngleDeg || std::abs(theta_lower[idx]) > kMaxAngleDeg)
            throw InfeasibleSpec("requested curves drive endplate angles beyond +/-89 degrees");
    }

    // Segment directions chosen so each interior vertebra's mean tilt
    // equals the mean of the directional angles to its neighbors.
    std::array<double, kNumVertebrae - 1> seg{};
    seg[0] = (profile.tilt[0] + profile.tilt[1]) / 2.0;
    for (int i = 1; i < kNumVertebrae - 1; ++i)
        seg[static_cast<size_t>(i)] =
            2.0 * profile.tilt[static_cast<size_t>(i)] - seg[static_cast<size_t>(i - 1)];
    for (double b : seg)
        if (std::abs(b) > kMaxAngleDeg)
            throw InfeasibleSpec("requested curves drive the centerline beyond +/-89 degrees");

    const double step = spec.vertebra_height_px + spec.disc_height_px;
    std::array<Point2, kNumVertebrae> centers{};
    centers[0] = {800.0, 80.0};
    for (int i = 1; i < kNumVertebrae; ++i) {
        const double b = seg[static_cast<size_t>(i - 1)] * kDegToRad;
        centers[static_cast<size_t>(i)] = {centers[static_cast<size_t>(i - 1)].x + step * std::sin(b),
                                           centers[static_cast<size_t>(i - 1)].y + step * std::cos(b)};
    }

    const double half_h = spec.vertebra_height_px / 2.0;
    const double half_w = spec.vertebra_width_px / 2.0;
    Rng rng(spec.seed);

    std::vector<Vertebra> vertebrae;
    vertebrae.reserve(kNumVertebrae);
    for (int i = 0; i < kNumVertebrae; ++i) {
        const size_t idx = static_cast<size_t>(i);
        const double axis = profile.tilt[idx] * kDegToRad; // body axis from vertical
        const Point2 c = centers[idx];
        const Point2 upper_mid{c.x - half_h * std::sin(axis), c.y - half_h * std::cos(axis)};
        const Point2 lower_mid{c.x + half_h * std::sin(axis), c.y + half_h * std::cos(axis)};

        auto corner_pair = [&](const Point2& mid, double angle_deg) {
            const double a = angle_deg * kDegToRad;
            const Point2 dir{std::cos(a), std::sin(a)};
            return std::pair<Point2, Point2>{{mid.x - half_w * dir.x, mid.y - half_w * dir.y},
                                             {mid.x + half_w * dir.x, mid.y + half_w * dir.y}};
        };
        auto [ul, ur] = corner_pair(upper_mid, theta_upper[idx]);
        auto [ll, lr] = corner_pair(lower_mid, theta_lower[idx]);

        if (spec.noise_deg > 0.0) {
            const double du = rng.normal(0.0, spec.noise_deg) * kDegToRad;
            const double dl = rng.normal(0.0, spec.noise_deg) * kDegToRad;
            ul = rotate_about(ul, upper_mid, du);
            ur = rotate_about(ur, upper_mid, du);
            ll = rotate_about(ll, lower_mid, dl);
            lr = rotate_about(lr, lower_mid, dl);
        }
        if (spec.noise_px > 0.0) {
            for (Point2* pt : {&ul, &ur, &ll, &lr}) {
                pt->x += rng.normal(0.0, spec.noise_px);
                pt->y += rng.normal(0.0, spec.noise_px);
            }
        }

        Vertebra v;
        v.id = VertebraId(i + 1);
        v.upper = corners_to_endplate(ul, ur);
        v.lower = corners_to_endplate(ll, lr);
        v.corners = Corners{ul, ur, ll, lr};
        vertebrae.push_back(v);
    }

    double max_x = 0.0;
    double max_y = 0.0;
    for (const Vertebra& v : vertebrae) {
        for (const Point2& pt : {v.corners->ul, v.corners->ur, v.corners->ll, v.corners->lr}) {
            max_x = std::max(max_x, pt.x);
            max_y = std::max(max_y, pt.y);
        }
    }

    GeneratedCase out{
        Spine(spec.case_id, std::move(vertebrae),
              std::make_pair(std::ceil(max_x + 80.0), std::ceil(max_y + 80.0))),
        CurveReport{}};

    out.ground_truth.case_id = spec.case_id;
    for (const CurveSpec& c : spec.curves) {
        Curve curve;
        curve.upper_ev = c.upper_ev;
        curve.lower_ev = c.lower_ev;
        curve.direction = c.direction;
        curve.cobb_deg = c.cobb_deg;
        double wedge_sum = 0.0;
        for (int i = c.upper_ev.index(); i <= c.lower_ev.index(); ++i)
            wedge_sum += std::abs(theta_upper[static_cast<size_t>(i - 1)] -
                                  theta_lower[static_cast<size_t>(i - 1)]);
        curve.vwi_deg = wedge_sum / (c.lower_ev.index() - c.upper_ev.index() + 1);
        out.ground_truth.curves.push_back(curve);
        out.ground_truth.max_cobb_deg = std::max(out.ground_truth.max_cobb_deg, c.cobb_deg);
    }
    out.ground_truth.severity = classify_severity(out.ground_truth.max_cobb_deg);
    return out;
}

std::vector<CohortRow> generate_cohort(int n_patients, double planted_r, uint64_t seed) {
    if (n_patients < 1) throw Error("generate_cohort: need at least one patient");
    if (!(std::abs(planted_r) < 1.0))
        throw Error("generate_cohort: |planted_r| must be < 1");

    Rng rng(seed);
    std::vector<CohortRow> rows;
    rows.reserve(static_cast<size_t>(n_patients) * 2);
    const double residual = std::sqrt(1.0 - planted_r * planted_r);
    for (int p = 0; p < n_patients; ++p) {
        char id[32];
        std::snprintf(id, sizeof(id), "cohort-%04d", p + 1);
        const double z_vwi = rng.normal();
        const double z_prog = planted_r * z_vwi + residual * rng.normal();
        const double vwi0 = std::max(0.05, 4.5 + 1.5 * z_vwi);
        const double progression = 3.0 + 5.0 * z_prog;
        const double cobb0 = std::max(5.0, 25.0 + 10.0 * rng.normal());
        const int risser = rng.uniform_int(0, 5);
        const double vwi1 = std::max(0.05, vwi0 + 0.25 * rng.normal());
        const int risser1 = std::min(5, risser + (rng.uniform() < 0.3 ? 1 : 0));

        rows.push_back(CohortRow{id, "2024-01-15", vwi0, risser, cobb0});
        rows.push_back(CohortRow{id, "2024-07-15", vwi1, risser1, cobb0 + progression});
    }
    return rows;
}

} // namespace spinecurve
