#include <doctest.h>

#include <cmath>

#include "spinecurve/diagnosis.hpp"
#include "spinecurve/rng.hpp"
#include "test_helpers.hpp"

using namespace spinecurve;
using spinecurve::testing::spine_from_angles;
using spinecurve::testing::straight_spine;

namespace {

Pc1Scores scores_of(const std::array<double, kNumVertebrae>& values) {
    Pc1Scores pc1;
    pc1.scores = values;
    return pc1;
}

bool has_extremum(const std::vector<Extremum>& ex, const char* label, ExtremumKind kind) {
    for (const Extremum& e : ex)
        if (e.vertebra.label() == label && e.kind == kind) return true;
    return false;
}

} // namespace

TEST_CASE("detect_extrema: flat score vectors yield nothing") {
    CHECK(detect_extrema(scores_of({})).empty());
    std::array<double, kNumVertebrae> constant{};
    constant.fill(3.5);
    CHECK(detect_extrema(scores_of(constant)).empty());
}

TEST_CASE("detect_extrema: single peak triangle") {
    // Monotone up to T8 (index 9), down after: the peak plus the two
    // eligible boundary vertebrae qualify.
    std::array<double, kNumVertebrae> s{};
    for (int i = 1; i <= kNumVertebrae; ++i) {
        const int peak = 9;
        s[static_cast<size_t>(i - 1)] = i <= peak ? i : 2 * peak - i;
    }
    const std::vector<Extremum> ex = detect_extrema(scores_of(s));
    REQUIRE(ex.size() == 3);
    CHECK(ex[0].vertebra.label() == "C7");
    CHECK(ex[0].kind == ExtremumKind::Min);
    CHECK(ex[1].vertebra.label() == "T8");
    CHECK(ex[1].kind == ExtremumKind::Max);
    CHECK(ex[2].vertebra.label() == "L4");
    CHECK(ex[2].kind == ExtremumKind::Min);
}

TEST_CASE("detect_extrema: plateau collapses to the cranial vertebra") {
    std::array<double, kNumVertebrae> s{};
    for (int i = 1; i <= 6; ++i) s[static_cast<size_t>(i - 1)] = i - 1; // up to T5
    s[6] = 5.0;                                                        // T6 equal to T5
    for (int i = 8; i <= kNumVertebrae; ++i) s[static_cast<size_t>(i - 1)] = 12.0 - i;
    const std::vector<Extremum> ex = detect_extrema(scores_of(s));
    CHECK(has_extremum(ex, "T5", ExtremumKind::Max));
    for (const Extremum& e : ex) CHECK(e.vertebra.label() != "T6");
}

TEST_CASE("detect_extrema: L5 is never a candidate") {
    // Strictly increasing scores: the caudal boundary extremum lands on
    // L4, never L5.
    std::array<double, kNumVertebrae> s{};
    for (int i = 0; i < kNumVertebrae; ++i) s[static_cast<size_t>(i)] = i;
    const std::vector<Extremum> ex = detect_extrema(scores_of(s));
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].vertebra.label() == "C7");
    CHECK(ex[0].kind == ExtremumKind::Min);
    CHECK(ex[1].vertebra.label() == "L4");
    CHECK(ex[1].kind == ExtremumKind::Max);
}

TEST_CASE("detect_extrema: relaxed lumbar window") {
    std::array<double, kNumVertebrae> s{};
    s[12] = 4.0; // T12
    s[13] = 5.0; // L1
    s[14] = 1.0; // L2
    s[15] = 2.0; // L3: a peak within +/-1 but not +/-2 (L1 is higher)
    s[16] = 1.5; // L4
    const std::vector<Extremum> ex = detect_extrema(scores_of(s));
    CHECK(has_extremum(ex, "T10", ExtremumKind::Min)); // zero plateau boundary, collapsed
    CHECK(has_extremum(ex, "L1", ExtremumKind::Max));
    CHECK(has_extremum(ex, "L2", ExtremumKind::Min));
    CHECK(has_extremum(ex, "L3", ExtremumKind::Max));

    // With the relaxed window widened to 2, L3 loses to L1.
    DiagnosisConfig cfg;
    cfg.lumbar_relaxed_window = 2;
    const std::vector<Extremum> strict = detect_extrema(scores_of(s), cfg);
    for (const Extremum& e : strict) CHECK(e.vertebra.label() != "L3");
}

TEST_CASE("identify_curves: threshold, direction, and the L4 fallback") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    upper[6] = 11.65;   // T6 upper
    lower[12] = -11.65; // T12 lower: gamma(T6, T12) = 23.3
    upper[12] = 10.0;   // T12 upper
    lower[16] = -15.7;  // L4 lower: gamma(T12, L4) = 25.7
    const AngleMatrix am = build_angle_matrix(spine_from_angles(upper, lower));

    std::vector<Extremum> extrema{{VertebraId::from_label("T6"), ExtremumKind::Max, 1.0},
                                  {VertebraId::from_label("T12"), ExtremumKind::Min, -1.0}};

    SUBCASE("adjacent opposite extrema with the fallback appended") {
        const std::vector<Curve> curves = identify_curves(extrema, am);
        REQUIRE(curves.size() == 2);
        CHECK(curves[0].upper_ev.label() == "T6");
        CHECK(curves[0].lower_ev.label() == "T12");
        CHECK(curves[0].direction == CurveDirection::Right);
        CHECK(curves[0].cobb_deg == doctest::Approx(23.3).epsilon(1e-12));
        CHECK(curves[1].upper_ev.label() == "T12");
        CHECK(curves[1].lower_ev.label() == "L4");
        CHECK(curves[1].direction == CurveDirection::Right);
        CHECK(curves[1].cobb_deg == doctest::Approx(25.7).epsilon(1e-12));
    }

    SUBCASE("same-kind neighbors never pair") {
        std::vector<Extremum> same{{VertebraId::from_label("T6"), ExtremumKind::Max, 1.0},
                                   {VertebraId::from_label("T12"), ExtremumKind::Max, 0.8}};
        const std::vector<Curve> curves = identify_curves(same, am);
        REQUIRE(curves.size() == 1); // only the fallback survives
        CHECK(curves[0].upper_ev.label() == "T12");
    }

    SUBCASE("no fallback when an extremum lies below L1") {
        std::vector<Extremum> low{{VertebraId::from_label("T6"), ExtremumKind::Max, 1.0},
                                  {VertebraId::from_label("L2"), ExtremumKind::Min, -1.0}};
        // gamma(T6, L2) = 11.65, above threshold; nothing may extend to L4.
        lower[14] = -0.0;
        const std::vector<Curve> curves = identify_curves(low, am);
        REQUIRE(curves.size() == 1);
        CHECK(curves[0].lower_ev.label() == "L2");
    }
}

TEST_CASE("identify_curves: strict threshold boundary") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    upper[4] = 4.99;
    lower[10] = -4.91; // gamma = 9.9
    const AngleMatrix below = build_angle_matrix(spine_from_angles(upper, lower));
    std::vector<Extremum> extrema{{VertebraId(5), ExtremumKind::Max, 1.0},
                                  {VertebraId(11), ExtremumKind::Min, -1.0}};
    CHECK(identify_curves(extrema, below).empty());

    upper[4] = 5.0;
    lower[10] = -5.0; // gamma = 10.0 exactly
    const AngleMatrix at = build_angle_matrix(spine_from_angles(upper, lower));
    const std::vector<Curve> curves = identify_curves(extrema, at);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].cobb_deg == doctest::Approx(10.0));
}

TEST_CASE("identify_curves: negative gamma means a left curve") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    upper[4] = -12.5;
    lower[10] = 12.5; // gamma = -25
    const AngleMatrix am = build_angle_matrix(spine_from_angles(upper, lower));
    std::vector<Extremum> extrema{{VertebraId(5), ExtremumKind::Min, -1.0},
                                  {VertebraId(11), ExtremumKind::Max, 1.0}};
    const std::vector<Curve> curves = identify_curves(extrema, am);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].direction == CurveDirection::Left);
    CHECK(curves[0].cobb_deg == doctest::Approx(25.0));
}

TEST_CASE("postprocess_curves: same-direction neighbors merge") {
    // T2-T6 at 12 deg right and T6-T10 at 11 deg right merge into T2-T10
    // with the Cobb re-read from the matrix.
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    upper[2] = 6.0;   // T2 upper
    lower[6] = -6.0;  // T6 lower
    upper[6] = 5.0;   // T6 upper
    lower[10] = -6.0; // T10 lower
    const AngleMatrix am = build_angle_matrix(spine_from_angles(upper, lower));
    std::vector<Curve> curves;
    {
        Curve a;
        a.upper_ev = VertebraId::from_label("T2");
        a.lower_ev = VertebraId::from_label("T6");
        a.direction = CurveDirection::Right;
        a.cobb_deg = 12.0;
        Curve b;
        b.upper_ev = VertebraId::from_label("T6");
        b.lower_ev = VertebraId::from_label("T10");
        b.direction = CurveDirection::Right;
        b.cobb_deg = 11.0;
        curves = {a, b};
    }
    const std::vector<Curve> out = postprocess_curves(curves, am);
    REQUIRE(out.size() == 1);
    CHECK(out[0].upper_ev.label() == "T2");
    CHECK(out[0].lower_ev.label() == "T10");
    CHECK(out[0].cobb_deg == doctest::Approx(12.0)); // gamma(T2, T10) = 6 - (-6)
    CHECK(out[0].direction == CurveDirection::Right);
}

TEST_CASE("postprocess_curves: heavy overlap drops the smaller curve") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    upper[5] = 7.5;   // T5
    lower[10] = -7.5; // T10: gamma(T5,T10) = 15
    upper[7] = 6.0;   // T7
    lower[12] = -6.0; // T12: gamma(T7,T12) = 12
    const AngleMatrix am = build_angle_matrix(spine_from_angles(upper, lower));
    std::vector<Curve> curves;
    {
        Curve a;
        a.upper_ev = VertebraId::from_label("T5");
        a.lower_ev = VertebraId::from_label("T10");
        a.direction = CurveDirection::Right;
        a.cobb_deg = 15.0;
        Curve b;
        b.upper_ev = VertebraId::from_label("T7");
        b.lower_ev = VertebraId::from_label("T12");
        b.direction = CurveDirection::Right;
        b.cobb_deg = 12.0;
        curves = {a, b};
    }
    const std::vector<Curve> out = postprocess_curves(curves, am);
    REQUIRE(out.size() == 1);
    CHECK(out[0].upper_ev.label() == "T5");
    CHECK(out[0].lower_ev.label() == "T10");
    CHECK(out[0].cobb_deg == doctest::Approx(15.0));
}

TEST_CASE("postprocess_curves: alternating pattern is a fixpoint") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    upper[1] = 6.0;
    lower[5] = -6.0; // T1-T5 right 12
    upper[5] = -7.0;
    lower[9] = 7.0; // T5-T9 left 14
    upper[9] = 5.5;
    lower[13] = -5.5; // T9-L1 right 11
    const AngleMatrix am = build_angle_matrix(spine_from_angles(upper, lower));
    std::vector<Curve> curves;
    for (int k = 0; k < 3; ++k) {
        Curve c;
        c.upper_ev = VertebraId(2 + 4 * k);
        c.lower_ev = VertebraId(6 + 4 * k);
        c.direction = k == 1 ? CurveDirection::Left : CurveDirection::Right;
        c.cobb_deg = std::abs(am.gamma_at(c.upper_ev.index(), c.lower_ev.index()));
        curves.push_back(c);
    }
    const std::vector<Curve> out = postprocess_curves(curves, am);
    REQUIRE(out.size() == 3);
    for (size_t i = 0; i + 1 < out.size(); ++i)
        CHECK(out[i].direction != out[i + 1].direction);
}

TEST_CASE("vwi") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    SUBCASE("parallel endplates give zero") {
        const Spine s = spine_from_angles(upper, lower);
        CHECK(vwi(VertebraId(5), VertebraId(11), s) == 0.0);
    }
    SUBCASE("constant 2 degree wedge gives exactly 2") {
        for (int i = 0; i < kNumVertebrae; ++i) {
            upper[static_cast<size_t>(i)] = -1.0;
            lower[static_cast<size_t>(i)] = 1.0;
        }
        const Spine s = spine_from_angles(upper, lower);
        CHECK(vwi(VertebraId(5), VertebraId(11), s) == 2.0);
    }
    SUBCASE("distinguishes structurally different spines with similar Cobb") {
        for (int i = 4; i <= 10; ++i) {
            upper[static_cast<size_t>(i)] = -0.75;
            lower[static_cast<size_t>(i)] = 0.75;
        }
        const Spine mild_wedging = spine_from_angles(upper, lower, "low-vwi");
        for (int i = 4; i <= 10; ++i) {
            upper[static_cast<size_t>(i)] = -3.65;
            lower[static_cast<size_t>(i)] = 3.65;
        }
        const Spine heavy_wedging = spine_from_angles(upper, lower, "high-vwi");
        CHECK(vwi(VertebraId(5), VertebraId(11), mild_wedging) == doctest::Approx(1.5));
        CHECK(vwi(VertebraId(5), VertebraId(11), heavy_wedging) == doctest::Approx(7.3));
    }
}

TEST_CASE("severity classification boundaries") {
    CHECK(classify_severity(0.0) == Severity::NormalMild);
    CHECK(classify_severity(19.999) == Severity::NormalMild);
    CHECK(classify_severity(20.0) == Severity::Moderate);
    CHECK(classify_severity(39.999) == Severity::Moderate);
    CHECK(classify_severity(40.0) == Severity::Severe);
    CHECK(classify_severity(38.8) == Severity::Moderate);
}

TEST_CASE("constraint_violation") {
    SUBCASE("straight spine is coherent") {
        const ConstraintReport r = constraint_violation(straight_spine(), 5.0);
        CHECK(r.score_deg == 0.0);
        CHECK(r.violations.empty());
    }
    SUBCASE("infinite tolerance never fires") {
        std::array<double, kNumVertebrae> upper{};
        upper.fill(45.0);
        const ConstraintReport r = constraint_violation(
            spine_from_angles(upper, upper), std::numeric_limits<double>::infinity());
        CHECK(r.score_deg == 0.0);
    }
    SUBCASE("tilt far from the centerline direction is flagged") {
        std::array<double, kNumVertebrae> angles{};
        angles[8] = 20.0; // T8 tilted 20 deg on a vertical centerline
        const ConstraintReport r = constraint_violation(spine_from_angles(angles, angles), 5.0);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].vertebra.label() == "T8");
        CHECK(r.violations[0].deviation_deg == doctest::Approx(20.0));
        CHECK(r.score_deg == doctest::Approx(20.0));
    }
}

TEST_CASE("diagnose: straight spine reports nothing") {
    const CurveReport r = diagnose(straight_spine());
    CHECK(r.curves.empty());
    CHECK(r.max_cobb_deg == 0.0);
    CHECK(r.severity == Severity::NormalMild);
    CHECK(r.extrema.empty());
    CHECK(r.constraint_score_deg == 0.0);
}

TEST_CASE("diagnose is deterministic") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    for (int i = 0; i < kNumVertebrae; ++i) {
        upper[static_cast<size_t>(i)] = std::sin(i * 0.7) * 20.0;
        lower[static_cast<size_t>(i)] = std::sin(i * 0.7 + 0.2) * 20.0;
    }
    const Spine spine = spine_from_angles(upper, lower, "det");
    const CurveReport a = diagnose(spine);
    const CurveReport b = diagnose(spine);
    REQUIRE(a.curves.size() == b.curves.size());
    for (size_t i = 0; i < a.curves.size(); ++i) {
        CHECK(a.curves[i].cobb_deg == b.curves[i].cobb_deg);
        CHECK(a.curves[i].upper_ev.index() == b.curves[i].upper_ev.index());
    }
    CHECK(a.pc1.scores == b.pc1.scores);
}

// Holds for scoliotic profiles, whose candidate directions alternate.
// (On arbitrary angle vectors a scale-up can push a same-direction
// neighbor above threshold and the resulting merge re-reads a smaller
// pairwise angle, so the guarantee is limited to this domain.)
TEST_CASE("diagnose: scaling a scoliotic profile up never lowers the max Cobb") {
    Rng rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        std::array<double, kNumVertebrae> upper{};
        std::array<double, kNumVertebrae> lower{};
        {
            // Smooth alternating profile: one or two curves worth of tilt.
            const double amp = rng.uniform(8.0, 20.0);
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            const double freq = rng.uniform(0.25, 0.45);
            for (int i = 0; i < kNumVertebrae; ++i) {
                const double tilt = amp * std::sin(freq * i + phase);
                const double wedge = rng.uniform(0.0, 2.0);
                upper[static_cast<size_t>(i)] = tilt - wedge / 2.0;
                lower[static_cast<size_t>(i)] = tilt + wedge / 2.0;
            }
        }
        const double k = rng.uniform(1.0, 2.0);
        std::array<double, kNumVertebrae> upper_k = upper;
        std::array<double, kNumVertebrae> lower_k = lower;
        for (int i = 0; i < kNumVertebrae; ++i) {
            upper_k[static_cast<size_t>(i)] *= k;
            lower_k[static_cast<size_t>(i)] *= k;
        }
        const CurveReport base = diagnose(spine_from_angles(upper, lower, "scale"));
        const CurveReport scaled = diagnose(spine_from_angles(upper_k, lower_k, "scale"));
        CHECK(scaled.max_cobb_deg >= base.max_cobb_deg - 1e-9);
    }
}

TEST_CASE("diagnose: reported curves respect the structural invariants") {
    std::array<double, kNumVertebrae> upper{};
    std::array<double, kNumVertebrae> lower{};
    for (int i = 0; i < kNumVertebrae; ++i) {
        upper[static_cast<size_t>(i)] = std::sin(i * 1.3) * 25.0;
        lower[static_cast<size_t>(i)] = std::sin(i * 1.3 + 0.4) * 25.0;
    }
    const CurveReport r = diagnose(spine_from_angles(upper, lower, "inv"));
    for (const Curve& c : r.curves) {
        CHECK(c.upper_ev.index() < c.lower_ev.index());
        CHECK(c.lower_ev.index() <= 17); // never spans L5
        CHECK(c.cobb_deg >= 10.0);
    }
    for (size_t i = 0; i + 1 < r.curves.size(); ++i)
        CHECK(r.curves[i].direction != r.curves[i + 1].direction);
}
