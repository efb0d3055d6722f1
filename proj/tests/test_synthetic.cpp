#include <doctest.h>

#include <cmath>

#include "spinecurve/angle_matrix.hpp"
#include "spinecurve/metrics.hpp"
#include "spinecurve/synthetic.hpp"
#include "spec_sampler.hpp"

using namespace spinecurve;
using spinecurve::testing::random_spec;
using spinecurve::testing::RecoveryStats;
using spinecurve::testing::score_recovery;

namespace {

SpineSpec single_curve(const char* upper, const char* lower, CurveDirection dir,
                       double cobb, double wedge = 0.5) {
    SpineSpec spec;
    CurveSpec c;
    c.upper_ev = VertebraId::from_label(upper);
    c.lower_ev = VertebraId::from_label(lower);
    c.direction = dir;
    c.cobb_deg = cobb;
    c.wedge_fraction = wedge;
    spec.curves.push_back(c);
    return spec;
}

} // namespace

TEST_CASE("generate: no curves yields a straight diagnosable spine") {
    const GeneratedCase g = generate(SpineSpec{});
    const CurveReport r = diagnose(g.spine);
    CHECK(r.curves.empty());
    CHECK(r.severity == Severity::NormalMild);
    CHECK(g.ground_truth.curves.empty());
}

TEST_CASE("generate: planted pairwise angle is exact before noise") {
    const GeneratedCase g = generate(single_curve("T6", "T12", CurveDirection::Right, 23.3));
    const AngleMatrix am = build_angle_matrix(g.spine);
    CHECK(am.gamma_at(7, 13) == doctest::Approx(23.3).epsilon(1e-12));
    // Corner-derived angles reintroduce only rounding-level error.
    CHECK(std::abs(am.gamma_at(7, 13) - 23.3) < 1e-9);
}

TEST_CASE("generate: wedge fraction controls the planted VWI") {
    const GeneratedCase flat = generate(single_curve("T6", "T12", CurveDirection::Right, 24.0, 0.0));
    CHECK(flat.ground_truth.curves[0].vwi_deg == 0.0);
    const AngleMatrix am = build_angle_matrix(flat.spine);
    for (int i = 7; i <= 13; ++i) CHECK(std::abs(am.gamma_at(i, i)) < 1e-9);

    const GeneratedCase full = generate(single_curve("T6", "T12", CurveDirection::Right, 24.0, 1.0));
    // Full wedging: VWI equals the mean absolute tilt increment.
    double expected = 0.0;
    const double span = 6.0;
    for (int i = 7; i <= 13; ++i) {
        const double x = (i - 7) / span;
        expected += std::abs(-24.0 * M_PI / (2.0 * span) * std::sin(M_PI * x));
    }
    expected /= 7.0;
    CHECK(full.ground_truth.curves[0].vwi_deg == doctest::Approx(expected).epsilon(1e-9));
    CHECK(full.ground_truth.curves[0].vwi_deg > 1.0);
}

TEST_CASE("generate: determinism and noise reproducibility") {
    SpineSpec spec = single_curve("T4", "T10", CurveDirection::Left, 28.0);
    spec.noise_px = 1.5;
    spec.noise_deg = 0.5;
    spec.seed = 991;
    const GeneratedCase a = generate(spec);
    const GeneratedCase b = generate(spec);
    for (int i = 1; i <= kNumVertebrae; ++i) {
        CHECK(a.spine.at(i).upper.midpoint.x == b.spine.at(i).upper.midpoint.x);
        CHECK(a.spine.at(i).upper.angle_deg == b.spine.at(i).upper.angle_deg);
        CHECK(a.spine.at(i).corners->ul.x == b.spine.at(i).corners->ul.x);
    }
    spec.seed = 992;
    const GeneratedCase c = generate(spec);
    bool any_different = false;
    for (int i = 1; i <= kNumVertebrae; ++i)
        if (c.spine.at(i).upper.midpoint.x != a.spine.at(i).upper.midpoint.x)
            any_different = true;
    CHECK(any_different);
}

TEST_CASE("generate: biomechanical constraint holds by construction") {
    Rng rng(314);
    for (int trial = 0; trial < 25; ++trial) {
        const SpineSpec spec = random_spec(rng, 12.0, 50.0);
        const GeneratedCase g = generate(spec);
        const ConstraintReport cr = constraint_violation(g.spine, 5.0);
        CHECK(cr.score_deg == 0.0);
        CHECK(cr.violations.empty());
    }
}

TEST_CASE("generate: corrupting one vertebra trips exactly one violation") {
    const GeneratedCase g = generate(single_curve("T5", "T11", CurveDirection::Right, 30.0));
    std::vector<Vertebra> vs = g.spine.vertebrae();
    Vertebra& victim = vs[8]; // T8, interior
    victim.upper.angle_deg += 20.0;
    victim.lower.angle_deg += 20.0;
    victim.corners.reset(); // angles no longer match the corner landmarks
    const Spine corrupted("corrupt", std::move(vs), g.spine.image_size());
    const ConstraintReport cr = constraint_violation(corrupted, 5.0);
    REQUIRE(cr.violations.size() == 1);
    CHECK(cr.violations[0].vertebra.label() == "T8");
    CHECK(cr.violations[0].deviation_deg == doctest::Approx(20.0).epsilon(1e-6));
}

TEST_CASE("generate: infeasible specs are rejected") {
    SpineSpec spec;
    CurveSpec a;
    a.upper_ev = VertebraId::from_label("T6");
    a.lower_ev = VertebraId::from_label("T6");
    a.direction = CurveDirection::Right;
    a.cobb_deg = 20.0;
    spec.curves = {a};
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // empty span

    spec = single_curve("T6", "L5", CurveDirection::Right, 20.0);
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // L5 end vertebra

    spec = single_curve("T6", "T12", CurveDirection::Right, -5.0);
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // non-positive magnitude

    spec = single_curve("T6", "T12", CurveDirection::Right, 20.0, 1.5);
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // wedge fraction out of range

    spec = single_curve("T4", "T8", CurveDirection::Right, 20.0);
    CurveSpec overlap;
    overlap.upper_ev = VertebraId::from_label("T6");
    overlap.lower_ev = VertebraId::from_label("T12");
    overlap.direction = CurveDirection::Left;
    overlap.cobb_deg = 15.0;
    spec.curves.push_back(overlap);
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // overlapping curves

    spec = single_curve("T4", "T8", CurveDirection::Right, 20.0);
    CurveSpec same_dir;
    same_dir.upper_ev = VertebraId::from_label("T10");
    same_dir.lower_ev = VertebraId::from_label("L1");
    same_dir.direction = CurveDirection::Right;
    same_dir.cobb_deg = 15.0;
    spec.curves.push_back(same_dir);
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // directions do not alternate

    spec = single_curve("T6", "T12", CurveDirection::Right, 175.0);
    CHECK_THROWS_AS(generate(spec), InfeasibleSpec); // angles beyond +/-89
}

TEST_CASE("round trip: noise-free diagnosis recovers planted curves") {
    Rng rng(20240601);
    RecoveryStats stats;
    for (int trial = 0; trial < 120; ++trial) {
        SpineSpec spec = random_spec(rng, 12.0, 50.0);
        spec.seed = rng.next_u64();
        const GeneratedCase g = generate(spec);
        score_recovery(g.ground_truth, diagnose(g.spine), 0.5, stats);
    }
    CHECK(stats.planted > 150);
    CHECK(stats.recovered == stats.planted);
    CHECK(stats.false_curves == 0);
}

TEST_CASE("round trip: shared end vertebrae recovered exactly") {
    SpineSpec spec = single_curve("T6", "T12", CurveDirection::Right, 23.3);
    CurveSpec second;
    second.upper_ev = VertebraId::from_label("T12");
    second.lower_ev = VertebraId::from_label("L4");
    second.direction = CurveDirection::Left;
    second.cobb_deg = 25.7;
    second.wedge_fraction = 0.5;
    spec.curves.push_back(second);
    spec.case_id = "double-major";

    const CurveReport r = diagnose(generate(spec).spine);
    REQUIRE(r.curves.size() == 2);
    CHECK(r.curves[0].upper_ev.label() == "T6");
    CHECK(r.curves[0].lower_ev.label() == "T12");
    CHECK(r.curves[0].direction == CurveDirection::Right);
    CHECK(r.curves[0].cobb_deg == doctest::Approx(23.3).epsilon(1e-9));
    CHECK(r.curves[1].upper_ev.label() == "T12");
    CHECK(r.curves[1].lower_ev.label() == "L4");
    CHECK(r.curves[1].direction == CurveDirection::Left);
    CHECK(r.curves[1].cobb_deg == doctest::Approx(25.7).epsilon(1e-9));
    CHECK(r.max_cobb_deg == doctest::Approx(25.7).epsilon(1e-9));
    CHECK(r.severity == Severity::Moderate);
}

TEST_CASE("round trip: severe double curve classifies severe") {
    SpineSpec spec = single_curve("C7", "T7", CurveDirection::Left, 42.4);
    CurveSpec second;
    second.upper_ev = VertebraId::from_label("T7");
    second.lower_ev = VertebraId::from_label("L2");
    second.direction = CurveDirection::Right;
    second.cobb_deg = 50.9;
    second.wedge_fraction = 0.5;
    spec.curves.push_back(second);

    const CurveReport r = diagnose(generate(spec).spine);
    REQUIRE(r.curves.size() == 2);
    CHECK(r.max_cobb_deg == doctest::Approx(50.9).epsilon(1e-9));
    CHECK(r.severity == Severity::Severe);
}

TEST_CASE("round trip: noisy corners still recover most curves") {
    Rng rng(555);
    RecoveryStats stats;
    for (int trial = 0; trial < 80; ++trial) {
        SpineSpec spec = random_spec(rng, 12.0, 50.0);
        spec.noise_px = 1.5;
        spec.seed = rng.next_u64();
        const GeneratedCase g = generate(spec);
        score_recovery(g.ground_truth, diagnose(g.spine), 3.0, stats);
    }
    CHECK(stats.planted > 100);
    CHECK(static_cast<double>(stats.recovered) / stats.planted >= 0.9);
}

TEST_CASE("generate_cohort") {
    SUBCASE("row shape and determinism") {
        const std::vector<CohortRow> rows = generate_cohort(20, -0.3, 7);
        REQUIRE(rows.size() == 40);
        CHECK(rows[0].case_id == rows[1].case_id);
        CHECK(rows[0].date < rows[1].date);
        const std::vector<CohortRow> again = generate_cohort(20, -0.3, 7);
        CHECK(rows[5].vwi == again[5].vwi);
        CHECK(rows[5].cobb == again[5].cobb);
        for (const CohortRow& r : rows) {
            CHECK(r.vwi >= 0.0);
            CHECK(r.risser >= 0);
            CHECK(r.risser <= 5);
        }
    }
    SUBCASE("planted correlation is recoverable") {
        for (double planted : {0.0, -0.5}) {
            const std::vector<CohortRow> rows = generate_cohort(500, planted, 99);
            std::vector<double> vwi;
            std::vector<double> progression;
            for (size_t i = 0; i < rows.size(); i += 2) {
                vwi.push_back(rows[i].vwi);
                progression.push_back(rows[i + 1].cobb - rows[i].cobb);
            }
            const Correlation c = pearson(vwi, progression);
            if (planted == 0.0) CHECK(std::abs(c.r) < 0.2);
            else {
                CHECK(c.r > -0.6);
                CHECK(c.r < -0.4);
            }
        }
    }
    SUBCASE("invalid parameters rejected") {
        CHECK_THROWS_AS(generate_cohort(0, 0.0, 1), Error);
        CHECK_THROWS_AS(generate_cohort(10, 1.0, 1), Error);
    }
}
