#pragma once

#include <string>
#include <vector>

#include "spinecurve/metrics.hpp"
#include "spinecurve/synthetic.hpp"

namespace spinecurve {

/// Correlation table produced by the cohort harness, one row per
/// baseline metric tested against Cobb progression.
struct CohortCorrelationRow {
    std::string metric;
    double r = 0.0;
    double p = 1.0;
    bool significant = false;
};

struct CohortReport {
    int n_patients = 0;
    std::vector<CohortCorrelationRow> rows;
};

// All writers emit a fixed key order and fixed number formatting
// (%.6f, p-values as %.6e), so identical inputs produce identical bytes.
std::string write_curve_report_json(const CurveReport& report);
std::string write_curve_report_csv(const std::vector<CurveReport>& reports);
std::string write_eval_report_json(const EvalReport& report);
std::string write_cohort_report_json(const CohortReport& report);
std::string write_cohort_csv(const std::vector<CohortRow>& rows);

} // namespace spinecurve
