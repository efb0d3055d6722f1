#include "spinecurve/report_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace spinecurve {

namespace {

std::string num6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string sci6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

} // namespace

std::string write_curve_report_json(const CurveReport& report) {
    std::ostringstream out;
    out << "{\n  \"case_id\": " << quoted(report.case_id) << ",\n  \"curves\": [";
    for (size_t i = 0; i < report.curves.size(); ++i) {
        const Curve& c = report.curves[i];
        out << (i == 0 ? "\n" : ",\n")
            << "    {\"upper_ev\": \"" << c.upper_ev.label()
            << "\", \"lower_ev\": \"" << c.lower_ev.label()
            << "\", \"direction\": \"" << to_string(c.direction)
            << "\", \"cobb_deg\": " << num6(c.cobb_deg)
            << ", \"vwi_deg\": " << num6(c.vwi_deg) << "}";
    }
    out << (report.curves.empty() ? "],\n" : "\n  ],\n");
    out << "  \"max_cobb_deg\": " << num6(report.max_cobb_deg) << ",\n";
    out << "  \"severity\": \"" << to_string(report.severity) << "\",\n";
    out << "  \"extrema\": [";
    for (size_t i = 0; i < report.extrema.size(); ++i) {
        const Extremum& e = report.extrema[i];
        out << (i == 0 ? "" : ", ") << "{\"vertebra\": \"" << e.vertebra.label()
            << "\", \"kind\": \"" << to_string(e.kind)
            << "\", \"score\": " << num6(e.score) << "}";
    }
    out << "],\n  \"pc1_scores\": [";
    for (int i = 0; i < kNumVertebrae; ++i)
        out << (i == 0 ? "" : ", ") << num6(report.pc1.scores[static_cast<size_t>(i)]);
    out << "],\n  \"singular_values\": [";
    for (size_t i = 0; i < report.pc1.sigma.size(); ++i)
        out << (i == 0 ? "" : ", ") << num6(report.pc1.sigma[i]);
    out << "],\n  \"constraint_score\": " << num6(report.constraint_score_deg) << "\n}\n";
    return out.str();
}

std::string write_curve_report_csv(const std::vector<CurveReport>& reports) {
    std::ostringstream out;
    out << "case_id,upper_ev,lower_ev,direction,cobb_deg,vwi_deg,max_cobb_deg,severity\n";
    for (const CurveReport& r : reports) {
        if (r.curves.empty()) {
            out << r.case_id << ",,,,,," << num6(r.max_cobb_deg) << ","
                << to_string(r.severity) << "\n";
            continue;
        }
        for (const Curve& c : r.curves)
            out << r.case_id << "," << c.upper_ev.label() << "," << c.lower_ev.label() << ","
                << to_string(c.direction) << "," << num6(c.cobb_deg) << "," << num6(c.vwi_deg)
                << "," << num6(r.max_cobb_deg) << "," << to_string(r.severity) << "\n";
    }
    return out.str();
}

std::string write_eval_report_json(const EvalReport& report) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"mmae_deg\": " << num6(report.mmae_deg) << ",\n";
    out << "  \"da_pct\": " << num6(report.da_pct) << ",\n";
    out << "  \"cdr_pct\": " << num6(report.cdr_pct) << ",\n";
    out << "  \"fdr_pct\": " << num6(report.fdr_pct) << ",\n";
    out << "  \"mpe_px\": " << num6(report.mpe_px) << ",\n";
    out << "  \"mae_deg\": " << num6(report.mae_deg) << ",\n";
    out << "  \"confusion\": {\n";
    out << "    \"labels\": [\"normal_mild\", \"moderate\", \"severe\"],\n";
    out << "    \"counts\": [";
    for (size_t g = 0; g < 3; ++g) {
        out << (g == 0 ? "[" : ", [");
        for (size_t p = 0; p < 3; ++p)
            out << (p == 0 ? "" : ", ") << report.confusion[g][p];
        out << "]";
    }
    out << "]\n  },\n";
    out << "  \"n_cases\": " << report.n_cases << ",\n";
    out << "  \"n_gt_curves\": " << report.n_gt_curves << ",\n";
    out << "  \"n_pred_curves\": " << report.n_pred_curves << ",\n";
    out << "  \"metadata\": {\"diagnose_version\": " << quoted(report.diagnose_version)
        << ", \"landmark_averaging\": " << quoted(report.landmark_averaging) << "}\n";
    out << "}\n";
    return out.str();
}

std::string write_cohort_report_json(const CohortReport& report) {
    std::ostringstream out;
    out << "{\n  \"n_patients\": " << report.n_patients << ",\n";
    out << "  \"progression\": \"last minus first Cobb per patient\",\n";
    out << "  \"rows\": [";
    for (size_t i = 0; i < report.rows.size(); ++i) {
        const CohortCorrelationRow& r = report.rows[i];
        out << (i == 0 ? "\n" : ",\n")
            << "    {\"metric\": " << quoted(r.metric) << ", \"r\": " << num6(r.r)
            << ", \"p\": " << sci6(r.p) << ", \"significant\": "
            << (r.significant ? "true" : "false") << "}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

std::string write_cohort_csv(const std::vector<CohortRow>& rows) {
    std::ostringstream out;
    out << "case_id,date,vwi,risser,cobb\n";
    for (const CohortRow& r : rows)
        out << r.case_id << "," << r.date << "," << num6(r.vwi) << "," << r.risser << ","
            << num6(r.cobb) << "\n";
    return out.str();
}

} // namespace spinecurve
