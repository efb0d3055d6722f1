#include "spinecurve/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spinecurve/landmark_io.hpp"
#include "spinecurve/metrics.hpp"
#include "spinecurve/report_io.hpp"
#include "spinecurve/svg.hpp"
#include "spinecurve/synthetic.hpp"

namespace spinecurve {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> collect_landmark_files(const std::string& path) {
    std::vector<std::string> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            const std::string ext = entry.path().extension().string();
            if (name.size() > 8 && name.substr(name.size() - 8) == ".gt.json") continue;
            if (ext == ".json" || ext == ".csv") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    return files;
}

std::vector<Spine> parse_file_cases(const std::string& file) {
    if (file.size() >= 4 && file.substr(file.size() - 4) == ".csv") {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw ParseError(file + ": cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_landmark_csv(ss.str(), file);
    }
    return {load_landmark_file(file)};
}

// Parse every case under the inputs; per-file failures land in `errors`.
std::vector<Spine> gather_cases(const std::vector<std::string>& inputs,
                                std::vector<std::string>& errors) {
    std::vector<Spine> cases;
    std::vector<std::string> files;
    for (const std::string& input : inputs) {
        if (!fs::exists(input)) {
            errors.push_back(input + ": no such file or directory");
            continue;
        }
        for (std::string& f : collect_landmark_files(input)) files.push_back(std::move(f));
    }
    std::map<std::string, std::string> seen; // case_id -> source file
    for (const std::string& file : files) {
        try {
            for (Spine& s : parse_file_cases(file)) {
                auto it = seen.find(s.case_id());
                if (it != seen.end()) {
                    errors.push_back(file + ": duplicate case id '" + s.case_id() +
                                     "' (already loaded from " + it->second + ")");
                    continue;
                }
                seen.emplace(s.case_id(), file);
                cases.push_back(std::move(s));
            }
        } catch (const Error& e) {
            errors.push_back(e.what());
        }
    }
    std::sort(cases.begin(), cases.end(),
              [](const Spine& a, const Spine& b) { return a.case_id() < b.case_id(); });
    return cases;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

} // namespace

int cmd_analyze(const std::vector<std::string>& inputs, const std::string& out_dir,
                const Config& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.svg_emit && out_dir.empty()) {
        err << "error: SVG emission requires an output directory (--out)\n";
        return kExitFatal;
    }
    std::vector<std::string> errors;
    const std::vector<Spine> cases = gather_cases(inputs, errors);

    std::vector<CurveReport> reports;
    reports.reserve(cases.size());
    for (const Spine& spine : cases) reports.push_back(diagnose(spine, cfg.diagnosis));

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        if (cfg.output_format == "csv") {
            write_text_file(fs::path(out_dir) / "report.csv", write_curve_report_csv(reports));
        } else {
            for (const CurveReport& r : reports)
                write_text_file(fs::path(out_dir) / (r.case_id + ".report.json"),
                                write_curve_report_json(r));
        }
        if (cfg.svg_emit) {
            for (size_t i = 0; i < cases.size(); ++i) {
                const AngleMatrix am = build_angle_matrix(cases[i]);
                const CurveReport& r = reports[i];
                write_text_file(fs::path(out_dir) / (r.case_id + ".gamma.svg"),
                                gamma_heatmap_svg(am, r.case_id + " angle matrix"));
                write_text_file(fs::path(out_dir) / (r.case_id + ".pc1.svg"),
                                pc1_curve_svg(r.pc1, r.extrema, r.case_id + " PC1"));
                write_text_file(fs::path(out_dir) / (r.case_id + ".spine.svg"),
                                spine_overlay_svg(cases[i], r));
            }
        }
    } else if (cfg.output_format == "csv") {
        out << write_curve_report_csv(reports);
    } else {
        out << "[";
        for (size_t i = 0; i < reports.size(); ++i)
            out << (i == 0 ? "\n" : ",\n") << write_curve_report_json(reports[i]);
        out << "]\n";
    }

    for (const std::string& e : errors) err << "error: " << e << "\n";
    if (!errors.empty()) return cases.empty() ? kExitFatal : kExitPartial;
    if (cases.empty()) {
        err << "error: no cases found\n";
        return kExitFatal;
    }
    return kExitOk;
}

int cmd_evaluate(const std::string& gt_path, const std::string& pred_path,
                 const Config& cfg, std::ostream& out, std::ostream& err,
                 const std::string& confusion_svg_path) {
    std::vector<std::string> errors;
    std::vector<Spine> gt_cases = gather_cases({gt_path}, errors);
    std::vector<Spine> pred_cases = gather_cases({pred_path}, errors);
    for (const std::string& e : errors) err << "error: " << e << "\n";

    std::map<std::string, Spine*> pred_by_id;
    for (Spine& s : pred_cases) pred_by_id[s.case_id()] = &s;

    std::vector<CasePair> pairs;
    for (Spine& gt : gt_cases) {
        auto it = pred_by_id.find(gt.case_id());
        if (it == pred_by_id.end()) {
            err << "warning: case '" << gt.case_id() << "' has no prediction\n";
            continue;
        }
        Spine& pred = *it->second;
        pairs.push_back(CasePair{gt.case_id(), gt, diagnose(gt, cfg.diagnosis), pred,
                                 diagnose(pred, cfg.diagnosis)});
        pred_by_id.erase(it);
    }
    for (const auto& [id, spine] : pred_by_id)
        err << "warning: case '" << id << "' has no ground truth\n";

    if (pairs.empty()) {
        err << "error: no case ids shared between ground truth and predictions\n";
        return kExitFatal;
    }
    try {
        const EvalReport report = evaluate_cases(pairs);
        out << write_eval_report_json(report);
        if (!confusion_svg_path.empty())
            write_text_file(confusion_svg_path, confusion_matrix_svg(report));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return errors.empty() ? kExitOk : kExitPartial;
}

namespace {

CurveSpec parse_curve_spec(const json& jc, const std::string& where) {
    auto need = [&](const char* key) -> const json& {
        if (!jc.contains(key)) throw ParseError(where + ": curve missing '" + key + "'");
        return jc[key];
    };
    CurveSpec spec;
    spec.upper_ev = VertebraId::from_label(need("upper_ev").get<std::string>());
    spec.lower_ev = VertebraId::from_label(need("lower_ev").get<std::string>());
    const std::string dir = need("direction").get<std::string>();
    if (dir != "right" && dir != "left")
        throw ParseError(where + ": direction must be 'right' or 'left'");
    spec.direction = dir == "right" ? CurveDirection::Right : CurveDirection::Left;
    spec.cobb_deg = need("cobb_deg").get<double>();
    if (jc.contains("wedge_fraction")) spec.wedge_fraction = jc["wedge_fraction"].get<double>();
    return spec;
}

} // namespace

int cmd_generate(const std::string& spec_path, const std::string& out_dir,
                 std::optional<uint64_t> seed_override, std::ostream& err) {
    json doc;
    try {
        std::ifstream in(spec_path, std::ios::binary);
        if (!in) throw ParseError(spec_path + ": cannot open spec file");
        std::ostringstream ss;
        ss << in.rdbuf();
        doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        err << "error: " << spec_path << ": invalid JSON: " << e.what() << "\n";
        return kExitFatal;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }

    try {
        if (!doc.is_object() || !doc.contains("cases") || !doc["cases"].is_array())
            throw ParseError(spec_path + ": spec needs a 'cases' array");
        uint64_t base_seed = doc.value("seed", 0ULL);
        if (seed_override) base_seed = *seed_override;

        fs::create_directories(out_dir);
        uint64_t case_index = 0;
        for (const json& jcase : doc["cases"]) {
            SpineSpec spec;
            spec.seed = base_seed + case_index;
            ++case_index;
            if (jcase.contains("case_id")) spec.case_id = jcase["case_id"].get<std::string>();
            else spec.case_id = "case-" + std::to_string(case_index);
            const std::string where = spec_path + " (case " + spec.case_id + ")";
            if (jcase.contains("seed")) spec.seed = jcase["seed"].get<uint64_t>();
            spec.vertebra_height_px = jcase.value("vertebra_height_px", spec.vertebra_height_px);
            spec.disc_height_px = jcase.value("disc_height_px", spec.disc_height_px);
            spec.vertebra_width_px = jcase.value("vertebra_width_px", spec.vertebra_width_px);
            spec.noise_deg = jcase.value("noise_deg", 0.0);
            spec.noise_px = jcase.value("noise_px", 0.0);
            if (jcase.contains("curves"))
                for (const json& jc : jcase["curves"])
                    spec.curves.push_back(parse_curve_spec(jc, where));

            const GeneratedCase generated = generate(spec);
            write_text_file(fs::path(out_dir) / (spec.case_id + ".json"),
                            write_landmark_json(generated.spine));
            write_text_file(fs::path(out_dir) / (spec.case_id + ".gt.json"),
                            write_curve_report_json(generated.ground_truth));
        }
        if (case_index == 0) {
            err << "error: " << spec_path << ": spec contains no cases\n";
            return kExitFatal;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    } catch (const json::exception& e) {
        err << "error: " << spec_path << ": " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitOk;
}

int cmd_generate_cohort(int n_patients, double planted_r, uint64_t seed,
                        const std::string& out_path, std::ostream& err) {
    try {
        const std::vector<CohortRow> rows = generate_cohort(n_patients, planted_r, seed);
        write_text_file(out_path, write_cohort_csv(rows));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitOk;
}

int cmd_cohort(const std::string& csv_path, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream in(csv_path, std::ios::binary);
        if (!in) throw ParseError(csv_path + ": cannot open file");
        std::string line;
        if (!std::getline(in, line)) throw ParseError(csv_path + ": empty file");
        auto strip_cr = [](std::string s) {
            if (!s.empty() && s.back() == '\r') s.pop_back();
            return s;
        };
        if (strip_cr(line) != "case_id,date,vwi,risser,cobb")
            throw MissingColumns(csv_path + ": header must be case_id,date,vwi,risser,cobb");

        struct Visit {
            std::string date;
            double vwi, risser, cobb;
        };
        std::map<std::string, std::vector<Visit>> patients;
        int line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty()) continue;
            const std::string where = csv_path + ":" + std::to_string(line_no);
            std::vector<std::string> f;
            std::string cur;
            for (char ch : line) {
                if (ch == ',') {
                    f.push_back(cur);
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            f.push_back(cur);
            if (f.size() != 5) throw ParseError(where + ": expected 5 fields");
            Visit v;
            v.date = f[1];
            try {
                v.vwi = std::stod(f[2]);
                v.risser = std::stod(f[3]);
                v.cobb = std::stod(f[4]);
            } catch (const std::exception&) {
                throw ParseError(where + ": numeric fields could not be parsed");
            }
            patients[f[0]].push_back(std::move(v));
        }

        std::vector<double> vwi0, risser0, cobb0, progression;
        for (auto& [id, visits] : patients) {
            if (visits.size() < 2) continue; // needs at least two timepoints
            std::stable_sort(visits.begin(), visits.end(),
                             [](const Visit& a, const Visit& b) { return a.date < b.date; });
            vwi0.push_back(visits.front().vwi);
            risser0.push_back(visits.front().risser);
            cobb0.push_back(visits.front().cobb);
            progression.push_back(visits.back().cobb - visits.front().cobb);
        }
        if (progression.size() < 3)
            throw TooFewPoints(csv_path + ": need at least 3 patients with 2+ timepoints, found " +
                               std::to_string(progression.size()));

        CohortReport report;
        report.n_patients = static_cast<int>(progression.size());
        auto add_row = [&](const std::string& name, const std::vector<double>& x) {
            const Correlation c = pearson(x, progression);
            report.rows.push_back(CohortCorrelationRow{name, c.r, c.p, c.p < 0.05});
        };
        add_row("initial_vwi", vwi0);
        add_row("initial_risser_score", risser0);
        add_row("initial_cobb_angle", cobb0);
        out << write_cohort_report_json(report);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitOk;
}

} // namespace spinecurve
