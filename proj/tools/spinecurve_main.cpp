#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinecurve/cli.hpp"

using namespace spinecurve;

int main(int argc, char** argv) {
    CLI::App app{"Scoliosis assessment from vertebral endplate landmarks: "
                 "angle-matrix curve detection, Cobb angles, severity, VWI, "
                 "and evaluation metrics"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")
        ->envname("SPINECURVE_CONFIG");
    double gamma_threshold = -1.0;
    app.add_option("--gamma-threshold", gamma_threshold,
                   "Clinical significance threshold in degrees (default 10)");

    auto make_config = [&]() {
        Config cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (gamma_threshold > 0.0) cfg.diagnosis.gamma_threshold_deg = gamma_threshold;
        return cfg;
    };

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Diagnose landmark files");
    std::vector<std::string> analyze_inputs;
    std::string analyze_out;
    std::string analyze_format;
    bool analyze_svg = false;
    analyze->add_option("inputs", analyze_inputs, "Landmark files or directories")
        ->required();
    analyze->add_option("--out", analyze_out, "Output directory (default: stdout)");
    analyze->add_option("--format", analyze_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    analyze->add_flag("--svg", analyze_svg, "Emit angle-matrix, PC1 and spine SVGs");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Compare predictions against ground truth");
    std::string eval_gt;
    std::string eval_pred;
    std::string eval_confusion_svg;
    evaluate->add_option("--gt", eval_gt, "Ground-truth landmark file or directory")->required();
    evaluate->add_option("--pred", eval_pred, "Predicted landmark file or directory")->required();
    evaluate->add_option("--confusion-svg", eval_confusion_svg,
                         "Also write the severity confusion matrix as SVG");

    // generate
    auto* generate = app.add_subcommand("generate", "Generate synthetic landmark cases");
    std::string gen_spec;
    std::string gen_out;
    std::optional<uint64_t> gen_seed;
    int cohort_n = 0;
    double cohort_r = 0.0;
    generate->add_option("--spec", gen_spec, "Generator spec JSON (see README)");
    generate->add_option("--out", gen_out, "Output directory (or CSV path with --cohort-n)")
        ->required();
    uint64_t seed_value = 0;
    auto* seed_opt = generate->add_option("--seed", seed_value, "Base seed override");
    generate->add_option("--cohort-n", cohort_n, "Generate a longitudinal cohort CSV instead");
    generate->add_option("--cohort-r", cohort_r,
                         "Planted VWI-progression correlation for --cohort-n");

    // cohort
    auto* cohort = app.add_subcommand("cohort", "Correlate baseline metrics with progression");
    std::string cohort_csv;
    cohort->add_option("csv", cohort_csv, "Longitudinal CSV (case_id,date,vwi,risser,cobb)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*seed_opt) gen_seed = seed_value;
        if (analyze->parsed()) {
            Config cfg = make_config();
            if (!analyze_format.empty()) cfg.output_format = analyze_format;
            if (analyze_svg) cfg.svg_emit = true;
            return cmd_analyze(analyze_inputs, analyze_out, cfg, std::cout, std::cerr);
        }
        if (evaluate->parsed())
            return cmd_evaluate(eval_gt, eval_pred, make_config(), std::cout, std::cerr,
                                eval_confusion_svg);
        if (generate->parsed()) {
            if (cohort_n > 0)
                return cmd_generate_cohort(cohort_n, cohort_r, gen_seed.value_or(0), gen_out,
                                           std::cerr);
            if (gen_spec.empty()) {
                std::cerr << "error: generate needs --spec (or --cohort-n)\n";
                return kExitFatal;
            }
            return cmd_generate(gen_spec, gen_out, gen_seed, std::cerr);
        }
        if (cohort->parsed()) return cmd_cohort(cohort_csv, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
