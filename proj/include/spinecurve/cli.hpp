#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinecurve/config.hpp"

namespace spinecurve {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1; // some cases failed, valid ones emitted
inline constexpr int kExitFatal = 2;   // nothing usable produced

/// Diagnose every case found under the input paths. Reports go to `out`
/// as a JSON array (or CSV), or one file per case when out_dir is set
/// (required for SVG emission). Unparseable cases are listed on `err`
/// and produce no partial output.
int cmd_analyze(const std::vector<std::string>& inputs, const std::string& out_dir,
                const Config& cfg, std::ostream& out, std::ostream& err);

/// Diagnose ground-truth and predicted landmark sets and print the
/// evaluation report for the case_id intersection. Unmatched ids are
/// warned about on `err`; an empty intersection is fatal. A non-empty
/// confusion_svg_path additionally writes the severity confusion matrix
/// as SVG.
int cmd_evaluate(const std::string& gt_path, const std::string& pred_path,
                 const Config& cfg, std::ostream& out, std::ostream& err,
                 const std::string& confusion_svg_path = "");

/// Generate synthetic landmark files plus ground-truth sidecars from a
/// spec file (see README for the schema). seed_override replaces the
/// spec's base seed when set.
int cmd_generate(const std::string& spec_path, const std::string& out_dir,
                 std::optional<uint64_t> seed_override, std::ostream& err);

/// Write a synthetic longitudinal cohort CSV with a planted correlation
/// between baseline VWI and Cobb progression.
int cmd_generate_cohort(int n_patients, double planted_r, uint64_t seed,
                        const std::string& out_path, std::ostream& err);

/// Correlation table of baseline VWI / Risser / Cobb against Cobb
/// progression over a longitudinal CSV (case_id,date,vwi,risser,cobb).
int cmd_cohort(const std::string& csv_path, std::ostream& out, std::ostream& err);

} // namespace spinecurve
