#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sbmopa/analytics.hpp"
#include "sbmopa/hybrid.hpp"
#include "sbmopa/io.hpp"
#include "sbmopa/sbm.hpp"

namespace sbmopa::pipeline {

struct RunConfig {
    std::string panel_csv;
    std::string roles_json;
    std::string policies_json;
    double epsilon = 0.01;
    double u_sbm = 0.5;
    double u_policy = 0.5;
    sbm::WeightRule weight_rule = sbm::WeightRule::Max;  // baseline assessment
    int k = 0;      // fixed cluster count; 0 selects k by the elbow curve
    int k_min = 1;  // elbow range (k == 0)
    int k_max = 0;  // 0 keeps the default min(8, n)
    unsigned seed = 42;
    std::string out_dir;
    bool absolute_correlation = false;
    bool cluster_best_scenario = false;  // extra clustering over best-scenario frontiers
    std::vector<std::string> reciprocal_columns;

    void validate() const;
};

// {"panel": "...", "roles": "...", "policies": "...", "epsilon": 0.01, ...};
// relative paths resolve against the config file's directory.
RunConfig config_from_json(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

// The full report document. Everything numeric is rounded to 12 significant
// digits before it enters the document, so serialization is byte-stable.
struct Report {
    nlohmann::ordered_json doc;

    std::string to_json() const;          // pretty, trailing newline
    io::CsvTable efficiency_table() const;  // scenario,dmu,gamma,bounds,eta,z,xi
    io::CsvTable weights_table() const;     // scenario,dmu,cluster,W_*,gamma,eta
    io::CsvTable comparison_table() const;  // dmu,optimal scenario + per-scenario gamma
    void write(const std::string& out_dir) const;
};

// panel -> policy ranking -> scenarios -> joint solutions -> sensitivity,
// clustering, scenario comparison. Per-(scenario, dmu) failures are recorded
// in the report, not thrown.
Report run_pipeline(const RunConfig& config);

// Record builders shared with the CLI. Numbers are rounded on entry;
// non-finite values become null next to their *_finite / *_capped flags.
nlohmann::ordered_json json_number(double value);
nlohmann::ordered_json solution_to_json(const DmuPanel& panel,
                                        const hybrid::HybridSolution& solution);
nlohmann::ordered_json cluster_to_json(const analytics::ClusterReport& report,
                                       const std::vector<std::string>& dmu_ids);
nlohmann::ordered_json assessment_to_json(const DmuPanel& panel,
                                          const sbm::SbmAssessment& assessment);

} // namespace sbmopa::pipeline
