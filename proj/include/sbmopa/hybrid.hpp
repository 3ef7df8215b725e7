#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sbmopa/panel.hpp"
#include "sbmopa/sbm.hpp"
#include "sbmopa/scenario.hpp"

namespace sbmopa::hybrid {

// Payoff-table bounds used to normalize the efficiency-block objective: f_min
// is the objective minimized alone over the joint constraint set, f_max is
// the objective evaluated at the solution that maximizes Z alone over the
// same set. When the two collapse, f_trans is pinned to 1 and the flag set.
struct ObjectiveScaling {
    double f_min = 0.0;
    double f_max = 0.0;
    bool degenerate = false;
};

struct HybridConfig {
    double epsilon = 0.01;
    double u_sbm = 0.5;     // weight of the efficiency objective (U_S)
    double u_policy = 0.5;  // weight of the preference objective (U_P)

    void validate() const;
};

// One unit's solution of the joint model: efficiency-block multipliers,
// preference weights, the scalarization values, and the downstream slack
// assessment recomputed with the derived variable weights.
struct HybridSolution {
    std::string dmu_id;
    std::string scenario_id;

    std::vector<double> input_price;        // v^-  per input
    std::vector<double> input_cap_dual;     // theta^- per input
    std::vector<double> output_price;       // u^+  per output
    std::vector<double> output_floor_dual;  // sigma^+ per output, <= 0

    std::vector<std::vector<double>> policy_weights;  // w_jk: [policy][variable]
    std::vector<double> variable_weights;             // W_j = sum_k w_jk
    double z = 0.0;
    double xi = 0.0;
    double dual_objective = 0.0;  // efficiency-block objective at this point
    ObjectiveScaling scaling;

    sbm::VariableWeights derived_weights;  // W_j/max(x_j) inputs, W_j/min(y_j) outputs
    sbm::SbmAssessment assessment;
};

ObjectiveScaling payoff_table(const DmuPanel& panel, const scenario::PolicyRankingSet& ranks,
                              double epsilon, int dmu_index);

// Solves the scalarized joint model. When a precomputed scaling is passed it
// is used verbatim; otherwise payoff_table() runs first (skipped entirely
// when the efficiency objective weight is zero).
HybridSolution solve_hybrid(const DmuPanel& panel, const scenario::PolicyRankingSet& ranks,
                            const HybridConfig& config, int dmu_index,
                            const ObjectiveScaling* scaling = nullptr);

struct ScenarioAssessment {
    std::string scenario_id;
    std::vector<HybridSolution> solutions;  // ordered by dmu id
    std::vector<std::pair<std::string, std::string>> failures;  // (dmu id, reason)
};

// Runs every unit; per-unit failures are collected, not fatal.
ScenarioAssessment assess_scenario(const DmuPanel& panel,
                                   const scenario::PolicyRankingSet& ranks,
                                   const HybridConfig& config);

// Re-evaluates every row of the configured model at the returned point,
// independently of the solver. Returns human-readable violations (empty when
// the replay is clean at lp::tolerance()).
std::vector<std::string> replay_constraints(const DmuPanel& panel,
                                            const scenario::PolicyRankingSet& ranks,
                                            const HybridConfig& config,
                                            const HybridSolution& solution);

} // namespace sbmopa::hybrid
