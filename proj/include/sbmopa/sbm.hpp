#pragma once

#include <string>
#include <vector>

#include "sbmopa/panel.hpp"

namespace sbmopa::sbm {

enum class WeightRule { Min, Max, Avg };

WeightRule weight_rule_from_string(const std::string& name);
std::string to_string(WeightRule rule);

struct VariableWeights {
    std::vector<double> input;   // aligned with panel.input_indices()
    std::vector<double> output;  // aligned with panel.output_indices()
    std::string provenance;      // "rule:max", "unit", "hybrid-derived", ...

    void validate(const DmuPanel& panel) const;
};

// w_j = 1 / (rule over the column): reciprocal of the column min, max or
// mean, separately for inputs and outputs.
VariableWeights default_weights(const DmuPanel& panel, WeightRule rule);
VariableWeights unit_weights(const DmuPanel& panel);

// Everything the slack model yields for one unit at one error degree:
// slacks maximizing the weighted slack sum, the technical target, the score,
// the two tape edges shifted by 0 and 2*epsilon, and the edge-ratio
// sensitivity.
struct SbmAssessment {
    std::string dmu_id;
    double epsilon = 0.0;
    double objective = 0.0;              // optimal weighted slack sum
    std::vector<double> lambdas;         // reference intensities, per DMU
    std::vector<double> input_slacks;    // s^- per input
    std::vector<double> output_slacks;   // s^+ per output
    std::vector<double> target_inputs;   // x* = x - s^- + eps*x
    std::vector<double> target_outputs;  // y* = y + s^+ - eps*y
    std::vector<double> outer_inputs;    // x - s^- + 2*eps*x  (unfavorable edge)
    std::vector<double> outer_outputs;   // y + s^+ - 2*eps*y
    std::vector<double> inner_inputs;    // x - s^-            (favorable edge)
    std::vector<double> inner_outputs;   // y + s^+
    double gamma = 0.0;                  // observed ratio over target ratio
    double gamma_lower = 0.0;            // observed over favorable-edge ratio
    double gamma_upper = 0.0;            // observed over unfavorable-edge ratio
    double eta = 1.0;                    // favorable over unfavorable edge ratio, >= 1
};

// Solves the per-unit slack maximization with proportional error tapes
// (allowed error = epsilon * own value on every input and output). Throws
// SolverError carrying the dmu id and epsilon when the program is infeasible.
SbmAssessment assess(const DmuPanel& panel, const VariableWeights& weights, double epsilon,
                     int dmu_index);

struct DualSolution {
    std::string dmu_id;
    double epsilon = 0.0;
    double objective = 0.0;
    std::vector<double> input_price;       // v^-  >= 0, per input
    std::vector<double> input_cap_dual;    // theta^- >= 0, per input
    std::vector<double> output_price;      // u^+  >= 0, per output
    std::vector<double> output_floor_dual; // sigma^+ <= 0, per output
};

// Dual of the slack maximization. Its optimum equals assess().objective
// (strong duality); the hybrid model reuses these rows.
DualSolution solve_dual(const DmuPanel& panel, const VariableWeights& weights, double epsilon,
                        int dmu_index);

} // namespace sbmopa::sbm
