#pragma once

#include <map>
#include <string>
#include <vector>

#include "sbmopa/panel.hpp"

namespace sbmopa::scenario {

// A policy orders the panel variables by importance. Ranks listed in
// fixed_ranks are taken verbatim; everything else is ranked by Pearson
// correlation against the anchor variable's data series.
struct PolicyDefinition {
    std::string name;
    std::string anchor;                      // implicit rank 1 unless fixed
    std::map<std::string, int> fixed_ranks;  // variable -> rank
    std::string note;                        // free-form, carried into configs
};

struct RankedPolicy {
    std::string name;
    std::vector<std::string> variable_names;  // panel variable order
    std::vector<int> variable_ranks;          // aligned with variable_names
};

struct PearsonEntry {
    std::string variable;
    double coefficient = 0.0;
    double p_value = 1.0;  // two-sided; reported, never used for ranking
};

// Sample Pearson correlation. Throws ValidationError on length mismatch or
// zero variance (the caller adds the column name).
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided p-value from the t distribution with n-2 degrees of freedom.
double pearson_p_value(double rho, int n);

RankedPolicy rank_by_pearson(const DmuPanel& panel, const PolicyDefinition& policy,
                             bool absolute = false,
                             std::vector<PearsonEntry>* report = nullptr);

struct ScenarioSpec {
    std::string id;
    std::vector<std::string> policy_order;  // most preferred first
};

// All p! orderings of the declared policies in lexicographic order over the
// declared positions, ids S1..S(p!). Refuses more than 6 policies; larger
// studies must list scenarios explicitly.
std::vector<ScenarioSpec> enumerate_scenarios(const std::vector<std::string>& policy_names);

// OPA-shaped view of one scenario: policies play the expert role with ranks
// t_k = position in the scenario order, variables play the item role.
struct PolicyRankingSet {
    std::string scenario_id;
    std::vector<std::string> variables;
    std::vector<std::string> policy_names;         // declared order
    std::vector<int> policy_ranks;                 // t_k per policy
    std::vector<std::vector<int>> variable_ranks;  // [policy][variable]
};

PolicyRankingSet to_ranking_set(const ScenarioSpec& scenario,
                                const std::vector<RankedPolicy>& policies);

} // namespace sbmopa::scenario
