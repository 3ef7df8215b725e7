#pragma once

#include <string>
#include <vector>

#include "sbmopa/lp.hpp"

namespace sbmopa::opa {

// One evaluator: a rank for the evaluator itself plus a rank per item, with
// rank 1 the most important. Ties share a rank value; after a tie of t items
// at rank r the next rank may be anything up to r + t, so both dense
// (1,2,2,3) and competition-style (1,2,2,4) rankings are accepted.
struct ExpertRanking {
    int rank = 1;                 // s_k
    std::vector<int> item_ranks;  // r_jk, aligned with RankingInstance::items
};

struct RankingInstance {
    std::vector<std::string> items;
    std::vector<ExpertRanking> experts;

    int item_count() const { return static_cast<int>(items.size()); }
    int expert_count() const { return static_cast<int>(experts.size()); }
    void validate() const;  // throws ValidationError
};

struct OpaSolution {
    std::vector<std::string> items;
    std::vector<std::vector<double>> weights;  // [expert][item], w_jk
    std::vector<double> aggregated;            // per item, sum over experts
    double objective = 0.0;                    // Z*
};

// Max-min rank-chain LP turning ordinal ranks into cardinal weights.
OpaSolution solve_opa(const RankingInstance& instance);

// Column sums w_j = sum_k w_jk.
std::vector<double> aggregate_weights(const OpaSolution& solution);

struct ClosedForm {
    std::vector<double> weights;  // by rank position r = 1..n
    double objective = 0.0;
};

// Analytic optimum for a single top-ranked expert with a complete strict
// ranking of n items: w^r = (1/n) * sum_{h=r..n} 1/h and Z* = 1/n. Serves as
// the independent oracle for solve_opa.
ClosedForm closed_form_single_expert(int n);

// Validates one rank vector: every value in 1..n, rank 1 present, and after
// each distinct rank the next one is reachable given the tie count.
void validate_rank_vector(const std::vector<int>& ranks, int max_rank,
                          const std::string& where);

// Appends the rank-chain rows for one expert over existing LP variables:
//   a * rank_u * (w_u - w_v) >= Z   for consecutive distinct ranks, all pairs
//   a * rank_u * w_u         >= Z   for items at the last distinct rank
// with multiplier a (the expert/policy rank). Returns rows added. Shared by
// the standalone OPA model and the hybrid efficiency model.
int add_rank_chain_rows(lp::Problem& problem, const std::vector<int>& item_vars,
                        const std::vector<int>& item_ranks, int expert_rank, int z_var,
                        const std::string& tag);

// {"experts":[{"rank":1,"item_ranks":{"L":4,"K":2,...}}]} with an optional
// top-level "items" array pinning the item order.
RankingInstance ranking_from_json(const std::string& json_text);

} // namespace sbmopa::opa
