#include "sbmopa/opa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "sbmopa/errors.hpp"

namespace sbmopa::opa {

void validate_rank_vector(const std::vector<int>& ranks, int max_rank,
                          const std::string& where) {
    if (ranks.empty()) throw ValidationError(where + ": empty rank vector");
    std::map<int, int> count_by_rank;
    for (int r : ranks) {
        if (r < 1 || r > max_rank) {
            throw ValidationError(where + ": rank " + std::to_string(r) +
                                  " outside 1.." + std::to_string(max_rank));
        }
        ++count_by_rank[r];
    }
    if (count_by_rank.begin()->first != 1) {
        throw ValidationError(where + ": rank 1 missing");
    }
    int prev_rank = 0;
    int prev_count = 0;
    for (const auto& [rank, count] : count_by_rank) {
        if (prev_rank > 0 && rank > prev_rank + prev_count) {
            throw ValidationError(where + ": gap between ranks " + std::to_string(prev_rank) +
                                  " and " + std::to_string(rank));
        }
        prev_rank = rank;
        prev_count = count;
    }
}

void RankingInstance::validate() const {
    if (items.empty()) throw ValidationError("ranking instance has no items");
    if (experts.empty()) throw ValidationError("ranking instance has no experts");
    const int n = item_count();
    std::vector<int> expert_ranks;
    expert_ranks.reserve(experts.size());
    for (size_t k = 0; k < experts.size(); ++k) {
        const ExpertRanking& e = experts[k];
        if (static_cast<int>(e.item_ranks.size()) != n) {
            throw ValidationError("expert " + std::to_string(k + 1) + " ranks " +
                                  std::to_string(e.item_ranks.size()) + " items, expected " +
                                  std::to_string(n));
        }
        validate_rank_vector(e.item_ranks, n, "expert " + std::to_string(k + 1));
        expert_ranks.push_back(e.rank);
    }
    // Expert ranks must themselves form a valid tied ranking, otherwise the
    // [0,1] bound on Z* does not hold.
    validate_rank_vector(expert_ranks, static_cast<int>(experts.size()), "expert ranks");
}

int add_rank_chain_rows(lp::Problem& problem, const std::vector<int>& item_vars,
                        const std::vector<int>& item_ranks, int expert_rank, int z_var,
                        const std::string& tag) {
    std::map<int, std::vector<int>> by_rank;  // rank value -> item positions
    for (size_t j = 0; j < item_ranks.size(); ++j) {
        by_rank[item_ranks[j]].push_back(static_cast<int>(j));
    }
    const double a = static_cast<double>(expert_rank);
    int rows = 0;
    auto it = by_rank.begin();
    while (it != by_rank.end()) {
        auto next = std::next(it);
        const double coeff = a * it->first;
        if (next == by_rank.end()) {
            for (int u : it->second) {
                problem.add_constraint(tag + "_last_i" + std::to_string(u),
                                       {{item_vars[u], coeff}, {z_var, -1.0}},
                                       lp::Sense::GreaterEqual, 0.0);
                ++rows;
            }
        } else {
            for (int u : it->second) {
                for (int v : next->second) {
                    problem.add_constraint(
                        tag + "_chain_i" + std::to_string(u) + "_i" + std::to_string(v),
                        {{item_vars[u], coeff}, {item_vars[v], -coeff}, {z_var, -1.0}},
                        lp::Sense::GreaterEqual, 0.0);
                    ++rows;
                }
            }
        }
        it = next;
    }
    return rows;
}

OpaSolution solve_opa(const RankingInstance& instance) {
    instance.validate();
    const int n = instance.item_count();
    const int m = instance.expert_count();

    lp::Problem p;
    std::vector<std::vector<int>> w_var(m, std::vector<int>(n));
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < n; ++j) {
            w_var[k][j] = p.add_variable("w_k" + std::to_string(k + 1) + "_" + instance.items[j]);
        }
    }
    const int z = p.add_variable("Z", -lp::kInf, lp::kInf);

    for (int k = 0; k < m; ++k) {
        add_rank_chain_rows(p, w_var[k], instance.experts[k].item_ranks,
                            instance.experts[k].rank, z, "k" + std::to_string(k + 1));
    }
    std::vector<lp::Term> sum_terms;
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < n; ++j) sum_terms.push_back({w_var[k][j], 1.0});
    }
    p.add_constraint("normalize", std::move(sum_terms), lp::Sense::Equal, 1.0);
    p.set_objective(lp::Goal::Maximize, {{z, 1.0}});

    const lp::Solution s = lp::solve(p);
    if (s.status != lp::Status::Optimal) {
        throw SolverError("opa weight program came back " + lp::to_string(s.status) +
                          " on a valid instance; problem dump:\n" + p.dump());
    }

    OpaSolution out;
    out.items = instance.items;
    out.objective = s.objective;
    out.weights.assign(m, std::vector<double>(n, 0.0));
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < n; ++j) {
            out.weights[k][j] = std::max(0.0, s.primal[w_var[k][j]]);
        }
    }
    out.aggregated = aggregate_weights(out);
    return out;
}

std::vector<double> aggregate_weights(const OpaSolution& solution) {
    if (solution.weights.empty()) return {};
    std::vector<double> agg(solution.weights.front().size(), 0.0);
    for (const auto& per_expert : solution.weights) {
        for (size_t j = 0; j < per_expert.size(); ++j) agg[j] += per_expert[j];
    }
    return agg;
}

ClosedForm closed_form_single_expert(int n) {
    if (n < 1) throw ValidationError("closed_form_single_expert requires n >= 1");
    ClosedForm cf;
    cf.objective = 1.0 / n;
    cf.weights.resize(n, 0.0);
    double tail = 0.0;
    for (int r = n; r >= 1; --r) {
        tail += 1.0 / r;
        cf.weights[r - 1] = tail / n;
    }
    return cf;
}

RankingInstance ranking_from_json(const std::string& json_text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("ranking json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("experts") || !doc["experts"].is_array() ||
        doc["experts"].empty()) {
        throw ValidationError("ranking json: expected an object with a non-empty 'experts' array");
    }

    RankingInstance inst;
    if (doc.contains("items")) {
        for (const auto& it : doc["items"]) inst.items.push_back(it.get<std::string>());
    } else {
        for (const auto& [key, value] : doc["experts"][0]["item_ranks"].items()) {
            (void)value;
            inst.items.push_back(key);
        }
    }
    for (const auto& ej : doc["experts"]) {
        ExpertRanking e;
        e.rank = ej.value("rank", 1);
        if (!ej.contains("item_ranks") || !ej["item_ranks"].is_object()) {
            throw ValidationError("ranking json: each expert needs an 'item_ranks' object");
        }
        e.item_ranks.resize(inst.items.size(), 0);
        size_t seen = 0;
        for (size_t j = 0; j < inst.items.size(); ++j) {
            const auto& name = inst.items[j];
            if (!ej["item_ranks"].contains(name)) {
                throw ValidationError("ranking json: expert missing rank for item '" + name + "'");
            }
            e.item_ranks[j] = ej["item_ranks"][name].get<int>();
            ++seen;
        }
        if (ej["item_ranks"].size() != seen) {
            throw ValidationError("ranking json: expert ranks an item not in the item list");
        }
        inst.experts.push_back(std::move(e));
    }
    inst.validate();
    return inst;
}

} // namespace sbmopa::opa
