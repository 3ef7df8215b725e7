#include "sbmopa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "sbmopa/errors.hpp"
#include "sbmopa/opa.hpp"

namespace sbmopa::scenario {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw ValidationError("pearson: series length mismatch or empty series");
    }
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) {
        throw ValidationError("pearson: zero variance");
    }
    return sab / std::sqrt(saa * sbb);
}

double pearson_p_value(double rho, int n) {
    if (n <= 2) return 1.0;
    const double denom = 1.0 - rho * rho;
    if (denom <= 0.0) return 0.0;
    const double t = std::abs(rho) * std::sqrt((n - 2) / denom);
    boost::math::students_t dist(n - 2);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

RankedPolicy rank_by_pearson(const DmuPanel& panel, const PolicyDefinition& policy,
                             bool absolute, std::vector<PearsonEntry>* report) {
    const int nvar = panel.variable_count();
    RankedPolicy out;
    out.name = policy.name;
    for (const auto& v : panel.variables()) out.variable_names.push_back(v.name);
    out.variable_ranks.assign(nvar, 0);

    std::map<std::string, int> fixed = policy.fixed_ranks;
    for (const auto& [name, rank] : fixed) {
        if (panel.find_variable(name) < 0) {
            throw ValidationError("policy '" + policy.name + "' fixes rank of unknown variable '" +
                                  name + "'");
        }
        if (rank < 1 || rank > nvar) {
            throw ValidationError("policy '" + policy.name + "' fixes rank " +
                                  std::to_string(rank) + " outside 1.." + std::to_string(nvar));
        }
    }

    std::vector<int> open;  // variable indices needing a correlation rank
    for (int j = 0; j < nvar; ++j) {
        const auto& name = panel.variables()[j].name;
        auto it = fixed.find(name);
        if (it != fixed.end()) {
            out.variable_ranks[j] = it->second;
        } else if (!policy.anchor.empty() && name == policy.anchor) {
            out.variable_ranks[j] = 1;  // the anchor tops its own policy
        } else {
            open.push_back(j);
        }
    }

    if (!open.empty()) {
        const int anchor_idx = policy.anchor.empty() ? -1 : panel.find_variable(policy.anchor);
        if (anchor_idx < 0) {
            throw ValidationError("policy '" + policy.name +
                                  "' leaves variables unranked and names no valid anchor");
        }
        std::vector<double> anchor_col = panel.column(anchor_idx);
        std::vector<std::pair<double, int>> scored;  // (-key, variable)
        for (int j : open) {
            double rho;
            try {
                rho = pearson(panel.column(j), anchor_col);
            } catch (const ValidationError&) {
                throw ValidationError("zero-variance column '" + panel.variables()[j].name +
                                      "' (or anchor '" + policy.anchor +
                                      "') in pearson ranking for policy '" + policy.name + "'");
            }
            if (report) {
                report->push_back(PearsonEntry{panel.variables()[j].name, rho,
                                               pearson_p_value(rho, panel.dmu_count())});
            }
            scored.emplace_back(absolute ? -std::abs(rho) : -rho, j);
        }
        std::stable_sort(scored.begin(), scored.end());

        // Remaining rank slots in ascending order; a tie group occupies the
        // first slot and consumes one slot per member (competition style).
        std::vector<bool> used(nvar + 1, false);
        for (int j = 0; j < nvar; ++j) {
            if (out.variable_ranks[j] > 0) used[out.variable_ranks[j]] = true;
        }
        std::vector<int> slots;
        for (int rankv = 1; rankv <= nvar; ++rankv) {
            if (!used[rankv]) slots.push_back(rankv);
        }
        size_t pos = 0;
        size_t i = 0;
        while (i < scored.size()) {
            size_t group_end = i + 1;
            while (group_end < scored.size() &&
                   std::abs(scored[group_end].first - scored[i].first) < 1e-12) {
                ++group_end;
            }
            if (pos >= slots.size()) {
                throw ValidationError("policy '" + policy.name +
                                      "' has more variables than available rank slots");
            }
            for (size_t g = i; g < group_end; ++g) {
                out.variable_ranks[scored[g].second] = slots[pos];
            }
            pos += group_end - i;
            i = group_end;
        }
    }

    opa::validate_rank_vector(out.variable_ranks, nvar, "policy '" + policy.name + "' ranks");
    return out;
}

std::vector<ScenarioSpec> enumerate_scenarios(const std::vector<std::string>& policy_names) {
    const int p = static_cast<int>(policy_names.size());
    if (p < 1) throw ValidationError("no policies to enumerate");
    if (p > 6) {
        throw ValidationError("refusing to enumerate " + std::to_string(p) +
                              "! scenarios; list them explicitly instead");
    }
    std::set<std::string> names(policy_names.begin(), policy_names.end());
    if (static_cast<int>(names.size()) != p) {
        throw ValidationError("duplicate policy names");
    }
    std::vector<int> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<ScenarioSpec> out;
    int counter = 1;
    do {
        ScenarioSpec spec;
        spec.id = "S" + std::to_string(counter++);
        for (int i : idx) spec.policy_order.push_back(policy_names[i]);
        out.push_back(std::move(spec));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

PolicyRankingSet to_ranking_set(const ScenarioSpec& scenario,
                                const std::vector<RankedPolicy>& policies) {
    if (policies.empty()) throw ValidationError("no ranked policies supplied");
    if (scenario.policy_order.size() != policies.size()) {
        throw ValidationError("scenario '" + scenario.id +
                              "' does not order every declared policy");
    }
    PolicyRankingSet set;
    set.scenario_id = scenario.id;
    set.variables = policies.front().variable_names;
    for (const auto& pol : policies) {
        if (pol.variable_names != set.variables) {
            throw ValidationError("policy '" + pol.name +
                                  "' ranks a different variable list than the others");
        }
        if (pol.variable_ranks.size() != set.variables.size()) {
            throw ValidationError("policy '" + pol.name + "' is missing variable ranks");
        }
        const auto it =
            std::find(scenario.policy_order.begin(), scenario.policy_order.end(), pol.name);
        if (it == scenario.policy_order.end()) {
            throw ValidationError("scenario '" + scenario.id + "' does not place policy '" +
                                  pol.name + "'");
        }
        set.policy_names.push_back(pol.name);
        set.policy_ranks.push_back(
            static_cast<int>(std::distance(scenario.policy_order.begin(), it)) + 1);
        set.variable_ranks.push_back(pol.variable_ranks);
    }
    return set;
}

} // namespace sbmopa::scenario
