#include "sbmopa/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sbmopa/errors.hpp"
#include "sbmopa/lp.hpp"
#include "sbmopa/opa.hpp"

namespace sbmopa::hybrid {

void HybridConfig::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("epsilon must be a finite value >= 0");
    }
    if (!(u_sbm >= 0.0) || !(u_policy >= 0.0)) {
        throw ValidationError("objective weights must be nonnegative");
    }
    if (std::abs(u_sbm + u_policy - 1.0) > 1e-9) {
        throw ValidationError("objective weights must satisfy U_S + U_P = 1");
    }
}

namespace {

// Variable ids of the shared constraint block.
struct ModelVars {
    std::vector<int> v;      // input prices
    std::vector<int> theta;  // input cap duals
    std::vector<int> u;      // output prices
    std::vector<int> sigma;  // output floor duals (<= 0)
    std::vector<std::vector<int>> w;  // [policy][variable]
    int z = -1;
};

struct ModelContext {
    const DmuPanel* panel = nullptr;
    const scenario::PolicyRankingSet* ranks = nullptr;
    double epsilon = 0.0;
    int dmu = 0;
    std::vector<double> col_max;  // per variable, over units
    std::vector<double> col_min;
};

void check_ranking_set(const DmuPanel& panel, const scenario::PolicyRankingSet& ranks) {
    const int nvar = panel.variable_count();
    if (static_cast<int>(ranks.variables.size()) != nvar) {
        throw ValidationError("ranking set covers " + std::to_string(ranks.variables.size()) +
                              " variables, panel has " + std::to_string(nvar));
    }
    for (int j = 0; j < nvar; ++j) {
        if (ranks.variables[j] != panel.variables()[j].name) {
            throw ValidationError("ranking set variable order differs from the panel at '" +
                                  ranks.variables[j] + "'");
        }
    }
    if (ranks.policy_names.empty() ||
        ranks.policy_ranks.size() != ranks.policy_names.size() ||
        ranks.variable_ranks.size() != ranks.policy_names.size()) {
        throw ValidationError("ranking set is incomplete");
    }
    const int p = static_cast<int>(ranks.policy_names.size());
    std::vector<int> tks = ranks.policy_ranks;
    opa::validate_rank_vector(tks, p, "scenario policy ranks");
    for (int k = 0; k < p; ++k) {
        opa::validate_rank_vector(ranks.variable_ranks[k], nvar,
                                  "policy '" + ranks.policy_names[k] + "' variable ranks");
    }
}

ModelContext make_context(const DmuPanel& panel, const scenario::PolicyRankingSet& ranks,
                          double epsilon, int dmu_index) {
    if (dmu_index < 0 || dmu_index >= panel.dmu_count()) {
        throw ValidationError("dmu index out of range");
    }
    check_ranking_set(panel, ranks);
    ModelContext ctx;
    ctx.panel = &panel;
    ctx.ranks = &ranks;
    ctx.epsilon = epsilon;
    ctx.dmu = dmu_index;
    for (int j = 0; j < panel.variable_count(); ++j) {
        ctx.col_max.push_back(panel.column_max(j));
        ctx.col_min.push_back(panel.column_min(j));
    }
    return ctx;
}

// Appends the joint constraint block: unit rows, the two weight-link rows,
// the per-policy rank chains and the weight normalization.
ModelVars build_common_block(lp::Problem& p, const ModelContext& ctx) {
    const DmuPanel& panel = *ctx.panel;
    const auto& ranks = *ctx.ranks;
    const auto& in = panel.input_indices();
    const auto& out = panel.output_indices();
    const int nvar = panel.variable_count();
    const int npol = static_cast<int>(ranks.policy_names.size());

    ModelVars mv;
    for (int j : in) {
        mv.v.push_back(p.add_variable("v_" + panel.variables()[j].name));
        mv.theta.push_back(p.add_variable("theta_" + panel.variables()[j].name));
    }
    for (int j : out) {
        mv.u.push_back(p.add_variable("u_" + panel.variables()[j].name));
        mv.sigma.push_back(p.add_variable("sigma_" + panel.variables()[j].name, -lp::kInf, 0.0));
    }
    mv.w.assign(npol, std::vector<int>(nvar, -1));
    for (int k = 0; k < npol; ++k) {
        for (int j = 0; j < nvar; ++j) {
            mv.w[k][j] = p.add_variable("w_" + ranks.policy_names[k] + "_" +
                                        panel.variables()[j].name);
        }
    }
    // Nonnegative preference level keeps the rank chains meaningful in the
    // subproblems that do not maximize it.
    mv.z = p.add_variable("Z", 0.0, lp::kInf);

    for (int i = 0; i < panel.dmu_count(); ++i) {
        std::vector<lp::Term> terms;
        for (size_t a = 0; a < in.size(); ++a) terms.push_back({mv.v[a], panel.value(i, in[a])});
        for (size_t a = 0; a < out.size(); ++a) {
            terms.push_back({mv.u[a], -panel.value(i, out[a])});
        }
        p.add_constraint("unit_" + panel.dmu_ids()[i], std::move(terms), lp::Sense::GreaterEqual,
                         0.0);
    }
    for (size_t a = 0; a < in.size(); ++a) {
        std::vector<lp::Term> terms{{mv.v[a], 1.0}, {mv.theta[a], 1.0}};
        const double inv = 1.0 / ctx.col_max[in[a]];
        for (int k = 0; k < npol; ++k) terms.push_back({mv.w[k][in[a]], -inv});
        p.add_constraint("wlink_in_" + panel.variables()[in[a]].name, std::move(terms),
                         lp::Sense::GreaterEqual, 0.0);
    }
    for (size_t a = 0; a < out.size(); ++a) {
        std::vector<lp::Term> terms{{mv.u[a], 1.0}, {mv.sigma[a], 1.0}};
        const double inv = 1.0 / ctx.col_min[out[a]];
        for (int k = 0; k < npol; ++k) terms.push_back({mv.w[k][out[a]], -inv});
        p.add_constraint("wlink_out_" + panel.variables()[out[a]].name, std::move(terms),
                         lp::Sense::GreaterEqual, 0.0);
    }
    for (int k = 0; k < npol; ++k) {
        opa::add_rank_chain_rows(p, mv.w[k], ranks.variable_ranks[k], ranks.policy_ranks[k],
                                 mv.z, "pol_" + ranks.policy_names[k]);
    }
    std::vector<lp::Term> norm;
    for (int k = 0; k < npol; ++k) {
        for (int j = 0; j < nvar; ++j) norm.push_back({mv.w[k][j], 1.0});
    }
    p.add_constraint("normalize", std::move(norm), lp::Sense::Equal, 1.0);
    return mv;
}

// Efficiency-block objective terms at the assessed unit.
std::vector<lp::Term> objective_terms(const ModelContext& ctx, const ModelVars& mv) {
    const DmuPanel& panel = *ctx.panel;
    const auto& in = panel.input_indices();
    const auto& out = panel.output_indices();
    std::vector<lp::Term> terms;
    for (size_t a = 0; a < in.size(); ++a) {
        const double x = panel.value(ctx.dmu, in[a]);
        terms.push_back({mv.v[a], (1.0 + ctx.epsilon) * x});
        terms.push_back({mv.theta[a], x});
    }
    for (size_t a = 0; a < out.size(); ++a) {
        const double y = panel.value(ctx.dmu, out[a]);
        terms.push_back({mv.u[a], -(1.0 + ctx.epsilon) * y});
        terms.push_back({mv.sigma[a], -(1.0 - 2.0 * ctx.epsilon) * y});
    }
    return terms;
}

double evaluate_terms(const std::vector<lp::Term>& terms, const std::vector<double>& primal) {
    double total = 0.0;
    for (const auto& t : terms) total += t.coeff * primal[t.var];
    return total;
}

lp::Solution solve_or_throw(const lp::Problem& p, const ModelContext& ctx, const char* what) {
    const lp::Solution s = lp::solve(p);
    if (s.status != lp::Status::Optimal) {
        throw SolverError(std::string(what) + " for dmu '" +
                          ctx.panel->dmu_ids()[ctx.dmu] + "' in scenario '" +
                          ctx.ranks->scenario_id + "' came back " + lp::to_string(s.status));
    }
    return s;
}

} // namespace

ObjectiveScaling payoff_table(const DmuPanel& panel, const scenario::PolicyRankingSet& ranks,
                              double epsilon, int dmu_index) {
    panel.validate();
    const ModelContext ctx = make_context(panel, ranks, epsilon, dmu_index);

    ObjectiveScaling scale;
    {
        lp::Problem p;
        const ModelVars mv = build_common_block(p, ctx);
        p.set_objective(lp::Goal::Minimize, objective_terms(ctx, mv));
        scale.f_min = solve_or_throw(p, ctx, "payoff f-min program").objective;
    }
    {
        lp::Problem p;
        const ModelVars mv = build_common_block(p, ctx);
        p.set_objective(lp::Goal::Maximize, {{mv.z, 1.0}});
        const lp::Solution s = solve_or_throw(p, ctx, "payoff preference program");
        scale.f_max = evaluate_terms(objective_terms(ctx, mv), s.primal);
    }
    const double span = scale.f_max - scale.f_min;
    scale.degenerate = span <= lp::tolerance() * (1.0 + std::abs(scale.f_max));
    return scale;
}

HybridSolution solve_hybrid(const DmuPanel& panel, const scenario::PolicyRankingSet& ranks,
                            const HybridConfig& config, int dmu_index,
                            const ObjectiveScaling* scaling) {
    panel.validate();
    config.validate();
    const ModelContext ctx = make_context(panel, ranks, config.epsilon, dmu_index);

    HybridSolution out;
    out.dmu_id = panel.dmu_ids()[dmu_index];
    out.scenario_id = ranks.scenario_id;

    if (scaling != nullptr) {
        if (scaling->f_min > scaling->f_max) {
            throw ValidationError("objective scaling has f_min > f_max");
        }
        out.scaling = *scaling;
    } else if (config.u_sbm > 0.0) {
        out.scaling = payoff_table(panel, ranks, config.epsilon, dmu_index);
    }

    lp::Problem p;
    const ModelVars mv = build_common_block(p, ctx);
    const int xi = p.add_variable("xi", -lp::kInf, lp::kInf);
    const std::vector<lp::Term> f_terms = objective_terms(ctx, mv);

    // A switched-off objective contributes no scalarization row; with its
    // weight at zero the row would only pin xi to zero and detach the active
    // objective (see ledger).
    if (config.u_policy > 0.0) {
        p.add_constraint("scal_policy", {{mv.z, config.u_policy}, {xi, -1.0}},
                         lp::Sense::GreaterEqual, 0.0);
    }
    if (config.u_sbm > 0.0) {
        if (out.scaling.degenerate) {
            p.add_constraint("scal_efficiency", {{xi, -1.0}}, lp::Sense::GreaterEqual,
                             -config.u_sbm);
        } else {
            const double span = out.scaling.f_max - out.scaling.f_min;
            std::vector<lp::Term> row;
            const double k = config.u_sbm / span;
            for (const auto& t : f_terms) row.push_back({t.var, -k * t.coeff});
            row.push_back({xi, -1.0});
            p.add_constraint("scal_efficiency", std::move(row), lp::Sense::GreaterEqual,
                             -config.u_sbm * out.scaling.f_max / span);
        }
    }
    p.set_objective(lp::Goal::Maximize, {{xi, 1.0}});
    const lp::Solution s = solve_or_throw(p, ctx, "joint preference-efficiency program");

    const auto& in = panel.input_indices();
    const auto& outv = panel.output_indices();
    const int nvar = panel.variable_count();
    const int npol = static_cast<int>(ranks.policy_names.size());

    for (size_t a = 0; a < in.size(); ++a) {
        out.input_price.push_back(std::max(0.0, s.primal[mv.v[a]]));
        out.input_cap_dual.push_back(std::max(0.0, s.primal[mv.theta[a]]));
    }
    for (size_t a = 0; a < outv.size(); ++a) {
        out.output_price.push_back(std::max(0.0, s.primal[mv.u[a]]));
        out.output_floor_dual.push_back(std::min(0.0, s.primal[mv.sigma[a]]));
    }
    out.policy_weights.assign(npol, std::vector<double>(nvar, 0.0));
    out.variable_weights.assign(nvar, 0.0);
    for (int k = 0; k < npol; ++k) {
        for (int j = 0; j < nvar; ++j) {
            const double w = std::max(0.0, s.primal[mv.w[k][j]]);
            out.policy_weights[k][j] = w;
            out.variable_weights[j] += w;
        }
    }
    out.z = s.primal[mv.z];
    out.xi = s.primal[xi];
    out.dual_objective = evaluate_terms(f_terms, s.primal);

    out.derived_weights.provenance = "hybrid-derived";
    for (int j : in) {
        out.derived_weights.input.push_back(out.variable_weights[j] / ctx.col_max[j]);
    }
    for (int j : outv) {
        out.derived_weights.output.push_back(out.variable_weights[j] / ctx.col_min[j]);
    }
    out.assessment = sbm::assess(panel, out.derived_weights, config.epsilon, dmu_index);
    return out;
}

ScenarioAssessment assess_scenario(const DmuPanel& panel,
                                   const scenario::PolicyRankingSet& ranks,
                                   const HybridConfig& config) {
    panel.validate();
    config.validate();
    check_ranking_set(panel, ranks);

    std::vector<int> order(panel.dmu_count());
    for (int i = 0; i < panel.dmu_count(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return panel.dmu_ids()[a] < panel.dmu_ids()[b];
    });

    ScenarioAssessment result;
    result.scenario_id = ranks.scenario_id;
    for (int idx : order) {
        try {
            result.solutions.push_back(solve_hybrid(panel, ranks, config, idx));
        } catch (const std::exception& e) {
            result.failures.emplace_back(panel.dmu_ids()[idx], e.what());
        }
    }
    return result;
}

std::vector<std::string> replay_constraints(const DmuPanel& panel,
                                            const scenario::PolicyRankingSet& ranks,
                                            const HybridConfig& config,
                                            const HybridSolution& solution) {
    const double tol = lp::tolerance();
    std::vector<std::string> violations;
    auto report = [&](const std::string& what, double margin) {
        if (margin < -tol) {
            violations.push_back(what + " violated by " + std::to_string(-margin));
        }
    };

    const auto& in = panel.input_indices();
    const auto& outv = panel.output_indices();
    const int nvar = panel.variable_count();
    const int npol = static_cast<int>(ranks.policy_names.size());
    const int l = panel.find_dmu(solution.dmu_id);
    if (l < 0) return {"dmu '" + solution.dmu_id + "' not in panel"};

    // sign conditions
    for (double v : solution.input_price) report("v >= 0", v);
    for (double v : solution.input_cap_dual) report("theta >= 0", v);
    for (double v : solution.output_price) report("u >= 0", v);
    for (double v : solution.output_floor_dual) report("sigma <= 0", -v);
    for (const auto& pw : solution.policy_weights) {
        for (double w : pw) report("w >= 0", w);
    }

    // unit rows
    for (int i = 0; i < panel.dmu_count(); ++i) {
        double act = 0.0;
        for (size_t a = 0; a < in.size(); ++a) {
            act += panel.value(i, in[a]) * solution.input_price[a];
        }
        for (size_t a = 0; a < outv.size(); ++a) {
            act -= panel.value(i, outv[a]) * solution.output_price[a];
        }
        report("unit row " + panel.dmu_ids()[i], act);
    }

    // weight-link rows
    for (size_t a = 0; a < in.size(); ++a) {
        const double lhs = solution.input_price[a] + solution.input_cap_dual[a];
        const double rhs = solution.variable_weights[in[a]] / panel.column_max(in[a]);
        report("input weight link " + panel.variables()[in[a]].name, lhs - rhs);
    }
    for (size_t a = 0; a < outv.size(); ++a) {
        const double lhs = solution.output_price[a] + solution.output_floor_dual[a];
        const double rhs = solution.variable_weights[outv[a]] / panel.column_min(outv[a]);
        report("output weight link " + panel.variables()[outv[a]].name, lhs - rhs);
    }

    // rank chains
    for (int k = 0; k < npol; ++k) {
        const auto& rk = ranks.variable_ranks[k];
        const double tk = ranks.policy_ranks[k];
        std::map<int, std::vector<int>> by_rank;
        for (int j = 0; j < nvar; ++j) by_rank[rk[j]].push_back(j);
        for (auto it = by_rank.begin(); it != by_rank.end(); ++it) {
            auto next = std::next(it);
            const double coeff = tk * it->first;
            if (next == by_rank.end()) {
                for (int u : it->second) {
                    report("last-rank chain " + ranks.policy_names[k],
                           coeff * solution.policy_weights[k][u] - solution.z);
                }
            } else {
                for (int u : it->second) {
                    for (int v : next->second) {
                        report("rank chain " + ranks.policy_names[k],
                               coeff * (solution.policy_weights[k][u] -
                                        solution.policy_weights[k][v]) -
                                   solution.z);
                    }
                }
            }
        }
    }

    // normalization
    double total = 0.0;
    for (const auto& pw : solution.policy_weights) {
        for (double w : pw) total += w;
    }
    if (std::abs(total - 1.0) > tol) {
        violations.push_back("weight normalization off by " + std::to_string(total - 1.0));
    }

    // scalarization rows, with the efficiency objective recomputed from the
    // returned multipliers rather than trusted from the record
    if (config.u_policy > 0.0) {
        report("policy scalarization", config.u_policy * solution.z - solution.xi);
    }
    if (config.u_sbm > 0.0) {
        double f = 0.0;
        for (size_t a = 0; a < in.size(); ++a) {
            const double x = panel.value(l, in[a]);
            f += (1.0 + config.epsilon) * x * solution.input_price[a];
            f += x * solution.input_cap_dual[a];
        }
        for (size_t a = 0; a < outv.size(); ++a) {
            const double y = panel.value(l, outv[a]);
            f -= (1.0 + config.epsilon) * y * solution.output_price[a];
            f -= (1.0 - 2.0 * config.epsilon) * y * solution.output_floor_dual[a];
        }
        double f_trans = 1.0;
        if (!solution.scaling.degenerate) {
            f_trans = (solution.scaling.f_max - f) /
                      (solution.scaling.f_max - solution.scaling.f_min);
        }
        report("efficiency scalarization", config.u_sbm * f_trans - solution.xi);
    }
    return violations;
}

} // namespace sbmopa::hybrid
