#include "sbmopa/sbm.hpp"

#include <algorithm>
#include <cmath>

#include "sbmopa/errors.hpp"
#include "sbmopa/lp.hpp"

namespace sbmopa::sbm {

WeightRule weight_rule_from_string(const std::string& name) {
    if (name == "min") return WeightRule::Min;
    if (name == "max") return WeightRule::Max;
    if (name == "avg") return WeightRule::Avg;
    throw ValidationError("unknown weight rule '" + name + "' (expected min, max or avg)");
}

std::string to_string(WeightRule rule) {
    switch (rule) {
        case WeightRule::Min: return "min";
        case WeightRule::Max: return "max";
        case WeightRule::Avg: return "avg";
    }
    return "?";
}

void VariableWeights::validate(const DmuPanel& panel) const {
    if (static_cast<int>(input.size()) != panel.input_count() ||
        static_cast<int>(output.size()) != panel.output_count()) {
        throw ValidationError("variable weights do not match the panel's input/output counts");
    }
    auto check = [](const std::vector<double>& w, const char* side) {
        double sum = 0.0;
        for (double v : w) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError(std::string("non-finite or negative ") + side + " weight");
            }
            sum += v;
        }
        if (!(sum > 0.0)) {
            throw ValidationError(std::string(side) + " weights sum to zero");
        }
    };
    check(input, "input");
    check(output, "output");
}

VariableWeights default_weights(const DmuPanel& panel, WeightRule rule) {
    auto aggregate = [&](int var) {
        switch (rule) {
            case WeightRule::Min: return panel.column_min(var);
            case WeightRule::Max: return panel.column_max(var);
            case WeightRule::Avg: return panel.column_mean(var);
        }
        return 0.0;
    };
    VariableWeights w;
    w.provenance = "rule:" + to_string(rule);
    for (int var : panel.input_indices()) {
        const double a = aggregate(var);
        if (a == 0.0) {
            throw ValidationError("weight rule division by zero on column '" +
                                  panel.variables()[var].name + "'");
        }
        w.input.push_back(1.0 / a);
    }
    for (int var : panel.output_indices()) {
        const double a = aggregate(var);
        if (a == 0.0) {
            throw ValidationError("weight rule division by zero on column '" +
                                  panel.variables()[var].name + "'");
        }
        w.output.push_back(1.0 / a);
    }
    return w;
}

VariableWeights unit_weights(const DmuPanel& panel) {
    VariableWeights w;
    w.provenance = "unit";
    w.input.assign(panel.input_count(), 1.0);
    w.output.assign(panel.output_count(), 1.0);
    return w;
}

namespace {

void check_assessment_inputs(const DmuPanel& panel, const VariableWeights& weights,
                             double epsilon, int dmu_index) {
    panel.validate();
    weights.validate(panel);
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("epsilon must be a finite value >= 0");
    }
    if (dmu_index < 0 || dmu_index >= panel.dmu_count()) {
        throw ValidationError("dmu index out of range");
    }
}

double weighted_sum(const std::vector<double>& w, const std::vector<double>& v) {
    double sum = 0.0;
    for (size_t i = 0; i < w.size(); ++i) sum += w[i] * v[i];
    return sum;
}

double safe_ratio(double num, double den, const std::string& what) {
    if (!(den > 0.0)) {
        throw SolverError("degenerate weighted ratio while computing " + what +
                          " (denominator " + std::to_string(den) + ")");
    }
    return num / den;
}

} // namespace

SbmAssessment assess(const DmuPanel& panel, const VariableWeights& weights, double epsilon,
                     int dmu_index) {
    check_assessment_inputs(panel, weights, epsilon, dmu_index);
    const int n = panel.dmu_count();
    const auto& in = panel.input_indices();
    const auto& out = panel.output_indices();
    const int r = static_cast<int>(in.size());
    const int s = static_cast<int>(out.size());
    const int l = dmu_index;

    lp::Problem p;
    std::vector<int> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = p.add_variable("lambda_" + panel.dmu_ids()[i]);
    std::vector<int> sin(r), sout(s);
    for (int j = 0; j < r; ++j) {
        // The slack cannot exceed the unit's own input level.
        sin[j] = p.add_variable("s_in_" + panel.variables()[in[j]].name, 0.0,
                                panel.value(l, in[j]));
    }
    for (int j = 0; j < s; ++j) {
        // The shifted output must stay nonnegative: y + s - 2*eps*y >= 0.
        const double y = panel.value(l, out[j]);
        sout[j] = p.add_variable("s_out_" + panel.variables()[out[j]].name,
                                 std::max(0.0, (2.0 * epsilon - 1.0) * y), lp::kInf);
    }

    // Reference rows in the senses matched by the dual's sign conditions:
    // the composite point uses at most the error-padded input and produces
    // at least the error-padded output. With positive weights they bind at
    // optimum except where a slack hits its cap.
    for (int j = 0; j < r; ++j) {
        std::vector<lp::Term> terms;
        for (int i = 0; i < n; ++i) terms.push_back({lam[i], panel.value(i, in[j])});
        terms.push_back({sin[j], 1.0});
        p.add_constraint("in_" + panel.variables()[in[j]].name, std::move(terms),
                         lp::Sense::LessEqual, (1.0 + epsilon) * panel.value(l, in[j]));
    }
    for (int j = 0; j < s; ++j) {
        std::vector<lp::Term> terms;
        for (int i = 0; i < n; ++i) terms.push_back({lam[i], panel.value(i, out[j])});
        terms.push_back({sout[j], -1.0});
        p.add_constraint("out_" + panel.variables()[out[j]].name, std::move(terms),
                         lp::Sense::GreaterEqual, (1.0 + epsilon) * panel.value(l, out[j]));
    }
    std::vector<lp::Term> obj;
    for (int j = 0; j < r; ++j) obj.push_back({sin[j], weights.input[j]});
    for (int j = 0; j < s; ++j) obj.push_back({sout[j], weights.output[j]});
    p.set_objective(lp::Goal::Maximize, std::move(obj));

    const lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::Optimal) {
        throw SolverError("slack assessment for dmu '" + panel.dmu_ids()[l] + "' at epsilon " +
                          std::to_string(epsilon) + " came back " + lp::to_string(sol.status) +
                          (sol.status == lp::Status::Infeasible
                               ? " (epsilon too large for this dmu)"
                               : ""));
    }

    SbmAssessment a;
    a.dmu_id = panel.dmu_ids()[l];
    a.epsilon = epsilon;
    a.objective = sol.objective;
    a.lambdas.resize(n);
    for (int i = 0; i < n; ++i) a.lambdas[i] = std::max(0.0, sol.primal[lam[i]]);
    a.input_slacks.resize(r);
    a.output_slacks.resize(s);
    a.target_inputs.resize(r);
    a.target_outputs.resize(s);
    a.outer_inputs.resize(r);
    a.outer_outputs.resize(s);
    a.inner_inputs.resize(r);
    a.inner_outputs.resize(s);

    std::vector<double> x(r), y(s);
    for (int j = 0; j < r; ++j) x[j] = panel.value(l, in[j]);
    for (int j = 0; j < s; ++j) y[j] = panel.value(l, out[j]);

    for (int j = 0; j < r; ++j) {
        const double slack = std::clamp(sol.primal[sin[j]], 0.0, x[j]);
        a.input_slacks[j] = slack;
        a.target_inputs[j] = x[j] - slack + epsilon * x[j];
        a.outer_inputs[j] = x[j] - slack + 2.0 * epsilon * x[j];
        a.inner_inputs[j] = x[j] - slack;
    }
    for (int j = 0; j < s; ++j) {
        const double slack = std::max(sol.primal[sout[j]], 0.0);
        a.output_slacks[j] = slack;
        a.target_outputs[j] = y[j] + slack - epsilon * y[j];
        a.outer_outputs[j] = y[j] + slack - 2.0 * epsilon * y[j];
        a.inner_outputs[j] = y[j] + slack;
    }

    const double observed =
        safe_ratio(weighted_sum(weights.output, y), weighted_sum(weights.input, x), "score");
    const double target = safe_ratio(weighted_sum(weights.output, a.target_outputs),
                                     weighted_sum(weights.input, a.target_inputs), "score");
    a.gamma = observed / target;

    // Sensitivity: favorable edge ratio over unfavorable edge ratio. A tape
    // corner where the favorable edge loses all weighted input (or the
    // unfavorable edge all weighted output) makes it infinite; reports
    // serialize that as a flagged null.
    const double fav_num = weighted_sum(weights.output, a.inner_outputs);
    const double fav_den = weighted_sum(weights.input, a.inner_inputs);
    const double unf_num = weighted_sum(weights.output, a.outer_outputs);
    const double unf_den = weighted_sum(weights.input, a.outer_inputs);
    if (!(fav_den > 0.0) || !(unf_num > 0.0)) {
        a.eta = std::numeric_limits<double>::infinity();
        a.gamma_lower = 0.0;
        a.gamma_upper = std::numeric_limits<double>::infinity();
    } else {
        const double favorable = fav_num / fav_den;
        const double unfavorable = unf_num / unf_den;
        a.eta = favorable / unfavorable;
        a.gamma_lower = observed / favorable;
        a.gamma_upper = observed / unfavorable;
    }
    return a;
}

DualSolution solve_dual(const DmuPanel& panel, const VariableWeights& weights, double epsilon,
                        int dmu_index) {
    check_assessment_inputs(panel, weights, epsilon, dmu_index);
    const int n = panel.dmu_count();
    const auto& in = panel.input_indices();
    const auto& out = panel.output_indices();
    const int r = static_cast<int>(in.size());
    const int s = static_cast<int>(out.size());
    const int l = dmu_index;

    lp::Problem p;
    std::vector<int> v(r), th(r), u(s), sg(s);
    for (int j = 0; j < r; ++j) {
        v[j] = p.add_variable("v_" + panel.variables()[in[j]].name);
        th[j] = p.add_variable("theta_" + panel.variables()[in[j]].name);
    }
    for (int j = 0; j < s; ++j) {
        u[j] = p.add_variable("u_" + panel.variables()[out[j]].name);
        sg[j] = p.add_variable("sigma_" + panel.variables()[out[j]].name, -lp::kInf, 0.0);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<lp::Term> terms;
        for (int j = 0; j < r; ++j) terms.push_back({v[j], panel.value(i, in[j])});
        for (int j = 0; j < s; ++j) terms.push_back({u[j], -panel.value(i, out[j])});
        p.add_constraint("dmu_" + panel.dmu_ids()[i], std::move(terms), lp::Sense::GreaterEqual,
                         0.0);
    }
    for (int j = 0; j < r; ++j) {
        p.add_constraint("win_" + panel.variables()[in[j]].name, {{v[j], 1.0}, {th[j], 1.0}},
                         lp::Sense::GreaterEqual, weights.input[j]);
    }
    for (int j = 0; j < s; ++j) {
        p.add_constraint("wout_" + panel.variables()[out[j]].name, {{u[j], 1.0}, {sg[j], 1.0}},
                         lp::Sense::GreaterEqual, weights.output[j]);
    }
    std::vector<lp::Term> obj;
    for (int j = 0; j < r; ++j) {
        const double x = panel.value(l, in[j]);
        obj.push_back({v[j], (1.0 + epsilon) * x});
        obj.push_back({th[j], x});
    }
    for (int j = 0; j < s; ++j) {
        const double y = panel.value(l, out[j]);
        obj.push_back({u[j], -(1.0 + epsilon) * y});
        obj.push_back({sg[j], -(1.0 - 2.0 * epsilon) * y});
    }
    p.set_objective(lp::Goal::Minimize, std::move(obj));

    const lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::Optimal) {
        throw SolverError("slack-model dual for dmu '" + panel.dmu_ids()[l] + "' at epsilon " +
                          std::to_string(epsilon) + " came back " + lp::to_string(sol.status));
    }

    DualSolution d;
    d.dmu_id = panel.dmu_ids()[l];
    d.epsilon = epsilon;
    d.objective = sol.objective;
    d.input_price.resize(r);
    d.input_cap_dual.resize(r);
    d.output_price.resize(s);
    d.output_floor_dual.resize(s);
    for (int j = 0; j < r; ++j) {
        d.input_price[j] = std::max(0.0, sol.primal[v[j]]);
        d.input_cap_dual[j] = std::max(0.0, sol.primal[th[j]]);
    }
    for (int j = 0; j < s; ++j) {
        d.output_price[j] = std::max(0.0, sol.primal[u[j]]);
        d.output_floor_dual[j] = std::min(0.0, sol.primal[sg[j]]);
    }
    return d;
}

} // namespace sbmopa::sbm
