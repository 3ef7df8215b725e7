#include "sbmopa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "sbmopa/analytics.hpp"
#include "sbmopa/errors.hpp"
#include "sbmopa/hybrid.hpp"
#include "sbmopa/lp.hpp"
#include "sbmopa/scenario.hpp"

namespace sbmopa::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void RunConfig::validate() const {
    if (panel_csv.empty() || roles_json.empty() || policies_json.empty()) {
        throw ValidationError("config must name panel, roles and policies files");
    }
    for (const auto& path : {panel_csv, roles_json, policies_json}) {
        if (!fs::exists(path)) throw ValidationError("file does not exist: '" + path + "'");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("epsilon must be a finite value >= 0");
    }
    if (!(u_sbm >= 0.0) || !(u_policy >= 0.0) || std::abs(u_sbm + u_policy - 1.0) > 1e-9) {
        throw ValidationError("objective weights must be nonnegative and sum to 1");
    }
    if (k < 0 || k_min < 1 || (k_max != 0 && k_max < k_min)) {
        throw ValidationError("invalid cluster-count configuration");
    }
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty()) return path;
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).lexically_normal().string();
}

} // namespace

ordered_json json_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return io::round_sig(value);
}

namespace {

ordered_json num(double v) { return json_number(v); }

ordered_json named_values(const std::vector<std::string>& names,
                          const std::vector<int>& indices, const std::vector<double>& values) {
    ordered_json out = ordered_json::object();
    for (size_t a = 0; a < indices.size(); ++a) out[names[indices[a]]] = num(values[a]);
    return out;
}

} // namespace

RunConfig config_from_json(const std::string& text, const std::string& base_dir) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config json: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config json: expected an object");

    RunConfig cfg;
    cfg.panel_csv = resolve(base_dir, doc.value("panel", ""));
    cfg.roles_json = resolve(base_dir, doc.value("roles", ""));
    cfg.policies_json = resolve(base_dir, doc.value("policies", ""));
    cfg.epsilon = doc.value("epsilon", 0.01);
    cfg.u_sbm = doc.value("u_sbm", 0.5);
    cfg.u_policy = doc.value("u_policy", 0.5);
    cfg.weight_rule = sbm::weight_rule_from_string(doc.value("weight_rule", "max"));
    cfg.k = doc.value("k", 0);
    if (doc.contains("k_range")) {
        const auto& kr = doc["k_range"];
        if (!kr.is_array() || kr.size() != 2) {
            throw ValidationError("config json: k_range must be [min, max]");
        }
        cfg.k_min = kr[0].get<int>();
        cfg.k_max = kr[1].get<int>();
    }
    cfg.seed = doc.value("seed", 42u);
    cfg.out_dir = resolve(base_dir, doc.value("out_dir", ""));
    cfg.absolute_correlation = doc.value("absolute_correlation", false);
    cfg.cluster_best_scenario = doc.value("cluster_best_scenario", false);
    if (doc.contains("reciprocal")) {
        for (const auto& name : doc["reciprocal"]) {
            cfg.reciprocal_columns.push_back(name.get<std::string>());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return config_from_json(io::read_file(path), fs::path(path).parent_path().string());
}

ordered_json assessment_to_json(const DmuPanel& panel, const sbm::SbmAssessment& a) {
    std::vector<std::string> names;
    for (int j = 0; j < panel.variable_count(); ++j) names.push_back(panel.variables()[j].name);

    ordered_json rec = ordered_json::object();
    rec["dmu"] = a.dmu_id;
    rec["epsilon"] = num(a.epsilon);
    rec["gamma"] = num(a.gamma);
    rec["gamma_lower"] = num(a.gamma_lower);
    rec["gamma_upper"] = num(a.gamma_upper);
    rec["eta"] = num(a.eta);
    rec["eta_finite"] = std::isfinite(a.eta);
    rec["objective"] = num(a.objective);
    rec["slack_input"] = named_values(names, panel.input_indices(), a.input_slacks);
    rec["slack_output"] = named_values(names, panel.output_indices(), a.output_slacks);
    rec["target_input"] = named_values(names, panel.input_indices(), a.target_inputs);
    rec["target_output"] = named_values(names, panel.output_indices(), a.target_outputs);
    rec["tape_inner_input"] = named_values(names, panel.input_indices(), a.inner_inputs);
    rec["tape_inner_output"] = named_values(names, panel.output_indices(), a.inner_outputs);
    rec["tape_outer_input"] = named_values(names, panel.input_indices(), a.outer_inputs);
    rec["tape_outer_output"] = named_values(names, panel.output_indices(), a.outer_outputs);
    return rec;
}

ordered_json solution_to_json(const DmuPanel& panel, const hybrid::HybridSolution& sol) {
    std::vector<std::string> names;
    for (int j = 0; j < panel.variable_count(); ++j) names.push_back(panel.variables()[j].name);

    ordered_json rec = ordered_json::object();
    rec["dmu"] = sol.dmu_id;
    const auto& a = sol.assessment;
    rec["gamma"] = num(a.gamma);
    rec["gamma_lower"] = num(a.gamma_lower);
    rec["gamma_upper"] = num(a.gamma_upper);
    rec["eta"] = num(a.eta);
    rec["eta_finite"] = std::isfinite(a.eta);
    rec["z"] = num(sol.z);
    rec["xi"] = num(sol.xi);
    rec["dual_objective"] = num(sol.dual_objective);
    rec["f_min"] = num(sol.scaling.f_min);
    rec["f_max"] = num(sol.scaling.f_max);
    rec["scaling_degenerate"] = sol.scaling.degenerate;

    ordered_json weights = ordered_json::object();
    for (int j = 0; j < panel.variable_count(); ++j) {
        weights[names[j]] = num(sol.variable_weights[j]);
    }
    rec["weights"] = weights;

    rec["slack_input"] = named_values(names, panel.input_indices(), a.input_slacks);
    rec["slack_output"] = named_values(names, panel.output_indices(), a.output_slacks);
    rec["target_input"] = named_values(names, panel.input_indices(), a.target_inputs);
    rec["target_output"] = named_values(names, panel.output_indices(), a.target_outputs);
    rec["tape_inner_input"] = named_values(names, panel.input_indices(), a.inner_inputs);
    rec["tape_inner_output"] = named_values(names, panel.output_indices(), a.inner_outputs);
    rec["tape_outer_input"] = named_values(names, panel.input_indices(), a.outer_inputs);
    rec["tape_outer_output"] = named_values(names, panel.output_indices(), a.outer_outputs);
    return rec;
}

ordered_json cluster_to_json(const analytics::ClusterReport& rep,
                             const std::vector<std::string>& ids) {
    ordered_json c = ordered_json::object();
    c["k"] = rep.k;
    c["seed"] = rep.seed;
    c["inertia"] = num(rep.inertia);
    ordered_json assigns = ordered_json::object();
    for (size_t i = 0; i < ids.size(); ++i) assigns[ids[i]] = rep.assignments[i];
    c["assignments"] = assigns;
    c["sizes"] = rep.cluster_sizes;
    c["silhouette"] = rep.silhouette_valid ? num(rep.silhouette) : ordered_json(nullptr);
    c["davies_bouldin"] =
        rep.davies_bouldin_valid ? num(rep.davies_bouldin) : ordered_json(nullptr);
    c["calinski_harabasz"] =
        rep.calinski_harabasz_valid ? num(rep.calinski_harabasz) : ordered_json(nullptr);
    c["degenerate"] = rep.degenerate;
    ordered_json features = ordered_json::array();
    for (const auto& f : rep.features) {
        ordered_json fj = ordered_json::object();
        fj["feature"] = f.feature;
        ordered_json means = ordered_json::array();
        ordered_json stds = ordered_json::array();
        for (double m : f.cluster_mean) means.push_back(num(m));
        for (double s : f.cluster_std) stds.push_back(num(s));
        fj["cluster_mean"] = means;
        fj["cluster_std"] = stds;
        fj["f"] = num(f.anova.f);
        fj["f_capped"] = f.anova.capped;
        fj["p"] = num(f.anova.p);
        features.push_back(fj);
    }
    c["features"] = features;
    if (!rep.benchmark_per_cluster.empty()) {
        c["benchmarks"] = rep.benchmark_per_cluster;
        ordered_json means = ordered_json::array();
        for (double m : rep.mean_score_per_cluster) means.push_back(num(m));
        c["mean_gamma"] = means;
    }
    c["warnings"] = rep.warnings;
    return c;
}

namespace {

int pick_cluster_count(const RunConfig& cfg, const analytics::WeightFrontierMatrix& matrix,
                       ordered_json& section, std::vector<std::string>& warnings) {
    const int n = static_cast<int>(matrix.rows.size());
    if (cfg.k > 0) {
        if (cfg.k > n) {
            warnings.push_back("requested k=" + std::to_string(cfg.k) + " clipped to n=" +
                               std::to_string(n));
            return n;
        }
        return cfg.k;
    }
    const int hi = std::min(cfg.k_max > 0 ? cfg.k_max : 8, n);
    const int lo = std::min(cfg.k_min, hi);
    const auto curve = analytics::elbow(matrix, lo, hi, cfg.seed);
    ordered_json ej = ordered_json::object();
    ej["ks"] = curve.ks;
    ordered_json inertia = ordered_json::array();
    for (double v : curve.inertia) inertia.push_back(num(v));
    ej["inertia"] = inertia;
    ej["suggested_k"] = curve.suggested_k;
    ej["low_confidence"] = curve.low_confidence;
    section["elbow"] = ej;
    return curve.suggested_k;
}

} // namespace

Report run_pipeline(const RunConfig& cfg) {
    cfg.validate();

    DmuPanel panel = io::load_panel(cfg.panel_csv, cfg.roles_json);
    if (!cfg.reciprocal_columns.empty()) {
        panel = panel.with_reciprocal(cfg.reciprocal_columns);
    }
    const io::PolicyFile polfile = io::load_policies(cfg.policies_json);
    const bool abs_corr = cfg.absolute_correlation || polfile.absolute_correlation;

    Report report;
    ordered_json& doc = report.doc;

    ordered_json meta = ordered_json::object();
    meta["tool"] = "sbmopa";
    meta["panel"] = cfg.panel_csv;
    meta["roles"] = cfg.roles_json;
    meta["policies"] = cfg.policies_json;
    meta["epsilon"] = num(cfg.epsilon);
    meta["u_sbm"] = num(cfg.u_sbm);
    meta["u_policy"] = num(cfg.u_policy);
    meta["weight_rule"] = sbm::to_string(cfg.weight_rule);
    meta["seed"] = cfg.seed;
    meta["tolerance"] = num(lp::tolerance());
    meta["absolute_correlation"] = abs_corr;
    doc["meta"] = meta;

    ordered_json panel_j = ordered_json::object();
    panel_j["dmu_count"] = panel.dmu_count();
    ordered_json vars = ordered_json::array();
    for (const auto& v : panel.variables()) {
        ordered_json vj = ordered_json::object();
        vj["name"] = v.name;
        vj["role"] = v.role == VariableRole::Input ? "input" : "output";
        vj["unit"] = v.unit;
        vars.push_back(vj);
    }
    panel_j["variables"] = vars;
    const auto stats = panel.stats();
    ordered_json stats_j = ordered_json::array();
    for (int j = 0; j < panel.variable_count(); ++j) {
        ordered_json sj = ordered_json::object();
        sj["variable"] = panel.variables()[j].name;
        sj["min"] = num(stats[j].min);
        sj["max"] = num(stats[j].max);
        sj["mean"] = num(stats[j].mean);
        sj["std"] = num(stats[j].std_dev);
        stats_j.push_back(sj);
    }
    panel_j["stats"] = stats_j;
    doc["panel"] = panel_j;

    // policy ranking
    std::vector<scenario::RankedPolicy> ranked;
    std::vector<std::string> policy_names;
    ordered_json policies_j = ordered_json::array();
    for (const auto& def : polfile.policies) {
        std::vector<scenario::PearsonEntry> pearson_report;
        ranked.push_back(scenario::rank_by_pearson(panel, def, abs_corr, &pearson_report));
        policy_names.push_back(def.name);
        ordered_json pj = ordered_json::object();
        pj["name"] = def.name;
        if (!def.anchor.empty()) pj["anchor"] = def.anchor;
        if (!def.note.empty()) pj["note"] = def.note;
        ordered_json ranks = ordered_json::object();
        for (int j = 0; j < panel.variable_count(); ++j) {
            ranks[panel.variables()[j].name] = ranked.back().variable_ranks[j];
        }
        pj["ranks"] = ranks;
        if (!pearson_report.empty()) {
            ordered_json pearson_j = ordered_json::array();
            for (const auto& e : pearson_report) {
                ordered_json ej = ordered_json::object();
                ej["variable"] = e.variable;
                ej["coefficient"] = num(e.coefficient);
                ej["p_value"] = num(e.p_value);
                pearson_j.push_back(ej);
            }
            pj["pearson"] = pearson_j;
        }
        policies_j.push_back(pj);
    }
    doc["policies"] = policies_j;

    std::vector<scenario::ScenarioSpec> scenarios;
    if (polfile.all_permutations) {
        scenarios = scenario::enumerate_scenarios(policy_names);
    } else {
        scenarios = polfile.explicit_scenarios;
        std::set<std::string> ids;
        for (const auto& s : scenarios) {
            if (!ids.insert(s.id).second) {
                throw ValidationError("duplicate scenario id '" + s.id + "'");
            }
        }
    }

    hybrid::HybridConfig hcfg;
    hcfg.epsilon = cfg.epsilon;
    hcfg.u_sbm = cfg.u_sbm;
    hcfg.u_policy = cfg.u_policy;

    struct DmuBest {
        std::string scenario;
        double gamma = -1.0;
        std::vector<double> weights;
    };
    std::map<std::string, DmuBest> best;          // dmu -> best scenario
    std::map<std::string, std::map<std::string, double>> gamma_by_dmu;  // dmu -> scenario -> gamma

    ordered_json scenarios_j = ordered_json::array();
    for (const auto& spec : scenarios) {
        const auto set = scenario::to_ranking_set(spec, ranked);
        const auto result = hybrid::assess_scenario(panel, set, hcfg);

        ordered_json sj = ordered_json::object();
        sj["id"] = spec.id;
        sj["order"] = spec.policy_order;
        ordered_json tks = ordered_json::object();
        for (size_t k = 0; k < set.policy_names.size(); ++k) {
            tks[set.policy_names[k]] = set.policy_ranks[k];
        }
        sj["policy_ranks"] = tks;

        ordered_json results = ordered_json::array();
        std::vector<double> etas;
        std::vector<std::string> eta_ids;
        std::vector<std::string> eta_excluded;
        analytics::WeightFrontierMatrix matrix;
        for (int j = 0; j < panel.variable_count(); ++j) {
            matrix.feature_names.push_back(panel.variables()[j].name);
        }
        std::vector<double> gammas;
        for (const auto& sol : result.solutions) {
            ordered_json rec = solution_to_json(panel, sol);
            rec["replay_violations"] = hybrid::replay_constraints(panel, set, hcfg, sol);
            results.push_back(std::move(rec));
            if (std::isfinite(sol.assessment.eta)) {
                etas.push_back(sol.assessment.eta);
                eta_ids.push_back(sol.dmu_id);
            } else {
                eta_excluded.push_back(sol.dmu_id);
            }
            matrix.dmu_ids.push_back(sol.dmu_id);
            matrix.rows.push_back(sol.variable_weights);
            gammas.push_back(sol.assessment.gamma);

            auto& b = best[sol.dmu_id];
            auto& by_dmu = gamma_by_dmu[sol.dmu_id];
            by_dmu[spec.id] = sol.assessment.gamma;
            // argmax gamma; exact ties resolved by lexicographically smaller id
            if (b.scenario.empty() || sol.assessment.gamma > b.gamma ||
                (sol.assessment.gamma == b.gamma && spec.id < b.scenario)) {
                b.scenario = spec.id;
                b.gamma = sol.assessment.gamma;
                b.weights = sol.variable_weights;
            }
        }
        sj["results"] = results;
        ordered_json failures = ordered_json::array();
        for (const auto& [dmu, reason] : result.failures) {
            ordered_json fj = ordered_json::object();
            fj["dmu"] = dmu;
            fj["reason"] = reason;
            failures.push_back(fj);
        }
        sj["failures"] = failures;

        if (!etas.empty()) {
            const auto sens = analytics::sensitivity_stats(etas);
            ordered_json sens_j = ordered_json::object();
            sens_j["mean"] = num(sens.mean);
            sens_j["std"] = num(sens.std_dev);
            ordered_json flagged = ordered_json::array();
            for (int idx : sens.flagged) flagged.push_back(eta_ids[idx]);
            sens_j["flagged"] = flagged;
            sens_j["excluded"] = eta_excluded;
            sj["sensitivity"] = sens_j;
        } else {
            sj["sensitivity"] = nullptr;
        }

        if (!matrix.rows.empty()) {
            matrix.require_rows_sum_to_one(1e-6);
            std::vector<std::string> warnings;
            const int k = pick_cluster_count(cfg, matrix, sj, warnings);
            auto rep = analytics::kmeans(matrix, k, cfg.seed, &gammas);
            for (const auto& w : warnings) rep.warnings.push_back(w);
            sj["cluster"] = cluster_to_json(rep, matrix.dmu_ids);
        } else {
            sj["cluster"] = nullptr;
        }
        scenarios_j.push_back(sj);
    }
    doc["scenarios"] = scenarios_j;

    // cross-scenario comparison
    ordered_json comparison = ordered_json::object();
    ordered_json optimal = ordered_json::array();
    for (const auto& [dmu, b] : best) {
        ordered_json oj = ordered_json::object();
        oj["dmu"] = dmu;
        oj["scenario"] = b.scenario;
        oj["gamma"] = num(b.gamma);
        optimal.push_back(oj);
    }
    comparison["optimal_scenario"] = optimal;
    ordered_json means = ordered_json::array();
    for (const auto& spec : scenarios) {
        double total = 0.0;
        int count = 0;
        for (const auto& [dmu, by_dmu] : gamma_by_dmu) {
            (void)dmu;
            const auto it = by_dmu.find(spec.id);
            if (it != by_dmu.end()) {
                total += it->second;
                ++count;
            }
        }
        ordered_json mj = ordered_json::object();
        mj["scenario"] = spec.id;
        mj["mean_gamma"] = count > 0 ? num(total / count) : ordered_json(nullptr);
        mj["dmu_count"] = count;
        means.push_back(mj);
    }
    comparison["mean_gamma_per_scenario"] = means;

    if (cfg.cluster_best_scenario && !best.empty()) {
        analytics::WeightFrontierMatrix bm;
        for (int j = 0; j < panel.variable_count(); ++j) {
            bm.feature_names.push_back(panel.variables()[j].name);
        }
        std::vector<double> bg;
        std::vector<std::string> scen_of;
        for (const auto& [dmu, b] : best) {
            if (b.weights.empty()) continue;
            bm.dmu_ids.push_back(dmu);
            bm.rows.push_back(b.weights);
            bg.push_back(b.gamma);
            scen_of.push_back(b.scenario);
        }
        if (!bm.rows.empty()) {
            ordered_json section = ordered_json::object();
            std::vector<std::string> warnings;
            const int k = pick_cluster_count(cfg, bm, section, warnings);
            auto rep = analytics::kmeans(bm, k, cfg.seed, &bg);
            for (const auto& w : warnings) rep.warnings.push_back(w);
            section["cluster"] = cluster_to_json(rep, bm.dmu_ids);
            ordered_json from = ordered_json::object();
            for (size_t i = 0; i < bm.dmu_ids.size(); ++i) from[bm.dmu_ids[i]] = scen_of[i];
            section["scenario_of_frontier"] = from;
            comparison["best_scenario_cluster"] = section;
        }
    }
    doc["comparison"] = comparison;

    // baseline: rule-weight assessment, no policy preference
    ordered_json baseline = ordered_json::object();
    baseline["weight_rule"] = sbm::to_string(cfg.weight_rule);
    ordered_json base_results = ordered_json::array();
    {
        const auto w = sbm::default_weights(panel, cfg.weight_rule);
        std::vector<int> order(panel.dmu_count());
        for (int i = 0; i < panel.dmu_count(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return panel.dmu_ids()[a] < panel.dmu_ids()[b];
        });
        for (int idx : order) {
            ordered_json bj = ordered_json::object();
            bj["dmu"] = panel.dmu_ids()[idx];
            try {
                const auto a = sbm::assess(panel, w, cfg.epsilon, idx);
                bj["gamma"] = num(a.gamma);
                bj["eta"] = num(a.eta);
                bj["eta_finite"] = std::isfinite(a.eta);
            } catch (const std::exception& e) {
                bj["error"] = e.what();
            }
            base_results.push_back(bj);
        }
    }
    baseline["results"] = base_results;
    doc["baseline"] = baseline;

    return report;
}

std::string Report::to_json() const { return doc.dump(2) + "\n"; }

io::CsvTable Report::efficiency_table() const {
    io::CsvTable t;
    t.header = {"scenario", "dmu", "gamma", "gamma_lower", "gamma_upper", "eta", "z", "xi"};
    for (const auto& sj : doc.at("scenarios")) {
        for (const auto& rec : sj.at("results")) {
            auto cell = [&](const char* key) {
                const auto& v = rec.at(key);
                return v.is_null() ? std::string("") : io::format_number(v.get<double>());
            };
            t.rows.push_back({sj.at("id").get<std::string>(), rec.at("dmu").get<std::string>(),
                              cell("gamma"), cell("gamma_lower"), cell("gamma_upper"),
                              cell("eta"), cell("z"), cell("xi")});
        }
    }
    return t;
}

io::CsvTable Report::weights_table() const {
    io::CsvTable t;
    std::vector<std::string> names;
    for (const auto& v : doc.at("panel").at("variables")) {
        names.push_back(v.at("name").get<std::string>());
    }
    t.header = {"scenario", "dmu", "cluster"};
    for (const auto& n : names) t.header.push_back("W_" + n);
    t.header.push_back("gamma");
    t.header.push_back("eta");
    for (const auto& sj : doc.at("scenarios")) {
        const auto& cluster = sj.at("cluster");
        for (const auto& rec : sj.at("results")) {
            const std::string dmu = rec.at("dmu").get<std::string>();
            std::vector<std::string> row = {sj.at("id").get<std::string>(), dmu};
            if (cluster.is_object() && cluster.at("assignments").contains(dmu)) {
                row.push_back(std::to_string(cluster.at("assignments").at(dmu).get<int>()));
            } else {
                row.push_back("");
            }
            for (const auto& n : names) {
                row.push_back(io::format_number(rec.at("weights").at(n).get<double>()));
            }
            const auto& g = rec.at("gamma");
            row.push_back(g.is_null() ? "" : io::format_number(g.get<double>()));
            const auto& e = rec.at("eta");
            row.push_back(e.is_null() ? "" : io::format_number(e.get<double>()));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

io::CsvTable Report::comparison_table() const {
    io::CsvTable t;
    std::vector<std::string> scenario_ids;
    for (const auto& sj : doc.at("scenarios")) {
        scenario_ids.push_back(sj.at("id").get<std::string>());
    }
    t.header = {"dmu", "optimal_scenario", "optimal_gamma"};
    for (const auto& id : scenario_ids) t.header.push_back("gamma_" + id);

    std::map<std::string, std::map<std::string, std::string>> gamma_cells;
    for (const auto& sj : doc.at("scenarios")) {
        for (const auto& rec : sj.at("results")) {
            const auto& g = rec.at("gamma");
            gamma_cells[rec.at("dmu").get<std::string>()][sj.at("id").get<std::string>()] =
                g.is_null() ? "" : io::format_number(g.get<double>());
        }
    }
    for (const auto& oj : doc.at("comparison").at("optimal_scenario")) {
        const std::string dmu = oj.at("dmu").get<std::string>();
        std::vector<std::string> row = {dmu, oj.at("scenario").get<std::string>(),
                                        oj.at("gamma").is_null()
                                            ? ""
                                            : io::format_number(oj.at("gamma").get<double>())};
        for (const auto& id : scenario_ids) {
            row.push_back(gamma_cells[dmu].count(id) ? gamma_cells[dmu][id] : "");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void Report::write(const std::string& out_dir) const {
    fs::create_directories(out_dir);
    io::write_file((fs::path(out_dir) / "report.json").string(), to_json());
    io::write_file((fs::path(out_dir) / "efficiency.csv").string(),
                   io::to_csv(efficiency_table()));
    io::write_file((fs::path(out_dir) / "weights.csv").string(), io::to_csv(weights_table()));
    io::write_file((fs::path(out_dir) / "scenario_comparison.csv").string(),
                   io::to_csv(comparison_table()));
}

} // namespace sbmopa::pipeline
