#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbmopa/analytics.hpp"
#include "sbmopa/emissions.hpp"
#include "sbmopa/errors.hpp"
#include "sbmopa/hybrid.hpp"
#include "sbmopa/io.hpp"
#include "sbmopa/opa.hpp"
#include "sbmopa/pipeline.hpp"
#include "sbmopa/sbm.hpp"
#include "sbmopa/scenario.hpp"

using namespace sbmopa;
using nlohmann::ordered_json;

namespace {

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        io::write_file(out_path, text);
    }
}

void emit_json(const ordered_json& doc, const std::string& out_path) {
    emit_text(doc.dump(2) + "\n", out_path);
}

void emit_csv(const io::CsvTable& table, const std::string& out_path) {
    emit_text(io::to_csv(table), out_path);
}

struct CommonOpts {
    std::string panel;
    std::string roles;
    std::string out;
    std::string format = "json";
    double epsilon = 0.01;
    std::vector<std::string> reciprocal;
};

DmuPanel load_panel_opts(const CommonOpts& o) {
    DmuPanel panel = io::load_panel(o.panel, o.roles);
    if (!o.reciprocal.empty()) panel = panel.with_reciprocal(o.reciprocal);
    return panel;
}

void add_panel_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--panel", o.panel, "panel csv (dmu_id + variable columns)")->required();
    cmd->add_option("--roles", o.roles, "roles json labeling each column input/output")
        ->required();
    cmd->add_option("--reciprocal", o.reciprocal,
                    "columns to transform as 1/x before assessment")
        ->delimiter(',');
}

void add_out_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::pair<int, int> parse_k_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("--k-range expects LO:HI");
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sbmopa: slack-based efficiency assessment under ordinal policy preferences"};
    app.require_subcommand(1);

    // ---- opa solve ----
    auto* opa_cmd = app.add_subcommand("opa", "ordinal-priority weight derivation");
    auto* opa_solve = opa_cmd->add_subcommand("solve", "solve a ranking instance");
    struct {
        std::string ranking;
        CommonOpts common;
    } opa_opts;
    opa_solve->add_option("--ranking", opa_opts.ranking, "ranking instance json")->required();
    add_out_flags(opa_solve, opa_opts.common);

    // ---- sbm assess ----
    auto* sbm_cmd = app.add_subcommand("sbm", "slack-based efficiency model");
    auto* sbm_assess = sbm_cmd->add_subcommand("assess", "assess units with rule weights");
    struct {
        CommonOpts common;
        std::string rule = "max";
        std::string dmu;
    } sbm_opts;
    add_panel_flags(sbm_assess, sbm_opts.common);
    sbm_assess->add_option("--weight-rule", sbm_opts.rule, "min, max or avg")
        ->check(CLI::IsMember({"min", "max", "avg"}));
    sbm_assess->add_option("--epsilon", sbm_opts.common.epsilon, "error degree (default 0.01)");
    sbm_assess->add_option("--dmu", sbm_opts.dmu, "assess a single unit by id");
    add_out_flags(sbm_assess, sbm_opts.common);

    // ---- hybrid run ----
    auto* hybrid_cmd = app.add_subcommand("hybrid", "joint preference-efficiency model");
    auto* hybrid_run = hybrid_cmd->add_subcommand("run", "solve one scenario for all units");
    struct {
        CommonOpts common;
        std::string policies;
        std::string scenario_id;
        double us = 0.5, up = 0.5;
        std::string dmu;
    } hy_opts;
    add_panel_flags(hybrid_run, hy_opts.common);
    hybrid_run->add_option("--policies", hy_opts.policies, "policy/scenario json")->required();
    hybrid_run->add_option("--scenario", hy_opts.scenario_id,
                           "scenario id (default: the first one)");
    hybrid_run->add_option("--epsilon", hy_opts.common.epsilon, "error degree (default 0.01)");
    hybrid_run->add_option("--us", hy_opts.us, "efficiency objective weight U_S");
    hybrid_run->add_option("--up", hy_opts.up, "preference objective weight U_P");
    hybrid_run->add_option("--dmu", hy_opts.dmu, "solve a single unit by id");
    add_out_flags(hybrid_run, hy_opts.common);

    // ---- scenarios list|run ----
    auto* scen_cmd = app.add_subcommand("scenarios", "policy preference scenarios");
    auto* scen_list = scen_cmd->add_subcommand("list", "list scenario ids and orderings");
    struct {
        std::string policies;
        CommonOpts common;
    } sl_opts;
    scen_list->add_option("--policies", sl_opts.policies, "policy/scenario json")->required();
    add_out_flags(scen_list, sl_opts.common);

    auto* scen_run = scen_cmd->add_subcommand("run", "full pipeline from flags");
    struct {
        CommonOpts common;
        std::string policies;
        double us = 0.5, up = 0.5;
        int k = 0;
        std::string k_range;
        unsigned seed = 42;
        bool best_cluster = false;
    } sr_opts;
    add_panel_flags(scen_run, sr_opts.common);
    scen_run->add_option("--policies", sr_opts.policies, "policy/scenario json")->required();
    scen_run->add_option("--epsilon", sr_opts.common.epsilon, "error degree (default 0.01)");
    scen_run->add_option("--us", sr_opts.us, "efficiency objective weight U_S");
    scen_run->add_option("--up", sr_opts.up, "preference objective weight U_P");
    scen_run->add_option("--k", sr_opts.k, "fixed cluster count (0 = elbow)");
    scen_run->add_option("--k-range", sr_opts.k_range, "elbow search range LO:HI");
    scen_run->add_option("--seed", sr_opts.seed, "clustering seed");
    scen_run->add_flag("--cluster-best-scenario", sr_opts.best_cluster,
                       "also cluster best-scenario weight frontiers");
    scen_run->add_option("--out", sr_opts.common.out, "output directory")->required();

    // ---- emissions compute ----
    auto* emis_cmd = app.add_subcommand("emissions", "fossil-fuel CO2 accounting");
    auto* emis_compute = emis_cmd->add_subcommand("compute", "per-unit CO2 from consumption");
    struct {
        std::string factors;
        std::string consumption;
        CommonOpts common;
    } em_opts;
    emis_compute->add_option("--factors", em_opts.factors, "factor csv: fuel,ncv,cef,cof")
        ->required();
    emis_compute
        ->add_option("--consumption", em_opts.consumption, "consumption csv: dmu_id,<fuels>")
        ->required();
    add_out_flags(emis_compute, em_opts.common);

    // ---- cluster ----
    auto* cluster_cmd = app.add_subcommand("cluster", "k-means over a weight matrix csv");
    struct {
        std::string matrix;
        std::string scenario;
        int k = 0;
        std::string k_range;
        unsigned seed = 42;
        bool standardize = false;
        CommonOpts common;
    } cl_opts;
    cluster_cmd->add_option("--matrix", cl_opts.matrix,
                            "csv: dmu_id + numeric feature columns (optional gamma column "
                            "used for benchmarks); a report weights.csv also works")
        ->required();
    cluster_cmd->add_option("--scenario", cl_opts.scenario,
                            "scenario to filter when the matrix carries a scenario column");
    cluster_cmd->add_option("--k", cl_opts.k, "cluster count");
    cluster_cmd->add_option("--k-range", cl_opts.k_range, "elbow search range LO:HI");
    cluster_cmd->add_option("--seed", cl_opts.seed, "seed");
    cluster_cmd->add_flag("--standardize", cl_opts.standardize, "z-score features first");
    add_out_flags(cluster_cmd, cl_opts.common);

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "full pipeline from a config file");
    struct {
        std::string config;
        std::string out;
    } rp_opts;
    report_cmd->add_option("--config", rp_opts.config, "run config json")->required();
    report_cmd->add_option("--out", rp_opts.out, "output directory (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (opa_solve->parsed()) {
            const auto inst = opa::ranking_from_json(io::read_file(opa_opts.ranking));
            const auto sol = opa::solve_opa(inst);
            if (opa_opts.common.format == "csv") {
                io::CsvTable t;
                t.header = {"item", "weight"};
                for (size_t j = 0; j < sol.items.size(); ++j) {
                    t.rows.push_back({sol.items[j], io::format_number(sol.aggregated[j])});
                }
                emit_csv(t, opa_opts.common.out);
            } else {
                ordered_json doc;
                doc["objective"] = pipeline::json_number(sol.objective);
                ordered_json agg = ordered_json::object();
                for (size_t j = 0; j < sol.items.size(); ++j) {
                    agg[sol.items[j]] = pipeline::json_number(sol.aggregated[j]);
                }
                doc["aggregated"] = agg;
                ordered_json experts = ordered_json::array();
                for (const auto& row : sol.weights) {
                    ordered_json ej = ordered_json::object();
                    for (size_t j = 0; j < sol.items.size(); ++j) {
                        ej[sol.items[j]] = pipeline::json_number(row[j]);
                    }
                    experts.push_back(ej);
                }
                doc["per_expert"] = experts;
                emit_json(doc, opa_opts.common.out);
            }
        } else if (sbm_assess->parsed()) {
            const DmuPanel panel = load_panel_opts(sbm_opts.common);
            const auto weights =
                sbm::default_weights(panel, sbm::weight_rule_from_string(sbm_opts.rule));
            std::vector<int> targets;
            if (sbm_opts.dmu.empty()) {
                for (int i = 0; i < panel.dmu_count(); ++i) targets.push_back(i);
            } else {
                const int idx = panel.find_dmu(sbm_opts.dmu);
                if (idx < 0) throw ValidationError("no dmu named '" + sbm_opts.dmu + "'");
                targets.push_back(idx);
            }
            ordered_json docs = ordered_json::array();
            io::CsvTable t;
            t.header = {"dmu", "gamma", "gamma_lower", "gamma_upper", "eta", "objective"};
            for (int idx : targets) {
                const auto a = sbm::assess(panel, weights, sbm_opts.common.epsilon, idx);
                docs.push_back(pipeline::assessment_to_json(panel, a));
                t.rows.push_back({a.dmu_id, io::format_number(a.gamma),
                                  io::format_number(a.gamma_lower),
                                  io::format_number(a.gamma_upper), io::format_number(a.eta),
                                  io::format_number(a.objective)});
            }
            if (sbm_opts.common.format == "csv") emit_csv(t, sbm_opts.common.out);
            else emit_json(docs, sbm_opts.common.out);
        } else if (hybrid_run->parsed()) {
            const DmuPanel panel = load_panel_opts(hy_opts.common);
            const auto polfile = io::load_policies(hy_opts.policies);
            std::vector<scenario::RankedPolicy> ranked;
            std::vector<std::string> names;
            for (const auto& def : polfile.policies) {
                ranked.push_back(
                    scenario::rank_by_pearson(panel, def, polfile.absolute_correlation));
                names.push_back(def.name);
            }
            const auto scenarios = polfile.all_permutations
                                       ? scenario::enumerate_scenarios(names)
                                       : polfile.explicit_scenarios;
            const scenario::ScenarioSpec* chosen = nullptr;
            for (const auto& s : scenarios) {
                if (hy_opts.scenario_id.empty() || s.id == hy_opts.scenario_id) {
                    chosen = &s;
                    break;
                }
            }
            if (!chosen) {
                throw ValidationError("no scenario named '" + hy_opts.scenario_id + "'");
            }
            const auto set = scenario::to_ranking_set(*chosen, ranked);
            hybrid::HybridConfig hcfg;
            hcfg.epsilon = hy_opts.common.epsilon;
            hcfg.u_sbm = hy_opts.us;
            hcfg.u_policy = hy_opts.up;

            ordered_json doc = ordered_json::object();
            doc["scenario"] = chosen->id;
            doc["order"] = chosen->policy_order;
            ordered_json results = ordered_json::array();
            io::CsvTable t;
            t.header = {"dmu", "gamma", "eta", "z", "xi"};
            if (hy_opts.dmu.empty()) {
                const auto batch = hybrid::assess_scenario(panel, set, hcfg);
                for (const auto& sol : batch.solutions) {
                    results.push_back(pipeline::solution_to_json(panel, sol));
                    t.rows.push_back({sol.dmu_id, io::format_number(sol.assessment.gamma),
                                      io::format_number(sol.assessment.eta),
                                      io::format_number(sol.z), io::format_number(sol.xi)});
                }
                ordered_json failures = ordered_json::array();
                for (const auto& [dmu, reason] : batch.failures) {
                    ordered_json fj;
                    fj["dmu"] = dmu;
                    fj["reason"] = reason;
                    failures.push_back(fj);
                }
                doc["failures"] = failures;
            } else {
                const int idx = panel.find_dmu(hy_opts.dmu);
                if (idx < 0) throw ValidationError("no dmu named '" + hy_opts.dmu + "'");
                const auto sol = hybrid::solve_hybrid(panel, set, hcfg, idx);
                results.push_back(pipeline::solution_to_json(panel, sol));
                t.rows.push_back({sol.dmu_id, io::format_number(sol.assessment.gamma),
                                  io::format_number(sol.assessment.eta),
                                  io::format_number(sol.z), io::format_number(sol.xi)});
            }
            doc["results"] = results;
            if (hy_opts.common.format == "csv") emit_csv(t, hy_opts.common.out);
            else emit_json(doc, hy_opts.common.out);
        } else if (scen_list->parsed()) {
            const auto polfile = io::load_policies(sl_opts.policies);
            std::vector<std::string> names;
            for (const auto& def : polfile.policies) names.push_back(def.name);
            const auto scenarios = polfile.all_permutations
                                       ? scenario::enumerate_scenarios(names)
                                       : polfile.explicit_scenarios;
            if (sl_opts.common.format == "csv") {
                io::CsvTable t;
                t.header = {"id", "order"};
                for (const auto& s : scenarios) {
                    std::string order;
                    for (size_t i = 0; i < s.policy_order.size(); ++i) {
                        if (i) order += " > ";
                        order += s.policy_order[i];
                    }
                    t.rows.push_back({s.id, order});
                }
                emit_csv(t, sl_opts.common.out);
            } else {
                ordered_json doc = ordered_json::array();
                for (const auto& s : scenarios) {
                    ordered_json sj = ordered_json::object();
                    sj["id"] = s.id;
                    sj["order"] = s.policy_order;
                    doc.push_back(sj);
                }
                emit_json(doc, sl_opts.common.out);
            }
        } else if (scen_run->parsed()) {
            pipeline::RunConfig cfg;
            cfg.panel_csv = sr_opts.common.panel;
            cfg.roles_json = sr_opts.common.roles;
            cfg.policies_json = sr_opts.policies;
            cfg.epsilon = sr_opts.common.epsilon;
            cfg.u_sbm = sr_opts.us;
            cfg.u_policy = sr_opts.up;
            cfg.k = sr_opts.k;
            if (!sr_opts.k_range.empty()) {
                const auto [lo, hi] = parse_k_range(sr_opts.k_range);
                cfg.k_min = lo;
                cfg.k_max = hi;
            }
            cfg.seed = sr_opts.seed;
            cfg.out_dir = sr_opts.common.out;
            cfg.cluster_best_scenario = sr_opts.best_cluster;
            cfg.reciprocal_columns = sr_opts.common.reciprocal;
            const auto report = pipeline::run_pipeline(cfg);
            report.write(cfg.out_dir);
            std::cout << "report written to " << cfg.out_dir << "\n";
        } else if (emis_compute->parsed()) {
            const auto factors = io::load_fuel_factors(em_opts.factors);
            const auto consumption = io::load_consumption(em_opts.consumption);
            ordered_json doc = ordered_json::array();
            io::CsvTable t;
            t.header = {"dmu_id"};
            for (const auto& f : consumption.fuels) t.header.push_back(f);
            t.header.push_back("total_co2");
            for (size_t i = 0; i < consumption.dmu_ids.size(); ++i) {
                const auto res = emissions::compute_co2(consumption.rows[i], factors);
                ordered_json rj = ordered_json::object();
                rj["dmu"] = consumption.dmu_ids[i];
                ordered_json per = ordered_json::object();
                for (const auto& [fuel, ce] : res.per_fuel) {
                    per[fuel] = pipeline::json_number(ce);
                }
                rj["per_fuel"] = per;
                rj["total"] = pipeline::json_number(res.total);
                doc.push_back(rj);
                std::vector<std::string> row = {consumption.dmu_ids[i]};
                std::map<std::string, double> by_fuel(res.per_fuel.begin(), res.per_fuel.end());
                for (const auto& f : consumption.fuels) {
                    row.push_back(io::format_number(by_fuel.count(f) ? by_fuel[f] : 0.0));
                }
                row.push_back(io::format_number(res.total));
                t.rows.push_back(std::move(row));
            }
            if (em_opts.common.format == "csv") emit_csv(t, em_opts.common.out);
            else emit_json(doc, em_opts.common.out);
        } else if (cluster_cmd->parsed()) {
            const auto csv = io::read_csv(cl_opts.matrix);
            int scenario_col = -1;
            int id_col = 0;
            if (!csv.header.empty() && csv.header[0] == "scenario") {
                scenario_col = 0;
                id_col = 1;
            }
            if (static_cast<int>(csv.header.size()) <= id_col ||
                (csv.header[id_col] != "dmu_id" && csv.header[id_col] != "dmu")) {
                throw ValidationError(
                    "matrix csv: expected a leading 'dmu_id' column (optionally preceded "
                    "by 'scenario')");
            }
            std::string wanted = cl_opts.scenario;
            if (scenario_col >= 0 && wanted.empty()) {
                std::set<std::string> seen;
                for (const auto& row : csv.rows) seen.insert(row[scenario_col]);
                if (seen.size() > 1) {
                    throw ValidationError(
                        "matrix carries several scenarios; pick one with --scenario");
                }
                if (!seen.empty()) wanted = *seen.begin();
            }
            analytics::WeightFrontierMatrix matrix;
            std::vector<double> gammas;
            int gamma_col = -1;
            auto is_meta = [&](const std::string& name) {
                return name == "eta" || name == "cluster" || name == "scenario";
            };
            for (size_t c = id_col + 1; c < csv.header.size(); ++c) {
                if (csv.header[c] == "gamma") {
                    gamma_col = static_cast<int>(c);
                } else if (!is_meta(csv.header[c])) {
                    matrix.feature_names.push_back(csv.header[c]);
                }
            }
            for (size_t r = 0; r < csv.rows.size(); ++r) {
                if (scenario_col >= 0 && csv.rows[r][scenario_col] != wanted) continue;
                matrix.dmu_ids.push_back(csv.rows[r][id_col]);
                std::vector<double> row;
                for (size_t c = id_col + 1; c < csv.header.size(); ++c) {
                    if (csv.header[c] == "gamma" || is_meta(csv.header[c])) continue;
                    row.push_back(io::parse_number(csv.rows[r][c],
                                                   "row " + std::to_string(r + 2) + ", column '" +
                                                       csv.header[c] + "'"));
                }
                matrix.rows.push_back(std::move(row));
                if (gamma_col >= 0) {
                    gammas.push_back(io::parse_number(csv.rows[r][gamma_col],
                                                      "row " + std::to_string(r + 2) +
                                                          ", column 'gamma'"));
                }
            }
            if (matrix.rows.empty()) {
                throw ValidationError(wanted.empty() ? "matrix csv has no rows"
                                                     : "no rows for scenario '" + wanted + "'");
            }
            ordered_json doc = ordered_json::object();
            int k = cl_opts.k;
            if (k == 0) {
                const auto [lo, hi] = cl_opts.k_range.empty()
                                          ? std::pair<int, int>{1, std::min<int>(
                                                                       8, matrix.rows.size())}
                                          : parse_k_range(cl_opts.k_range);
                const auto curve = analytics::elbow(matrix, lo, hi, cl_opts.seed,
                                                    cl_opts.standardize);
                ordered_json ej = ordered_json::object();
                ej["ks"] = curve.ks;
                ordered_json inertia = ordered_json::array();
                for (double v : curve.inertia) inertia.push_back(pipeline::json_number(v));
                ej["inertia"] = inertia;
                ej["suggested_k"] = curve.suggested_k;
                ej["low_confidence"] = curve.low_confidence;
                doc["elbow"] = ej;
                k = curve.suggested_k;
            }
            const auto rep = analytics::kmeans(matrix, k, cl_opts.seed,
                                               gammas.empty() ? nullptr : &gammas,
                                               cl_opts.standardize);
            doc["cluster"] = pipeline::cluster_to_json(rep, matrix.dmu_ids);
            if (cl_opts.common.format == "csv") {
                io::CsvTable t;
                t.header = {"dmu_id", "cluster"};
                for (size_t i = 0; i < matrix.dmu_ids.size(); ++i) {
                    t.rows.push_back(
                        {matrix.dmu_ids[i], std::to_string(rep.assignments[i])});
                }
                emit_csv(t, cl_opts.common.out);
            } else {
                emit_json(doc, cl_opts.common.out);
            }
        } else if (report_cmd->parsed()) {
            pipeline::RunConfig cfg = pipeline::load_config(rp_opts.config);
            if (!rp_opts.out.empty()) cfg.out_dir = rp_opts.out;
            if (cfg.out_dir.empty()) {
                throw ValidationError("no output directory (set out_dir in the config or --out)");
            }
            const auto report = pipeline::run_pipeline(cfg);
            report.write(cfg.out_dir);
            std::cout << "report written to " << cfg.out_dir << "\n";
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
