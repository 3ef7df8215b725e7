#include "sbmopa/hybrid.hpp"

#include <cmath>

#include "doctest.h"
#include "sbmopa/errors.hpp"
#include "sbmopa/opa.hpp"
#include "test_support.hpp"

using namespace sbmopa;
using hybrid::HybridConfig;
using scenario::PolicyRankingSet;
using test_support::Rng;

namespace {

DmuPanel toy_panel() {
    return DmuPanel({"A", "B"},
                    {{"x", VariableRole::Input, ""}, {"y", VariableRole::Output, ""}},
                    {{1.0, 2.0}, {2.0, 1.0}});
}

PolicyRankingSet one_policy_set(const std::string& scenario_id = "S1") {
    PolicyRankingSet set;
    set.scenario_id = scenario_id;
    set.variables = {"x", "y"};
    set.policy_names = {"P1"};
    set.policy_ranks = {1};
    set.variable_ranks = {{1, 2}};
    return set;
}

PolicyRankingSet random_ranking_set(Rng& rng, const DmuPanel& panel, int npol) {
    PolicyRankingSet set;
    set.scenario_id = "S1";
    for (const auto& v : panel.variables()) set.variables.push_back(v.name);
    const auto tks = test_support::random_rank_vector(rng, npol);
    for (int k = 0; k < npol; ++k) {
        set.policy_names.push_back("P" + std::to_string(k + 1));
        set.policy_ranks.push_back(tks[k]);
        set.variable_ranks.push_back(
            test_support::random_rank_vector(rng, panel.variable_count()));
    }
    return set;
}

} // namespace

TEST_CASE("hybrid: payoff table bounds") {
    const DmuPanel p = toy_panel();
    const auto scale = hybrid::payoff_table(p, one_policy_set(), 0.01, 1);
    CHECK(scale.f_min <= scale.f_max + 1e-9);
    CHECK(scale.f_min >= -1e-9);  // the efficiency objective is nonnegative here

    Rng rng(41001);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 1 + rng.below(6);
        const int r = 1 + rng.below(2);
        const int s = 1 + rng.below(2);
        const DmuPanel q = test_support::random_panel(rng, n, r, s);
        const auto set = random_ranking_set(rng, q, 1 + rng.below(3));
        const auto sc = hybrid::payoff_table(q, set, 0.01, rng.below(n));
        CHECK(sc.f_min <= sc.f_max + 1e-9);
    }
}

TEST_CASE("hybrid: pure preference weight recovers the rank LP solution") {
    const DmuPanel p = toy_panel();
    HybridConfig cfg;
    cfg.epsilon = 0.0;
    cfg.u_sbm = 0.0;
    cfg.u_policy = 1.0;
    const auto sol = hybrid::solve_hybrid(p, one_policy_set(), cfg, 0);

    opa::RankingInstance inst;
    inst.items = {"x", "y"};
    inst.experts.push_back(opa::ExpertRanking{1, {1, 2}});
    const auto pure = opa::solve_opa(inst);

    REQUIRE(sol.policy_weights.size() == 1);
    CHECK(sol.policy_weights[0][0] == doctest::Approx(pure.weights[0][0]).epsilon(1e-6));
    CHECK(sol.policy_weights[0][1] == doctest::Approx(pure.weights[0][1]).epsilon(1e-6));
    CHECK(sol.z == doctest::Approx(pure.objective).epsilon(1e-7));
    CHECK(sol.xi == doctest::Approx(pure.objective).epsilon(1e-7));  // U_P = 1

    // Two-policy variant against the matching two-expert instance.
    Rng rng(41002);
    const DmuPanel q = test_support::random_panel(rng, 4, 2, 2);
    PolicyRankingSet set;
    set.scenario_id = "S1";
    for (const auto& v : q.variables()) set.variables.push_back(v.name);
    set.policy_names = {"P1", "P2"};
    set.policy_ranks = {1, 2};
    set.variable_ranks = {{1, 2, 3, 4}, {2, 1, 4, 3}};
    const auto sol2 = hybrid::solve_hybrid(q, set, cfg, 2);

    opa::RankingInstance inst2;
    inst2.items = set.variables;
    inst2.experts.push_back(opa::ExpertRanking{1, set.variable_ranks[0]});
    inst2.experts.push_back(opa::ExpertRanking{2, set.variable_ranks[1]});
    const auto pure2 = opa::solve_opa(inst2);
    for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 4; ++j) {
            CHECK(sol2.policy_weights[k][j] ==
                  doctest::Approx(pure2.weights[k][j]).epsilon(1e-6));
        }
    }
    CHECK(sol2.xi == doctest::Approx(pure2.objective).epsilon(1e-7));
}

TEST_CASE("hybrid: weight-link rows hold at the solution") {
    const DmuPanel p = toy_panel();
    HybridConfig cfg;
    cfg.epsilon = 0.01;
    const auto sol = hybrid::solve_hybrid(p, one_policy_set(), cfg, 1);
    // v + theta >= W_x / max(x); u + sigma >= W_y / min(y)
    CHECK(sol.input_price[0] + sol.input_cap_dual[0] >=
          sol.variable_weights[0] / 2.0 - 1e-7);
    CHECK(sol.output_price[0] + sol.output_floor_dual[0] >=
          sol.variable_weights[1] / 1.0 - 1e-7);
    const auto violations = hybrid::replay_constraints(p, one_policy_set(), cfg, sol);
    CHECK(violations.empty());
}

TEST_CASE("hybrid: constraint replay across scenarios and random panels") {
    Rng rng(41003);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + rng.below(4);
        const DmuPanel p = test_support::random_panel(rng, n, 1 + rng.below(2), 1 + rng.below(2));
        const auto set = random_ranking_set(rng, p, 1 + rng.below(3));
        HybridConfig cfg;
        cfg.epsilon = trial % 2 == 0 ? 0.0 : 0.01;
        const int dmu = rng.below(n);
        const auto sol = hybrid::solve_hybrid(p, set, cfg, dmu);

        const auto violations = hybrid::replay_constraints(p, set, cfg, sol);
        for (const auto& v : violations) MESSAGE(v);
        CHECK(violations.empty());

        // invariants: weight normalization, preference level bounds,
        // scalarization inequalities
        double total = 0.0;
        for (const auto& pw : sol.policy_weights) {
            for (double w : pw) total += w;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
        double wsum = 0.0;
        for (double w : sol.variable_weights) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(sol.z >= -1e-9);
        CHECK(sol.z <= 1.0 + 1e-9);
        CHECK(sol.xi <= cfg.u_policy * sol.z + 1e-7);
        if (!sol.scaling.degenerate) {
            const double f_trans = (sol.scaling.f_max - sol.dual_objective) /
                                   (sol.scaling.f_max - sol.scaling.f_min);
            CHECK(sol.xi <= cfg.u_sbm * f_trans + 1e-7);
        }
    }
}

TEST_CASE("hybrid: scenario batch") {
    const DmuPanel p = toy_panel();
    HybridConfig cfg;
    cfg.epsilon = 0.0;
    const auto result = hybrid::assess_scenario(p, one_policy_set(), cfg);
    REQUIRE(result.solutions.size() == 2);
    CHECK(result.failures.empty());
    CHECK(result.solutions[0].dmu_id == "A");
    CHECK(result.solutions[1].dmu_id == "B");
    // Undominated unit reaches the frontier, dominated one does not.
    CHECK(result.solutions[0].assessment.gamma == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.solutions[1].assessment.gamma < 1.0 - 1e-6);

    // Single-unit panel sits on its own frontier.
    const DmuPanel solo({"only"},
                        {{"x", VariableRole::Input, ""}, {"y", VariableRole::Output, ""}},
                        {{2.0, 3.0}});
    PolicyRankingSet set = one_policy_set();
    const auto solo_result = hybrid::assess_scenario(solo, set, cfg);
    REQUIRE(solo_result.solutions.size() == 1);
    CHECK(solo_result.solutions[0].assessment.gamma == doctest::Approx(1.0).epsilon(1e-9));

    // Oversized error degree: the downstream assessment fails per unit, the
    // batch itself survives.
    HybridConfig big;
    big.epsilon = 0.8;
    const auto failed = hybrid::assess_scenario(solo, set, big);
    CHECK(failed.solutions.empty());
    REQUIRE(failed.failures.size() == 1);
    CHECK(failed.failures[0].first == "only");
}

TEST_CASE("hybrid: swapped policy priorities replay against their own rows") {
    Rng rng(41004);
    const DmuPanel p = test_support::random_panel(rng, 4, 2, 1);
    PolicyRankingSet ab;
    ab.scenario_id = "S1";
    for (const auto& v : p.variables()) ab.variables.push_back(v.name);
    ab.policy_names = {"PA", "PB"};
    ab.policy_ranks = {1, 2};
    ab.variable_ranks = {{1, 2, 3}, {3, 1, 2}};

    PolicyRankingSet ba = ab;
    ba.scenario_id = "S2";
    ba.policy_ranks = {2, 1};

    HybridConfig cfg;
    const auto sol_ab = hybrid::solve_hybrid(p, ab, cfg, 0);
    const auto sol_ba = hybrid::solve_hybrid(p, ba, cfg, 0);
    CHECK(hybrid::replay_constraints(p, ab, cfg, sol_ab).empty());
    CHECK(hybrid::replay_constraints(p, ba, cfg, sol_ba).empty());

    // With identical variable ranks for both policies, swapping the policy
    // priorities mirrors the per-policy weight blocks.
    PolicyRankingSet same = ab;
    same.variable_ranks = {{1, 2, 3}, {1, 2, 3}};
    PolicyRankingSet same_swapped = same;
    same_swapped.policy_ranks = {2, 1};
    const auto s1 = hybrid::solve_hybrid(p, same, cfg, 0);
    const auto s2 = hybrid::solve_hybrid(p, same_swapped, cfg, 0);
    for (int j = 0; j < 3; ++j) {
        CHECK(s1.policy_weights[0][j] == doctest::Approx(s2.policy_weights[1][j]).epsilon(1e-6));
        CHECK(s1.policy_weights[1][j] == doctest::Approx(s2.policy_weights[0][j]).epsilon(1e-6));
    }
}

TEST_CASE("hybrid: degenerate scaling pins the transform to one") {
    const DmuPanel p = toy_panel();
    HybridConfig cfg;
    cfg.epsilon = 0.0;
    hybrid::ObjectiveScaling degenerate{2.5, 2.5, true};
    const auto sol = hybrid::solve_hybrid(p, one_policy_set(), cfg, 1, &degenerate);
    // xi <= min(U_S * 1, U_P * Z): both branches active, solution valid.
    CHECK(sol.xi <= cfg.u_sbm + 1e-9);
    CHECK(sol.xi <= cfg.u_policy * sol.z + 1e-7);
    CHECK(sol.xi >= -1e-9);
    const auto violations = hybrid::replay_constraints(p, one_policy_set(), cfg, sol);
    CHECK(violations.empty());

    hybrid::ObjectiveScaling inverted{3.0, 1.0, false};
    CHECK_THROWS_AS(hybrid::solve_hybrid(p, one_policy_set(), cfg, 1, &inverted),
                    ValidationError);
}

TEST_CASE("hybrid: configuration validation") {
    const DmuPanel p = toy_panel();
    HybridConfig bad;
    bad.u_sbm = 0.7;
    bad.u_policy = 0.7;
    CHECK_THROWS_AS(hybrid::solve_hybrid(p, one_policy_set(), bad, 0), ValidationError);

    HybridConfig neg;
    neg.epsilon = -1.0;
    CHECK_THROWS_AS(hybrid::solve_hybrid(p, one_policy_set(), neg, 0), ValidationError);

    // Ranking set must cover the panel variables in order.
    PolicyRankingSet wrong = one_policy_set();
    wrong.variables = {"y", "x"};
    HybridConfig cfg;
    CHECK_THROWS_AS(hybrid::solve_hybrid(p, wrong, cfg, 0), ValidationError);

    // Incomplete variable ranks are rejected.
    PolicyRankingSet incomplete = one_policy_set();
    incomplete.variable_ranks = {{1}};
    CHECK_THROWS_AS(hybrid::solve_hybrid(p, incomplete, cfg, 0), ValidationError);
}

TEST_CASE("hybrid: repeated solves are identical") {
    Rng rng(41005);
    const DmuPanel p = test_support::random_panel(rng, 5, 2, 2);
    const auto set = random_ranking_set(rng, p, 2);
    HybridConfig cfg;
    const auto a = hybrid::solve_hybrid(p, set, cfg, 3);
    const auto b = hybrid::solve_hybrid(p, set, cfg, 3);
    CHECK(a.xi == b.xi);
    CHECK(a.z == b.z);
    CHECK(a.dual_objective == b.dual_objective);
    CHECK(a.assessment.gamma == b.assessment.gamma);
    for (size_t j = 0; j < a.variable_weights.size(); ++j) {
        CHECK(a.variable_weights[j] == b.variable_weights[j]);
    }
}
