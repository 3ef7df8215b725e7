#include "sbmopa/scenario.hpp"

#include <cmath>

#include "doctest.h"
#include "sbmopa/errors.hpp"
#include "test_support.hpp"

using namespace sbmopa;
using scenario::PolicyDefinition;
using scenario::RankedPolicy;
using scenario::ScenarioSpec;

namespace {

// Panel whose correlations with Y are unambiguous by construction:
// V = 2Y (rho = 1), W = -Y (rho = -1), U mid-correlated.
DmuPanel correlation_panel() {
    std::vector<std::string> ids = {"d1", "d2", "d3", "d4", "d5", "d6"};
    std::vector<PanelVariable> vars = {{"U", VariableRole::Input, ""},
                                       {"V", VariableRole::Input, ""},
                                       {"W", VariableRole::Input, ""},
                                       {"Y", VariableRole::Output, ""}};
    std::vector<double> y = {1.0, 3.0, 2.0, 5.0, 4.0, 6.0};
    std::vector<double> u = {2.0, 2.5, 4.0, 4.5, 5.0, 5.5};  // positively but not perfectly
    std::vector<std::vector<double>> data;
    for (size_t i = 0; i < ids.size(); ++i) {
        data.push_back({u[i], 2.0 * y[i], 7.0 - y[i], y[i]});
    }
    return DmuPanel(ids, vars, data);
}

} // namespace

TEST_CASE("scenario: pearson basics") {
    const std::vector<double> y = {1, 2, 3, 4};
    const std::vector<double> v = {2, 4, 6, 8};
    const std::vector<double> w = {4, 3, 2, 1};
    CHECK(scenario::pearson(y, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scenario::pearson(y, w) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(scenario::pearson(y, {1, 1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(scenario::pearson(y, {1, 2}), ValidationError);

    CHECK(scenario::pearson_p_value(1.0, 10) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(scenario::pearson_p_value(0.0, 10) == doctest::Approx(1.0).epsilon(1e-9));
    const double p_mid = scenario::pearson_p_value(0.7, 12);
    CHECK(p_mid > 0.0);
    CHECK(p_mid < 0.05);
}

TEST_CASE("scenario: anchor tops the ranking, correlation orders the rest") {
    const DmuPanel p = correlation_panel();
    PolicyDefinition pol;
    pol.name = "econ";
    pol.anchor = "Y";
    std::vector<scenario::PearsonEntry> report;
    const RankedPolicy ranked = scenario::rank_by_pearson(p, pol, false, &report);
    // Y first, V (rho=1) second, U third, W (rho=-1) last.
    CHECK(ranked.variable_ranks[3] == 1);  // Y
    CHECK(ranked.variable_ranks[1] == 2);  // V
    CHECK(ranked.variable_ranks[0] == 3);  // U
    CHECK(ranked.variable_ranks[2] == 4);  // W
    REQUIRE(report.size() == 3);
    for (const auto& e : report) {
        CHECK(std::abs(e.coefficient) <= 1.0 + 1e-12);
        CHECK(e.p_value >= 0.0);
        CHECK(e.p_value <= 1.0);
    }

    // Absolute mode promotes the perfectly anti-correlated column.
    const RankedPolicy abs_ranked = scenario::rank_by_pearson(p, pol, true);
    CHECK(abs_ranked.variable_ranks[3] == 1);
    CHECK(abs_ranked.variable_ranks[1] <= 3);
    CHECK(abs_ranked.variable_ranks[2] <= 3);
    CHECK(abs_ranked.variable_ranks[0] == 4);  // U is the least |rho|
}

TEST_CASE("scenario: fixed ranks are verbatim") {
    const DmuPanel p =
        DmuPanel({"a", "b"},
                 {{"L", VariableRole::Input, ""},
                  {"K", VariableRole::Input, ""},
                  {"T", VariableRole::Input, ""},
                  {"E", VariableRole::Input, ""},
                  {"Y", VariableRole::Output, ""},
                  {"C", VariableRole::Output, ""}},
                 {{1, 2, 3, 4, 5, 6}, {2, 3, 4, 5, 6, 7}});
    PolicyDefinition pol;
    pol.name = "P1";
    pol.fixed_ranks = {{"L", 4}, {"K", 2}, {"T", 3}, {"E", 5}, {"Y", 1}, {"C", 6}};
    const RankedPolicy ranked = scenario::rank_by_pearson(p, pol);
    CHECK(ranked.variable_ranks == std::vector<int>{4, 2, 3, 5, 1, 6});

    // A tied fixed ranking with a skip is accepted as-is.
    PolicyDefinition p2;
    p2.name = "P2";
    p2.fixed_ranks = {{"L", 3}, {"K", 4}, {"T", 6}, {"E", 2}, {"Y", 4}, {"C", 1}};
    const RankedPolicy ranked2 = scenario::rank_by_pearson(p, p2);
    CHECK(ranked2.variable_ranks == std::vector<int>{3, 4, 6, 2, 4, 1});
}

TEST_CASE("scenario: fixed ranks plus pearson fill-in") {
    const DmuPanel p = correlation_panel();
    PolicyDefinition pol;
    pol.name = "mixed";
    pol.anchor = "Y";
    pol.fixed_ranks = {{"W", 2}};  // pin the anti-correlated column high
    const RankedPolicy ranked = scenario::rank_by_pearson(p, pol);
    CHECK(ranked.variable_ranks[3] == 1);  // Y anchor
    CHECK(ranked.variable_ranks[2] == 2);  // W fixed
    CHECK(ranked.variable_ranks[1] == 3);  // V best remaining rho
    CHECK(ranked.variable_ranks[0] == 4);  // U
}

TEST_CASE("scenario: pearson ranking is invariant under positive affine transforms") {
    const DmuPanel p = correlation_panel();
    PolicyDefinition pol;
    pol.name = "econ";
    pol.anchor = "Y";
    const RankedPolicy base = scenario::rank_by_pearson(p, pol);

    std::vector<std::vector<double>> data;
    for (int i = 0; i < p.dmu_count(); ++i) {
        data.push_back(p.row(i));
        data.back()[0] = 3.5 * data.back()[0] + 11.0;  // U rescaled
    }
    const DmuPanel q(p.dmu_ids(), p.variables(), std::move(data));
    const RankedPolicy scaled = scenario::rank_by_pearson(q, pol);
    CHECK(scaled.variable_ranks == base.variable_ranks);
}

TEST_CASE("scenario: tied correlations share a rank and skip the next") {
    // Two identical columns tie exactly.
    const DmuPanel p =
        DmuPanel({"a", "b", "c", "d"},
                 {{"A", VariableRole::Input, ""},
                  {"B", VariableRole::Input, ""},
                  {"C", VariableRole::Input, ""},
                  {"Y", VariableRole::Output, ""}},
                 {{1, 1, 9, 1}, {2, 2, 7, 2}, {3, 3, 8, 3}, {4, 4, 5, 4}});
    PolicyDefinition pol;
    pol.name = "tied";
    pol.anchor = "Y";
    const RankedPolicy ranked = scenario::rank_by_pearson(p, pol);
    CHECK(ranked.variable_ranks[3] == 1);  // anchor
    CHECK(ranked.variable_ranks[0] == 2);  // A ties with B
    CHECK(ranked.variable_ranks[1] == 2);
    CHECK(ranked.variable_ranks[2] == 4);  // C after the tie skip
}

TEST_CASE("scenario: zero-variance column is reported by name") {
    const DmuPanel p = DmuPanel({"a", "b"},
                                {{"flat", VariableRole::Input, ""},
                                 {"Y", VariableRole::Output, ""}},
                                {{3.0, 1.0}, {3.0, 2.0}});
    PolicyDefinition pol;
    pol.name = "econ";
    pol.anchor = "Y";
    CHECK_THROWS_WITH_AS(scenario::rank_by_pearson(p, pol), doctest::Contains("flat"),
                         ValidationError);
}

TEST_CASE("scenario: enumeration follows the factorial order") {
    const auto scens = scenario::enumerate_scenarios({"P1", "P2", "P3"});
    REQUIRE(scens.size() == 6);
    CHECK(scens[0].id == "S1");
    CHECK(scens[0].policy_order == std::vector<std::string>{"P1", "P2", "P3"});
    CHECK(scens[1].policy_order == std::vector<std::string>{"P1", "P3", "P2"});
    CHECK(scens[2].policy_order == std::vector<std::string>{"P2", "P1", "P3"});
    CHECK(scens[3].policy_order == std::vector<std::string>{"P2", "P3", "P1"});
    CHECK(scens[4].policy_order == std::vector<std::string>{"P3", "P1", "P2"});
    CHECK(scens[5].policy_order == std::vector<std::string>{"P3", "P2", "P1"});
    CHECK(scens[5].id == "S6");

    CHECK(scenario::enumerate_scenarios({"only"}).size() == 1);
    CHECK(scenario::enumerate_scenarios({"a", "b"}).size() == 2);
    CHECK_THROWS_AS(scenario::enumerate_scenarios({"1", "2", "3", "4", "5", "6", "7"}),
                    ValidationError);
    CHECK_THROWS_AS(scenario::enumerate_scenarios({"x", "x"}), ValidationError);

    // No duplicates among the six.
    for (size_t i = 0; i < scens.size(); ++i) {
        for (size_t j = i + 1; j < scens.size(); ++j) {
            CHECK(scens[i].policy_order != scens[j].policy_order);
        }
    }
}

TEST_CASE("scenario: ranking set carries positions as policy ranks") {
    std::vector<RankedPolicy> pols(3);
    for (int k = 0; k < 3; ++k) {
        pols[k].name = "P" + std::to_string(k + 1);
        pols[k].variable_names = {"a", "b"};
        pols[k].variable_ranks = {1, 2};
    }
    const auto s1 = scenario::to_ranking_set({"S1", {"P1", "P2", "P3"}}, pols);
    CHECK(s1.policy_ranks == std::vector<int>{1, 2, 3});
    const auto s6 = scenario::to_ranking_set({"S6", {"P3", "P2", "P1"}}, pols);
    CHECK(s6.policy_ranks == std::vector<int>{3, 2, 1});

    const auto single = scenario::to_ranking_set({"S1", {"solo"}},
                                                 {RankedPolicy{"solo", {"a"}, {1}}});
    CHECK(single.policy_ranks == std::vector<int>{1});

    // Missing variable ranks are rejected.
    std::vector<RankedPolicy> broken = pols;
    broken[1].variable_ranks.clear();
    CHECK_THROWS_AS(scenario::to_ranking_set({"S1", {"P1", "P2", "P3"}}, broken),
                    ValidationError);
}
