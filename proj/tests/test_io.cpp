#include "sbmopa/io.hpp"

#include <cmath>

#include "doctest.h"
#include "sbmopa/errors.hpp"

using namespace sbmopa;

TEST_CASE("io: csv parse and escape round trip") {
    const std::string text =
        "a,b,c\n"
        "1,\"two, with comma\",3\n"
        "\"quote \"\" inside\",\"line\nbreak\",x\n";
    const auto table = io::parse_csv(text);
    REQUIRE(table.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == "two, with comma");
    CHECK(table.rows[1][0] == "quote \" inside");
    CHECK(table.rows[1][1] == "line\nbreak");

    // serialize and reparse
    const auto again = io::parse_csv(io::to_csv(table));
    CHECK(again.header == table.header);
    CHECK(again.rows == table.rows);

    CHECK_THROWS_AS(io::parse_csv("a,b\n1\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_csv("a,\"unterminated\n"), ValidationError);
}

TEST_CASE("io: number formatting is stable at 12 significant digits") {
    CHECK(io::format_number(0.1234567890123456) == "0.123456789012");
    CHECK(io::format_number(3.0) == "3");
    CHECK(io::round_sig(1.0 / 3.0) == io::round_sig(io::round_sig(1.0 / 3.0)));
    CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");

    CHECK(io::parse_number("2.5", "x") == doctest::Approx(2.5));
    CHECK(io::parse_number(" 2.5 ", "x") == doctest::Approx(2.5));
    CHECK_THROWS_WITH_AS(io::parse_number("2.5y", "row 3, column 'K'"),
                         doctest::Contains("row 3"), ValidationError);
}

TEST_CASE("io: panel loading") {
    const std::string roles = R"({"x":"input","y":{"role":"output","unit":"tons"}})";
    const auto role_map = io::roles_from_json(roles);
    const auto table = io::parse_csv("dmu_id,x,y\nA,1,2\nB,2,1\n");
    const DmuPanel panel = io::panel_from_csv(table, role_map);
    CHECK(panel.dmu_count() == 2);
    CHECK(panel.input_count() == 1);
    CHECK(panel.variables()[1].unit == "tons");
    CHECK(panel.value(1, 0) == doctest::Approx(2.0));

    // csv column missing from roles
    const auto extra = io::parse_csv("dmu_id,x,y,z\nA,1,2,3\n");
    CHECK_THROWS_WITH_AS(io::panel_from_csv(extra, role_map), doctest::Contains("z"),
                         ValidationError);

    // roles column missing from csv
    const auto fewer = io::parse_csv("dmu_id,x\nA,1\n");
    CHECK_THROWS_WITH_AS(io::panel_from_csv(fewer, role_map), doctest::Contains("y"),
                         ValidationError);

    // non-numeric and nonpositive cells carry coordinates
    const auto text_cell = io::parse_csv("dmu_id,x,y\nA,abc,2\n");
    CHECK_THROWS_WITH_AS(io::panel_from_csv(text_cell, role_map), doctest::Contains("row 2"),
                         ValidationError);
    const auto nonpos = io::parse_csv("dmu_id,x,y\nA,0,2\n");
    CHECK_THROWS_WITH_AS(io::panel_from_csv(nonpos, role_map), doctest::Contains("x"),
                         ValidationError);

    // header contract
    const auto no_id = io::parse_csv("name,x,y\nA,1,2\n");
    CHECK_THROWS_AS(io::panel_from_csv(no_id, role_map), ValidationError);

    CHECK_THROWS_AS(io::roles_from_json(R"({"x":"sideways"})"), ValidationError);
    CHECK_THROWS_AS(io::roles_from_json("[]"), ValidationError);
}

TEST_CASE("io: shipped panel statistics match an independent computation") {
    const DmuPanel panel = io::load_panel("data/panel_synthetic_30.csv", "data/roles.json");
    REQUIRE(panel.dmu_count() == 30);
    REQUIRE(panel.variable_count() == 6);

    // recompute from the raw csv text, independent of DmuPanel internals
    const auto table = io::read_csv("data/panel_synthetic_30.csv");
    for (int j = 0; j < 6; ++j) {
        double mn = 1e300, mx = -1e300, sum = 0.0;
        for (const auto& row : table.rows) {
            const double v = std::stod(row[j + 1]);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            sum += v;
        }
        const double mean = sum / table.rows.size();
        double ss = 0.0;
        for (const auto& row : table.rows) {
            const double v = std::stod(row[j + 1]);
            ss += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(ss / (table.rows.size() - 1));
        const auto stats = panel.stats()[j];
        CHECK(stats.min == doctest::Approx(mn).epsilon(1e-12));
        CHECK(stats.max == doctest::Approx(mx).epsilon(1e-12));
        CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(stats.std_dev == doctest::Approx(sd).epsilon(1e-12));
    }
}

TEST_CASE("io: policies file") {
    const auto polfile = io::load_policies("data/policies.json");
    REQUIRE(polfile.policies.size() == 3);
    CHECK(polfile.all_permutations);
    CHECK(polfile.policies[0].name == "P1");
    CHECK(polfile.policies[1].fixed_ranks.at("K") == 4);
    CHECK(polfile.policies[1].fixed_ranks.at("Y") == 4);  // the documented tie
    CHECK_FALSE(polfile.policies[1].note.empty());

    const std::string explicit_list = R"({
      "policies": [{"name":"A","fixed_ranks":{"x":1,"y":2}},
                   {"name":"B","fixed_ranks":{"x":2,"y":1}}],
      "scenarios": [{"id":"only","order":["B","A"]}]
    })";
    const auto ex = io::policies_from_json(explicit_list);
    CHECK_FALSE(ex.all_permutations);
    REQUIRE(ex.explicit_scenarios.size() == 1);
    CHECK(ex.explicit_scenarios[0].policy_order ==
          std::vector<std::string>{"B", "A"});

    CHECK_THROWS_AS(io::policies_from_json(R"({"policies":[]})"), ValidationError);
    CHECK_THROWS_AS(io::policies_from_json(R"({"policies":[{"name":"A"}],"scenarios":"some"})"),
                    ValidationError);
}

TEST_CASE("io: fuel factors and consumption") {
    const auto factors = io::load_fuel_factors("data/fuel_factors.csv");
    REQUIRE(factors.size() == 8);
    CHECK(factors.count("hard coal") == 1);
    CHECK(factors.at("natural gas").cof == doctest::Approx(0.99));

    const auto consumption = io::consumption_from_csv(
        io::parse_csv("dmu_id,hard coal,diesel\nR1,10,2\nR2,5,0\n"));
    REQUIRE(consumption.dmu_ids.size() == 2);
    CHECK(consumption.rows[0].at("diesel") == doctest::Approx(2.0));

    CHECK_THROWS_AS(io::fuel_factors_from_csv(io::parse_csv("fuel,ncv\nx,1\n")),
                    ValidationError);
}
