#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sbmopa/opa.hpp"
#include "sbmopa/panel.hpp"

namespace test_support {

// Deterministic splitmix64 generator so frozen expected values stay stable
// regardless of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double unit() { return (next() >> 11) * (1.0 / 9007199254740992.0); }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

private:
    std::uint64_t state_;
};

// Random valid tied ranking of n entries: groups of ties, each followed by
// either a dense (+1) or competition (+group) step.
inline std::vector<int> random_rank_vector(Rng& rng, int n) {
    std::vector<int> by_position;
    by_position.reserve(n);
    int next_rank = 1;
    while (static_cast<int>(by_position.size()) < n) {
        const int remaining = n - static_cast<int>(by_position.size());
        const int group = 1 + rng.below(std::min(3, remaining));
        for (int i = 0; i < group; ++i) by_position.push_back(next_rank);
        next_rank += (rng.unit() < 0.5) ? 1 : group;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[order[i]] = by_position[i];
    return out;
}

inline sbmopa::DmuPanel random_panel(Rng& rng, int n, int r, int s, double lo = 1.0,
                                     double hi = 10.0) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        ids.push_back("D" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1));
    }
    std::vector<sbmopa::PanelVariable> vars;
    for (int j = 0; j < r; ++j) {
        vars.push_back({"in" + std::to_string(j + 1), sbmopa::VariableRole::Input, ""});
    }
    for (int j = 0; j < s; ++j) {
        vars.push_back({"out" + std::to_string(j + 1), sbmopa::VariableRole::Output, ""});
    }
    std::vector<std::vector<double>> data(n, std::vector<double>(r + s));
    for (auto& row : data) {
        for (auto& cell : row) cell = rng.range(lo, hi);
    }
    return sbmopa::DmuPanel(std::move(ids), std::move(vars), std::move(data));
}

// Brute-force maximizer of a linear function over a 2-variable polygon
// {x >= 0, rows a*x1 + b*x2 <= rhs}: enumerates all pairwise row/axis
// intersections and picks the best feasible point. Independent of the
// production simplex path.
struct PolygonOracle {
    struct Row {
        double a, b, rhs;
    };
    std::vector<Row> rows;  // a*x1 + b*x2 <= rhs
    double c1 = 0.0, c2 = 0.0;

    bool feasible(double x1, double x2) const {
        if (x1 < -1e-9 || x2 < -1e-9) return false;
        for (const Row& r : rows) {
            if (r.a * x1 + r.b * x2 > r.rhs + 1e-9) return false;
        }
        return true;
    }

    double maximize(double& bx1, double& bx2) const {
        std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
        auto add_pair = [&](double a1, double b1, double r1, double a2, double b2, double r2) {
            const double det = a1 * b2 - b1 * a2;
            if (std::abs(det) < 1e-12) return;
            pts.emplace_back((r1 * b2 - b1 * r2) / det, (a1 * r2 - r1 * a2) / det);
        };
        const size_t nr = rows.size();
        for (size_t i = 0; i < nr; ++i) {
            add_pair(rows[i].a, rows[i].b, rows[i].rhs, 1.0, 0.0, 0.0);  // row with x1 = 0
            add_pair(rows[i].a, rows[i].b, rows[i].rhs, 0.0, 1.0, 0.0);  // row with x2 = 0
            for (size_t j = i + 1; j < nr; ++j) {
                add_pair(rows[i].a, rows[i].b, rows[i].rhs, rows[j].a, rows[j].b, rows[j].rhs);
            }
        }
        double best = -1e300;
        for (const auto& [x1, x2] : pts) {
            if (!feasible(x1, x2)) continue;
            const double obj = c1 * x1 + c2 * x2;
            if (obj > best) {
                best = obj;
                bx1 = x1;
                bx2 = x2;
            }
        }
        return best;
    }
};

inline sbmopa::opa::RankingInstance random_ranking_instance(Rng& rng, int experts, int items) {
    sbmopa::opa::RankingInstance inst;
    for (int j = 0; j < items; ++j) inst.items.push_back("v" + std::to_string(j + 1));
    const std::vector<int> expert_ranks = random_rank_vector(rng, experts);
    for (int k = 0; k < experts; ++k) {
        inst.experts.push_back(
            sbmopa::opa::ExpertRanking{expert_ranks[k], random_rank_vector(rng, items)});
    }
    return inst;
}

} // namespace test_support
