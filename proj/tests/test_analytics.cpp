#include "sbmopa/analytics.hpp"

#include <cmath>

#include "doctest.h"
#include "sbmopa/errors.hpp"
#include "test_support.hpp"

using namespace sbmopa;
using analytics::WeightFrontierMatrix;
using test_support::Rng;

namespace {

// Three tight blobs at simplex-like centers (pairwise distance ~1.36),
// rows renormalized to sum to one.
WeightFrontierMatrix three_blobs(Rng& rng, int per_blob, std::vector<int>* labels) {
    const std::vector<std::vector<double>> centers = {{0.97, 0.01, 0.01, 0.01},
                                                      {0.01, 0.97, 0.01, 0.01},
                                                      {0.01, 0.01, 0.97, 0.01}};
    WeightFrontierMatrix m;
    m.feature_names = {"w1", "w2", "w3", "w4"};
    int id = 0;
    for (int b = 0; b < 3; ++b) {
        for (int i = 0; i < per_blob; ++i) {
            std::vector<double> row = centers[b];
            double sum = 0.0;
            for (double& v : row) {
                v = std::max(1e-4, v + 0.01 * (rng.unit() - 0.5));
                sum += v;
            }
            for (double& v : row) v /= sum;
            m.rows.push_back(row);
            m.dmu_ids.push_back("D" + std::string(id < 9 ? "0" : "") + std::to_string(id + 1));
            ++id;
            if (labels) labels->push_back(b);
        }
    }
    return m;
}

// Partition equality irrespective of cluster labels.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = i + 1; j < a.size(); ++j) {
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("analytics: anova against hand computation") {
    // groups (1,2,3) vs (4,5,6): SSB = 13.5, SSW = 4, F = 13.5
    const auto res = analytics::anova_f({1, 2, 3, 4, 5, 6}, {0, 0, 0, 1, 1, 1}, 2);
    CHECK(std::abs(res.f - 13.5) <= 1e-9);
    CHECK(res.p > 0.0);
    CHECK(res.p < 0.05);
    CHECK_FALSE(res.capped);

    // identical group values: F = 0, p = 1
    const auto flat = analytics::anova_f({2, 2, 2, 2}, {0, 0, 1, 1}, 2);
    CHECK(flat.f == 0.0);
    CHECK(flat.p == 1.0);

    // zero within-group variance with distinct means: capped infinity
    const auto capped = analytics::anova_f({0, 0, 0, 1, 1, 1}, {0, 0, 0, 1, 1, 1}, 2);
    CHECK(capped.capped);
    CHECK(std::isinf(capped.f));
    CHECK(capped.p == 0.0);

    CHECK_THROWS_AS(analytics::anova_f({1, 2}, {0, 0}, 2), ValidationError);
    CHECK_THROWS_AS(analytics::anova_f({1, 2}, {0, 1}, 1), ValidationError);
}

TEST_CASE("analytics: k-means recovers separated blobs") {
    Rng rng(51001);
    std::vector<int> labels;
    const WeightFrontierMatrix m = three_blobs(rng, 8, &labels);
    m.require_rows_sum_to_one();

    const auto rep = analytics::kmeans(m, 3, 42);
    CHECK(same_partition(rep.assignments, labels));
    REQUIRE(rep.silhouette_valid);
    CHECK(rep.silhouette > 0.9);
    REQUIRE(rep.davies_bouldin_valid);
    CHECK(rep.davies_bouldin >= 0.0);
    CHECK(rep.davies_bouldin < 0.5);
    REQUIRE(rep.calinski_harabasz_valid);
    CHECK(rep.calinski_harabasz > 100.0);
    // the first three features carry the blob structure; the fourth is noise
    for (int j = 0; j < 3; ++j) {
        CHECK(rep.features[j].anova.p <= 0.01);
    }

    // determinism
    const auto rep2 = analytics::kmeans(m, 3, 42);
    CHECK(rep.assignments == rep2.assignments);
    CHECK(rep.inertia == rep2.inertia);
    CHECK(rep.silhouette == rep2.silhouette);
}

TEST_CASE("analytics: k = 1 and degenerate matrices") {
    Rng rng(51002);
    const WeightFrontierMatrix m = three_blobs(rng, 4, nullptr);
    const auto rep = analytics::kmeans(m, 1, 7);
    CHECK_FALSE(rep.silhouette_valid);
    CHECK_FALSE(rep.davies_bouldin_valid);
    CHECK_FALSE(rep.calinski_harabasz_valid);
    CHECK(rep.cluster_sizes == std::vector<int>{12});

    WeightFrontierMatrix same;
    same.dmu_ids = {"a", "b", "c", "d"};
    same.rows = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
    const auto deg = analytics::kmeans(same, 2, 3);
    CHECK(deg.degenerate);
    CHECK_FALSE(deg.silhouette_valid);
    CHECK_FALSE(deg.davies_bouldin_valid);
    CHECK_FALSE(deg.calinski_harabasz_valid);
    CHECK_FALSE(deg.warnings.empty());

    CHECK_THROWS_AS(analytics::kmeans(same, 5, 3), ValidationError);
    CHECK_THROWS_AS(analytics::kmeans(same, 0, 3), ValidationError);
}

TEST_CASE("analytics: permuting rows permutes the partition") {
    Rng rng(51003);
    std::vector<int> labels;
    const WeightFrontierMatrix m = three_blobs(rng, 6, &labels);
    const auto base = analytics::kmeans(m, 3, 11);

    // reverse the rows
    WeightFrontierMatrix rev;
    rev.feature_names = m.feature_names;
    const int n = static_cast<int>(m.rows.size());
    for (int i = n - 1; i >= 0; --i) {
        rev.rows.push_back(m.rows[i]);
        rev.dmu_ids.push_back(m.dmu_ids[i]);
    }
    const auto perm = analytics::kmeans(rev, 3, 11);
    std::vector<int> unperm(n);
    for (int i = 0; i < n; ++i) unperm[n - 1 - i] = perm.assignments[i];
    CHECK(same_partition(base.assignments, unperm));
}

TEST_CASE("analytics: benchmarks per cluster") {
    WeightFrontierMatrix m;
    m.dmu_ids = {"u1", "u2", "u3", "u4"};
    m.rows = {{0.9, 0.1}, {0.88, 0.12}, {0.1, 0.9}, {0.12, 0.88}};
    std::vector<double> score = {0.5, 0.7, 0.9, 0.9};
    const auto rep = analytics::kmeans(m, 2, 0, &score);
    REQUIRE(rep.benchmark_per_cluster.size() == 2);
    const int left = rep.assignments[0];
    CHECK(rep.benchmark_per_cluster[left] == "u2");
    CHECK(rep.mean_score_per_cluster[left] == doctest::Approx(0.6).epsilon(1e-12));
    // tie on score resolved by lexicographic id
    CHECK(rep.benchmark_per_cluster[1 - left] == "u3");
}

TEST_CASE("analytics: elbow suggestion") {
    Rng rng(51004);
    const WeightFrontierMatrix m = three_blobs(rng, 7, nullptr);
    const auto res = analytics::elbow(m, 1, 6, 42);
    CHECK(res.suggested_k == 3);
    CHECK_FALSE(res.low_confidence);
    REQUIRE(res.inertia.size() == 6);
    for (size_t i = 1; i < res.inertia.size(); ++i) {
        CHECK(res.inertia[i] <= res.inertia[i - 1] + 1e-12);
    }

    // single blob: suggestion carries a low-confidence flag
    WeightFrontierMatrix blob;
    for (int i = 0; i < 18; ++i) {
        blob.rows.push_back({0.5 + 0.02 * (rng.unit() - 0.5), 0.5 + 0.02 * (rng.unit() - 0.5)});
        blob.dmu_ids.push_back("p" + std::to_string(i));
    }
    const auto flat = analytics::elbow(blob, 1, 6, 42);
    CHECK(flat.low_confidence);

    const auto singleton = analytics::elbow(m, 2, 2, 42);
    CHECK(singleton.suggested_k == 2);

    CHECK_THROWS_AS(analytics::elbow(m, 3, 2, 42), ValidationError);
    CHECK_THROWS_AS(analytics::elbow(m, 0, 2, 42), ValidationError);
}

TEST_CASE("analytics: sensitivity statistics use the strict threshold") {
    const auto all_one = analytics::sensitivity_stats({1, 1, 1, 1});
    CHECK(all_one.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(all_one.std_dev == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(all_one.flagged.empty());

    // mean 1.2, population std 0.4, threshold 2.0; the value 2 is NOT
    // strictly above it.
    const auto near = analytics::sensitivity_stats({1, 1, 1, 1, 2});
    CHECK(near.mean == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(near.std_dev == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(near.flagged.empty());

    // mean 1.4, std 0.8, threshold 3.0; again at equality, not flagged.
    const auto at3 = analytics::sensitivity_stats({1, 1, 1, 1, 3});
    CHECK(at3.mean == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(at3.std_dev == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(at3.flagged.empty());

    // strictly above the threshold is flagged
    const auto hot = analytics::sensitivity_stats({1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 4.0});
    REQUIRE(hot.flagged.size() == 1);
    CHECK(hot.flagged[0] == 7);

    CHECK_THROWS_AS(analytics::sensitivity_stats({}), ValidationError);
    CHECK_THROWS_AS(analytics::sensitivity_stats({1.0, std::nan("")}), ValidationError);
}
