#pragma once

#include <string>
#include <vector>

namespace sbmopa::analytics {

// Per-unit feature rows for clustering; in the pipeline these are the
// aggregated variable weights of each unit's joint solution (each row sums
// to 1).
struct WeightFrontierMatrix {
    std::vector<std::string> dmu_ids;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;

    void validate() const;
    // Pipeline-side invariant; tolerance per row sum.
    void require_rows_sum_to_one(double tol = 1e-6) const;
};

struct AnovaResult {
    double f = 0.0;
    double p = 1.0;
    bool capped = false;  // zero within-group variance made F infinite
};

// One-way ANOVA of one feature column against the cluster assignment.
AnovaResult anova_f(const std::vector<double>& values, const std::vector<int>& assignments,
                    int k);

struct FeatureSummary {
    std::string feature;
    std::vector<double> cluster_mean;  // per cluster
    std::vector<double> cluster_std;   // population std within cluster
    AnovaResult anova;
};

struct ClusterReport {
    int k = 1;
    unsigned seed = 0;
    double inertia = 0.0;
    std::vector<int> assignments;  // per row of the matrix
    std::vector<std::vector<double>> centroids;
    std::vector<int> cluster_sizes;
    std::vector<FeatureSummary> features;

    double silhouette = 0.0;
    double davies_bouldin = 0.0;
    double calinski_harabasz = 0.0;
    bool silhouette_valid = false;
    bool davies_bouldin_valid = false;
    bool calinski_harabasz_valid = false;

    bool degenerate = false;  // zero dispersion; index values not applicable
    std::vector<std::string> warnings;

    // Filled when per-unit efficiency scores are supplied.
    std::vector<std::string> benchmark_per_cluster;  // argmax score, id tie-break
    std::vector<double> mean_score_per_cluster;
};

// Lloyd iteration with farthest-first seeding. The seed picks the first
// centroid out of a canonical (row-value) ordering, so equal seeds give
// equal results and permuting rows permutes the partition. Empty clusters
// are re-seeded at the current worst-fit point.
ClusterReport kmeans(const WeightFrontierMatrix& matrix, int k, unsigned seed,
                     const std::vector<double>* scores = nullptr, bool standardize = false);

struct ElbowResult {
    std::vector<int> ks;
    std::vector<double> inertia;
    int suggested_k = 1;
    bool low_confidence = false;
};

// Inertia curve over [k_min, k_max] with the max-curvature suggestion.
// Advisory only.
ElbowResult elbow(const WeightFrontierMatrix& matrix, int k_min, int k_max, unsigned seed,
                  bool standardize = false);

struct SensitivitySummary {
    double mean = 0.0;
    double std_dev = 0.0;        // population
    std::vector<int> flagged;    // indices with value strictly above mean + 2*std
};

SensitivitySummary sensitivity_stats(const std::vector<double>& etas);

} // namespace sbmopa::analytics
