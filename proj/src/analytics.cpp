#include "sbmopa/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>

#include "sbmopa/errors.hpp"

namespace sbmopa::analytics {

void WeightFrontierMatrix::validate() const {
    if (rows.empty()) throw ValidationError("weight matrix has no rows");
    if (dmu_ids.size() != rows.size()) {
        throw ValidationError("weight matrix id/row count mismatch");
    }
    const size_t width = rows.front().size();
    if (width == 0) throw ValidationError("weight matrix has no columns");
    for (const auto& row : rows) {
        if (row.size() != width) throw ValidationError("ragged weight matrix");
        for (double v : row) {
            if (!std::isfinite(v)) throw ValidationError("non-finite weight matrix entry");
        }
    }
    if (!feature_names.empty() && feature_names.size() != width) {
        throw ValidationError("weight matrix feature-name count mismatch");
    }
}

void WeightFrontierMatrix::require_rows_sum_to_one(double tol) const {
    validate();
    for (size_t i = 0; i < rows.size(); ++i) {
        const double sum = std::accumulate(rows[i].begin(), rows[i].end(), 0.0);
        if (std::abs(sum - 1.0) > tol) {
            throw ValidationError("weight row for '" + dmu_ids[i] + "' sums to " +
                                  std::to_string(sum));
        }
    }
}

AnovaResult anova_f(const std::vector<double>& values, const std::vector<int>& assignments,
                    int k) {
    if (values.empty() || values.size() != assignments.size()) {
        throw ValidationError("anova: value/assignment size mismatch");
    }
    if (k < 2) throw ValidationError("anova: need at least 2 groups");
    const int n = static_cast<int>(values.size());
    std::vector<int> counts(k, 0);
    std::vector<double> sums(k, 0.0);
    for (int i = 0; i < n; ++i) {
        if (assignments[i] < 0 || assignments[i] >= k) {
            throw ValidationError("anova: assignment outside 0..k-1");
        }
        ++counts[assignments[i]];
        sums[assignments[i]] += values[i];
    }
    for (int g = 0; g < k; ++g) {
        if (counts[g] == 0) throw ValidationError("anova: empty group " + std::to_string(g));
    }
    const double grand = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ssb = 0.0, ssw = 0.0;
    for (int g = 0; g < k; ++g) {
        const double mean = sums[g] / counts[g];
        ssb += counts[g] * (mean - grand) * (mean - grand);
    }
    for (int i = 0; i < n; ++i) {
        const double d = values[i] - sums[assignments[i]] / counts[assignments[i]];
        ssw += d * d;
    }

    AnovaResult res;
    const int df_between = k - 1;
    const int df_within = n - k;
    if (ssb <= 0.0) {
        res.f = 0.0;
        res.p = 1.0;
        return res;
    }
    if (df_within <= 0 || ssw <= 0.0) {
        res.f = std::numeric_limits<double>::infinity();
        res.p = 0.0;
        res.capped = true;
        return res;
    }
    res.f = (ssb / df_between) / (ssw / df_within);
    boost::math::fisher_f dist(df_between, df_within);
    res.p = boost::math::cdf(boost::math::complement(dist, res.f));
    return res;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

// Indices ordered by row value (lexicographic); makes seeding depend on the
// data, not the row order, so permuting rows permutes the partition.
std::vector<int> canonical_order(const std::vector<std::vector<double>>& rows) {
    std::vector<int> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rows[a] < rows[b]; });
    return order;
}

} // namespace

ClusterReport kmeans(const WeightFrontierMatrix& matrix, int k, unsigned seed,
                     const std::vector<double>* scores, bool standardize) {
    matrix.validate();
    const int n = static_cast<int>(matrix.rows.size());
    if (k < 1 || k > n) {
        throw ValidationError("k must lie in 1..n (" + std::to_string(k) + " vs n=" +
                              std::to_string(n) + ")");
    }
    if (scores && static_cast<int>(scores->size()) != n) {
        throw ValidationError("score vector does not match the matrix rows");
    }
    const size_t dim = matrix.rows.front().size();

    std::vector<std::vector<double>> pts = matrix.rows;
    if (standardize) {
        for (size_t j = 0; j < dim; ++j) {
            double mean = 0.0;
            for (const auto& row : pts) mean += row[j];
            mean /= n;
            double var = 0.0;
            for (const auto& row : pts) var += (row[j] - mean) * (row[j] - mean);
            var /= n;
            const double sd = std::sqrt(var);
            for (auto& row : pts) row[j] = sd > 0.0 ? (row[j] - mean) / sd : 0.0;
        }
    }

    ClusterReport rep;
    rep.k = k;
    rep.seed = seed;

    const std::vector<int> canon = canonical_order(pts);
    // canonical position of each point, for permutation-stable tie-breaks
    std::vector<int> canon_pos(n);
    for (int c = 0; c < n; ++c) canon_pos[canon[c]] = c;

    // farthest-first seeding
    std::vector<int> centers{canon[seed % static_cast<unsigned>(n)]};
    std::vector<double> nearest(n);
    while (static_cast<int>(centers.size()) < k) {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int c : centers) best = std::min(best, sq_dist(pts[i], pts[c]));
            nearest[i] = best;
        }
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            if (pick < 0 || nearest[i] > nearest[pick] + 1e-30 ||
                (nearest[i] >= nearest[pick] - 1e-30 && canon_pos[i] < canon_pos[pick])) {
                pick = i;
            }
        }
        centers.push_back(pick);
    }
    std::vector<std::vector<double>> centroids;
    for (int c : centers) centroids.push_back(pts[c]);

    std::vector<int> assign(n, -1);
    std::vector<bool> warned_empty(k, false);
    for (int iter = 0; iter < 200; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(pts[i], centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(pts[i], centroids[c]);
                if (d < best_d - 1e-30) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        // means, re-seeding empty clusters at the worst-fit point
        std::vector<int> counts(k, 0);
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        for (int i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (size_t j = 0; j < dim; ++j) sums[assign[i]][j] += pts[i][j];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (size_t j = 0; j < dim; ++j) centroids[c][j] = sums[c][j] / counts[c];
                continue;
            }
            int worst = -1;
            double worst_d = 0.0;
            for (int i = 0; i < n; ++i) {
                if (counts[assign[i]] <= 1) continue;  // do not strand another cluster
                const double d = sq_dist(pts[i], centroids[assign[i]]);
                if (d > worst_d + 1e-30 ||
                    (worst >= 0 && d >= worst_d - 1e-30 && canon_pos[i] < canon_pos[worst])) {
                    worst_d = d;
                    worst = i;
                }
            }
            if (worst >= 0) {
                // A point strictly away from its centroid exists; claim it.
                centroids[c] = pts[worst];
                rep.warnings.push_back("cluster " + std::to_string(c) +
                                       " emptied; re-seeded at the worst-fit point");
                changed = true;
            } else if (!warned_empty[c]) {
                // Nothing to separate (coincident points): the cluster stays
                // empty and the report says so.
                rep.warnings.push_back("cluster " + std::to_string(c) +
                                       " is empty (no separable point)");
                warned_empty[c] = true;
            }
        }
        if (!changed) break;
    }

    rep.assignments = assign;
    rep.centroids = centroids;
    rep.cluster_sizes.assign(k, 0);
    for (int a : assign) ++rep.cluster_sizes[a];
    rep.inertia = 0.0;
    for (int i = 0; i < n; ++i) rep.inertia += sq_dist(pts[i], centroids[assign[i]]);

    // total dispersion, for degeneracy detection
    std::vector<double> grand(dim, 0.0);
    for (const auto& row : pts) {
        for (size_t j = 0; j < dim; ++j) grand[j] += row[j];
    }
    for (size_t j = 0; j < dim; ++j) grand[j] /= n;
    double total_ss = 0.0;
    for (const auto& row : pts) total_ss += sq_dist(row, grand);
    rep.degenerate = total_ss <= 1e-18;
    if (rep.degenerate) {
        rep.warnings.push_back("zero dispersion: validity indices not applicable");
    }

    // silhouette (mean over points, singleton clusters contribute 0)
    if (k >= 2 && k < n && !rep.degenerate) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double a_sum = 0.0;
            int a_count = 0;
            std::vector<double> b_sum(k, 0.0);
            std::vector<int> b_count(k, 0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = std::sqrt(sq_dist(pts[i], pts[j]));
                if (assign[j] == assign[i]) {
                    a_sum += d;
                    ++a_count;
                } else {
                    b_sum[assign[j]] += d;
                    ++b_count[assign[j]];
                }
            }
            if (a_count == 0) continue;  // singleton: s = 0
            const double a = a_sum / a_count;
            double b = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                if (b_count[c] > 0) b = std::min(b, b_sum[c] / b_count[c]);
            }
            const double denom = std::max(a, b);
            if (denom > 0.0) total += (b - a) / denom;
        }
        rep.silhouette = total / n;
        rep.silhouette_valid = true;
    }

    // Davies-Bouldin
    if (k >= 2 && !rep.degenerate) {
        std::vector<double> scatter(k, 0.0);
        for (int i = 0; i < n; ++i) {
            scatter[assign[i]] += std::sqrt(sq_dist(pts[i], centroids[assign[i]]));
        }
        for (int c = 0; c < k; ++c) scatter[c] /= std::max(1, rep.cluster_sizes[c]);
        double dbi = 0.0;
        bool ok = true;
        for (int c = 0; c < k; ++c) {
            double worst = 0.0;
            for (int d = 0; d < k; ++d) {
                if (c == d) continue;
                const double sep = std::sqrt(sq_dist(centroids[c], centroids[d]));
                if (sep <= 0.0) {
                    ok = false;
                    break;
                }
                worst = std::max(worst, (scatter[c] + scatter[d]) / sep);
            }
            if (!ok) break;
            dbi += worst;
        }
        if (ok) {
            rep.davies_bouldin = dbi / k;
            rep.davies_bouldin_valid = true;
        } else {
            rep.warnings.push_back("coincident centroids: Davies-Bouldin not applicable");
        }
    }

    // Calinski-Harabasz
    if (k >= 2 && k < n && !rep.degenerate && rep.inertia > 0.0) {
        double between = 0.0;
        for (int c = 0; c < k; ++c) {
            between += rep.cluster_sizes[c] * sq_dist(centroids[c], grand);
        }
        rep.calinski_harabasz = (between / (k - 1)) / (rep.inertia / (n - k));
        rep.calinski_harabasz_valid = true;
    }

    // per-feature summaries with one-way ANOVA
    const size_t nf = matrix.feature_names.empty() ? dim : matrix.feature_names.size();
    for (size_t j = 0; j < nf; ++j) {
        FeatureSummary fs;
        fs.feature = matrix.feature_names.empty() ? "f" + std::to_string(j)
                                                  : matrix.feature_names[j];
        std::vector<double> column(n);
        for (int i = 0; i < n; ++i) column[i] = matrix.rows[i][j];
        fs.cluster_mean.assign(k, 0.0);
        fs.cluster_std.assign(k, 0.0);
        for (int i = 0; i < n; ++i) fs.cluster_mean[assign[i]] += column[i];
        for (int c = 0; c < k; ++c) fs.cluster_mean[c] /= std::max(1, rep.cluster_sizes[c]);
        for (int i = 0; i < n; ++i) {
            const double d = column[i] - fs.cluster_mean[assign[i]];
            fs.cluster_std[assign[i]] += d * d;
        }
        for (int c = 0; c < k; ++c) {
            fs.cluster_std[c] = std::sqrt(fs.cluster_std[c] / std::max(1, rep.cluster_sizes[c]));
        }
        const bool all_nonempty =
            std::all_of(rep.cluster_sizes.begin(), rep.cluster_sizes.end(),
                        [](int c) { return c > 0; });
        if (k >= 2 && all_nonempty) fs.anova = anova_f(column, assign, k);
        rep.features.push_back(std::move(fs));
    }

    if (scores) {
        rep.benchmark_per_cluster.assign(k, "");
        rep.mean_score_per_cluster.assign(k, 0.0);
        for (int c = 0; c < k; ++c) {
            int best = -1;
            for (int i = 0; i < n; ++i) {
                if (assign[i] != c) continue;
                rep.mean_score_per_cluster[c] += (*scores)[i];
                if (best < 0 || (*scores)[i] > (*scores)[best] + 1e-15 ||
                    (std::abs((*scores)[i] - (*scores)[best]) <= 1e-15 &&
                     matrix.dmu_ids[i] < matrix.dmu_ids[best])) {
                    best = i;
                }
            }
            rep.mean_score_per_cluster[c] /= std::max(1, rep.cluster_sizes[c]);
            if (best >= 0) rep.benchmark_per_cluster[c] = matrix.dmu_ids[best];
        }
    }
    return rep;
}

ElbowResult elbow(const WeightFrontierMatrix& matrix, int k_min, int k_max, unsigned seed,
                  bool standardize) {
    matrix.validate();
    const int n = static_cast<int>(matrix.rows.size());
    if (k_min < 1 || k_max < k_min || k_max > n) {
        throw ValidationError("elbow range must satisfy 1 <= k_min <= k_max <= n");
    }
    ElbowResult res;
    for (int k = k_min; k <= k_max; ++k) {
        res.ks.push_back(k);
        res.inertia.push_back(kmeans(matrix, k, seed, nullptr, standardize).inertia);
    }
    const size_t m = res.ks.size();
    if (m == 1) {
        res.suggested_k = res.ks[0];
        return res;
    }
    if (m == 2) {
        // One drop only: suggest the larger k when it removes most inertia.
        const double drop = res.inertia[0] > 0.0
                                ? (res.inertia[0] - res.inertia[1]) / res.inertia[0]
                                : 0.0;
        res.suggested_k = drop > 0.5 ? res.ks[1] : res.ks[0];
        res.low_confidence = true;
        return res;
    }
    size_t best = 1;
    double best_curv = -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < m; ++i) {
        const double curv = res.inertia[i - 1] - 2.0 * res.inertia[i] + res.inertia[i + 1];
        if (curv > best_curv + 1e-30) {
            best_curv = curv;
            best = i;
        }
    }
    res.suggested_k = res.ks[best];
    const double before = res.inertia[best - 1];
    const double drop = before > 0.0 ? (before - res.inertia[best]) / before : 0.0;
    res.low_confidence = drop < 0.5;
    return res;
}

SensitivitySummary sensitivity_stats(const std::vector<double>& etas) {
    if (etas.empty()) throw ValidationError("sensitivity_stats: empty input");
    for (double e : etas) {
        if (!std::isfinite(e)) {
            throw ValidationError("sensitivity_stats: non-finite sensitivity value");
        }
    }
    SensitivitySummary s;
    s.mean = std::accumulate(etas.begin(), etas.end(), 0.0) / etas.size();
    double ss = 0.0;
    for (double e : etas) ss += (e - s.mean) * (e - s.mean);
    s.std_dev = std::sqrt(ss / etas.size());
    const double threshold = s.mean + 2.0 * s.std_dev;
    for (size_t i = 0; i < etas.size(); ++i) {
        if (etas[i] > threshold) s.flagged.push_back(static_cast<int>(i));
    }
    return s;
}

} // namespace sbmopa::analytics
