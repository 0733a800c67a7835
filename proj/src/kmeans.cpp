#include "zsl/kmeans.hpp"

#include <limits>
#include <map>

#include "zsl/errors.hpp"
#include "zsl/random.hpp"

namespace zsl {
namespace {

Index nearest(const Eigen::MatrixXd& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& x, double* dist2) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c) - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (dist2 != nullptr) *dist2 = best_d;
    return best;
}

}  // namespace

Eigen::MatrixXd kmeans_subclusters(const Eigen::Ref<const Eigen::MatrixXd>& points, Index k, std::uint64_t seed,
                                   Index max_iters) {
    const Index n = points.rows();
    if (k < 1) throw ConfigError("k-means: k must be >= 1");
    if (k > n) {
        throw DataError("k-means: k = " + std::to_string(k) + " exceeds sample count " + std::to_string(n));
    }

    Rng rng = substream(seed, "kmeans");
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    Eigen::VectorXd min_d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (Index c = 1; c < k; ++c) {
        Index far = 0;
        min_d2.maxCoeff(&far);
        centroids.row(c) = points.row(far);
        min_d2 = min_d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }

    std::vector<Index> assign(static_cast<std::size_t>(n), -1);
    for (Index iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            const Index a = nearest(centroids, points.row(i), nullptr);
            if (a != assign[static_cast<std::size_t>(i)]) {
                assign[static_cast<std::size_t>(i)] = a;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }
        for (Index c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
                continue;
            }
            // Reseed from the point worst served by its centroid.
            Index far = 0;
            double far_d = -1.0;
            for (Index i = 0; i < n; ++i) {
                const double d = (points.row(i) - centroids.row(assign[static_cast<std::size_t>(i)])).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            centroids.row(c) = points.row(far);
            assign[static_cast<std::size_t>(far)] = c;
        }
    }
    return centroids;
}

AlignmentReport prototype_alignment(const PrototypeSet& protos, const FeatureDataset& dataset, Index k,
                                    std::uint64_t seed) {
    std::map<ClassId, std::vector<std::size_t>> real_rows;
    for (auto i : dataset.splits.test_unseen) real_rows[dataset.labels[i]].push_back(i);
    std::map<ClassId, std::vector<Index>> proto_rows;
    for (Index r = 0; r < protos.size(); ++r) proto_rows[protos.labels[static_cast<std::size_t>(r)]].push_back(r);

    AlignmentReport report;
    for (const auto& [cls, rows] : proto_rows) {
        auto it = real_rows.find(cls);
        if (it == real_rows.end()) throw DataError("alignment: no real features for class " + std::to_string(cls));
        const Eigen::MatrixXd real = dataset.gather(it->second);
        if (k > real.rows()) {
            throw DataError("alignment: class " + std::to_string(cls) + " has " + std::to_string(real.rows()) +
                            " samples, fewer than k = " + std::to_string(k));
        }
        const Eigen::MatrixXd centroids = kmeans_subclusters(real, k, seed + cls);
        double total = 0.0;
        for (Index r : rows) {
            double d2 = 0.0;
            nearest(centroids, protos.prototypes.row(r), &d2);
            total += std::sqrt(d2);
        }
        const double rms = std::sqrt(real.rowwise().squaredNorm().mean());
        const double mean_dist = total / static_cast<double>(rows.size());
        report.classes.push_back(cls);
        report.normalized_distance.push_back(rms > 0.0 ? mean_dist / rms : mean_dist);
    }
    double sum = 0.0;
    for (double d : report.normalized_distance) sum += d;
    report.mean = report.normalized_distance.empty() ? 0.0 : sum / static_cast<double>(report.normalized_distance.size());
    return report;
}

}  // namespace zsl
