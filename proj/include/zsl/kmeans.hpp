#pragma once

#include <cstdint>
#include <vector>

#include "zsl/types.hpp"

namespace zsl {

/// Lloyd iterations from a seeded farthest-point start. Rows of `points`
/// are samples; returns k x d centroids. Empty clusters take the point
/// farthest from its current centroid.
Eigen::MatrixXd kmeans_subclusters(const Eigen::Ref<const Eigen::MatrixXd>& points, Index k, std::uint64_t seed,
                                   Index max_iters = 100);

struct AlignmentReport {
    std::vector<ClassId> classes;
    // Mean prototype-to-nearest-centroid distance over the class RMS norm.
    std::vector<double> normalized_distance;
    double mean = 0.0;
};

/// Compares each unseen class's prototypes with k-means sub-clusters of
/// its real test features. Analysis only; never feeds training.
AlignmentReport prototype_alignment(const PrototypeSet& protos, const FeatureDataset& dataset, Index k,
                                    std::uint64_t seed);

}  // namespace zsl
