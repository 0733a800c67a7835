#pragma once

#include <cstdint>

#include "zsl/types.hpp"

namespace zsl {

struct SyntheticWorldParams {
    std::uint64_t seed = 0;
    Index num_seen = 8;
    Index num_unseen = 4;
    Index feature_dim = 32;
    Index attribute_dim = 16;
    Index samples_per_seen_class = 100;
    // Held-out samples per class, for both test_seen and test_unseen.
    Index test_samples_per_class = 20;
    double noise_scale = 0.0;
    // Number of seen classes mixed into each unseen class.
    Index mixture_support = 2;
};

/// Gaussian seen-class clusters plus unseen classes whose mean and attribute
/// row are the same convex combination of seen means / seen attribute rows.
struct SyntheticWorld {
    FeatureDataset dataset;
    AttributeMatrix attributes;
    Eigen::MatrixXd seen_means;    // K x d_v, planted
    Eigen::MatrixXd unseen_means;  // L x d_v, planted
    Eigen::MatrixXd mixing;        // L x K, rows sum to 1
};

SyntheticWorld make_synthetic_world(const SyntheticWorldParams& params);

}  // namespace zsl
