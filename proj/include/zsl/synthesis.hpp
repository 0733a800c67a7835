#pragma once

#include <cstdint>
#include <vector>

#include "zsl/ridge.hpp"
#include "zsl/types.hpp"

namespace zsl {

/// Per-class mean of the seen training features; column c belongs to class c.
struct ClassMeans {
    Eigen::MatrixXd means;  // d_v x K
    std::vector<Index> counts;
};

/// Coefficients reconstructing one unseen attribute row from the seen rows.
struct SparseCode {
    Eigen::VectorXd coefficients;  // length K
    double lambda = 0.0;
    ClassId target_class = 0;
};

struct SynthesisConfig {
    Index per_class = 1;
    double lambda_min = 1.0;
    double lambda_max = 1.02;
    std::uint64_t seed = 0;
};

/// Real seen training rows followed by prototypes, with a per-row flag.
struct TrainingView {
    Eigen::MatrixXd features;
    std::vector<ClassId> labels;
    std::vector<bool> synthetic;

    Index size() const { return features.rows(); }
    Index num_synthetic() const;
};

ClassMeans compute_seen_means(const FeatureDataset& dataset);

SparseCode ridge_code(const Eigen::Ref<const Eigen::VectorXd>& unseen_attributes,
                      const Eigen::Ref<const Eigen::MatrixXd>& seen_attributes, double lambda,
                      ClassId target_class = 0);

Eigen::VectorXd synthesize_prototype(const ClassMeans& means, const SparseCode& code);

/// P prototypes per unseen class, one ridge solve per lambda. Lambdas are
/// drawn per class from the "lambda" substream of cfg.seed and sorted.
PrototypeSet generate_prototype_set(const AttributeMatrix& attrs, const ClassMeans& means,
                                    const SynthesisConfig& cfg);

TrainingView augment_training_set(const FeatureDataset& dataset, const PrototypeSet& protos);

}  // namespace zsl
