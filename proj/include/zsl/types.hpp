#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zsl {

using Index = Eigen::Index;
using ClassId = std::uint32_t;

/// Class-by-attribute scores. Rows 0..K-1 are seen classes, rows K..K+L-1
/// unseen classes.
struct AttributeMatrix {
    Eigen::MatrixXd values;
    Index num_seen = 0;
    Index num_unseen = 0;
    std::vector<std::string> class_names;

    Index num_classes() const { return num_seen + num_unseen; }
    Index dim() const { return values.cols(); }

    auto seen() const { return values.topRows(num_seen); }
    auto unseen() const { return values.bottomRows(num_unseen); }
    auto row(Index c) const { return values.row(c); }
};

struct Splits {
    std::vector<std::size_t> train_seen;
    std::vector<std::size_t> test_seen;
    std::vector<std::size_t> test_unseen;
};

/// Labeled feature vectors (one sample per row) with split bookkeeping.
struct FeatureDataset {
    Eigen::MatrixXd features;
    std::vector<ClassId> labels;
    Splits splits;
    Index num_seen = 0;
    Index num_unseen = 0;

    Index size() const { return features.rows(); }
    Index dim() const { return features.cols(); }
    Index num_classes() const { return num_seen + num_unseen; }

    /// Rows listed in `indices`, in order.
    Eigen::MatrixXd gather(const std::vector<std::size_t>& indices) const;
    std::vector<ClassId> gather_labels(const std::vector<std::size_t>& indices) const;
};

/// Synthesized unseen-class cluster centers, one per row.
struct PrototypeSet {
    Eigen::MatrixXd prototypes;
    std::vector<ClassId> labels;
    std::vector<double> lambdas;

    Index size() const { return prototypes.rows(); }
    bool empty() const { return prototypes.rows() == 0; }
};

// Invariant checks; each throws DataError describing the first violation.
void validate(const AttributeMatrix& attrs);
void validate(const FeatureDataset& data);
void validate(const FeatureDataset& data, const AttributeMatrix& attrs);
void validate(const PrototypeSet& protos, Index num_seen, Index num_unseen);

}  // namespace zsl
