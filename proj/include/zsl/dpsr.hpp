#pragma once

#include "zsl/types.hpp"

namespace zsl {

/// Row-stochastic class-to-class similarities. Row p is the clamped and
/// normalized ridge reconstruction of class p from all classes, p included.
struct SimilarityMatrix {
    Eigen::MatrixXd values;  // (K+L) x (K+L)
    double phi = 0.1;
};

/// Raw ridge coefficients reconstructing `row` from every row of `all`.
Eigen::VectorXd solve_similarity_row(const Eigen::Ref<const Eigen::VectorXd>& row,
                                     const Eigen::Ref<const Eigen::MatrixXd>& all, double phi);

/// Clamps negatives to zero and rescales to unit sum; an all-zero row
/// becomes uniform.
Eigen::VectorXd normalize_similarity(const Eigen::Ref<const Eigen::VectorXd>& raw);

SimilarityMatrix build_similarity_matrix(const AttributeMatrix& attrs, double phi);

/// All-ones masks; turns the masked unseen loss into plain cross-entropy.
SimilarityMatrix unit_similarity(Index num_classes);

}  // namespace zsl
