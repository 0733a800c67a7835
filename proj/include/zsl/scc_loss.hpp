#pragma once

#include <vector>

#include "zsl/types.hpp"

namespace zsl {

// Binary cross-entropy sums; every argument matrix is (batch x columns).

/// -sum m log c + (1 - m) log(1 - c) over the seen columns.
double loss_seen(const Eigen::Ref<const Eigen::MatrixXd>& scores, const Eigen::Ref<const Eigen::MatrixXd>& onehot);

/// Same sum over unseen columns with each score multiplied by its
/// similarity mask; products are clamped to [eps, 1 - eps].
double loss_unseen(const Eigen::Ref<const Eigen::MatrixXd>& scores, const Eigen::Ref<const Eigen::MatrixXd>& onehot,
                   const Eigen::Ref<const Eigen::MatrixXd>& masks);

inline double total_loss(double seen, double unseen, double beta) { return seen + beta * unseen; }

/// Unsplit cross-entropy over all classes, no masks.
double loss_joint(const Eigen::Ref<const Eigen::MatrixXd>& scores, const Eigen::Ref<const Eigen::MatrixXd>& onehot);

Eigen::MatrixXd one_hot(const std::vector<ClassId>& labels, Index num_classes);

}  // namespace zsl
