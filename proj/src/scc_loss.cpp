#include "zsl/scc_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zsl/scc_model.hpp"

namespace zsl {
namespace {

double clamp_prob(double p) { return std::clamp(p, kScoreEpsilon, 1.0 - kScoreEpsilon); }

double bce(double p, double m) { return -(m * std::log(p) + (1.0 - m) * std::log(1.0 - p)); }

void same_shape(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
}

}  // namespace

double loss_seen(const Eigen::Ref<const Eigen::MatrixXd>& scores, const Eigen::Ref<const Eigen::MatrixXd>& onehot) {
    same_shape(scores, onehot, "loss_seen");
    double total = 0.0;
    for (Index i = 0; i < scores.rows(); ++i) {
        for (Index j = 0; j < scores.cols(); ++j) total += bce(clamp_prob(scores(i, j)), onehot(i, j));
    }
    return total;
}

double loss_unseen(const Eigen::Ref<const Eigen::MatrixXd>& scores, const Eigen::Ref<const Eigen::MatrixXd>& onehot,
                   const Eigen::Ref<const Eigen::MatrixXd>& masks) {
    same_shape(scores, onehot, "loss_unseen");
    same_shape(scores, masks, "loss_unseen");
    if ((masks.array() < 0.0).any() || (masks.array() > 1.0).any()) {
        throw std::invalid_argument("loss_unseen: similarity mask outside [0, 1]");
    }
    double total = 0.0;
    for (Index i = 0; i < scores.rows(); ++i) {
        for (Index j = 0; j < scores.cols(); ++j) {
            total += bce(clamp_prob(scores(i, j) * masks(i, j)), onehot(i, j));
        }
    }
    return total;
}

double loss_joint(const Eigen::Ref<const Eigen::MatrixXd>& scores, const Eigen::Ref<const Eigen::MatrixXd>& onehot) {
    return loss_seen(scores, onehot);
}

Eigen::MatrixXd one_hot(const std::vector<ClassId>& labels, Index num_classes) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Index>(labels.size()), num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= num_classes) throw std::invalid_argument("one_hot: label out of range");
        m(static_cast<Index>(i), labels[i]) = 1.0;
    }
    return m;
}

}  // namespace zsl
