#pragma once

#include <string>
#include <vector>

#include "zsl/scc_model.hpp"
#include "zsl/types.hpp"

namespace zsl {

/// First index of the largest entry in [begin, end).
template <typename Derived>
Index argmax_range(const Eigen::DenseBase<Derived>& scores, Index begin, Index end) {
    Index best = begin;
    for (Index j = begin + 1; j < end; ++j) {
        if (scores(j) > scores(best)) best = j;
    }
    return best;
}

/// Restricted to unseen columns K..C-1; returns the global class index.
template <typename Derived>
ClassId predict_czsl(const Eigen::DenseBase<Derived>& scores, Index num_seen) {
    return static_cast<ClassId>(argmax_range(scores, num_seen, scores.size()));
}

template <typename Derived>
ClassId predict_gzsl(const Eigen::DenseBase<Derived>& scores) {
    return static_cast<ClassId>(argmax_range(scores, 0, scores.size()));
}

ClassId predict_czsl(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& class_embeddings,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feature, Index num_seen);
ClassId predict_gzsl(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& class_embeddings,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feature);

/// Mean over `classes` of the per-class hit rate, in percent. Every class
/// counts equally regardless of its sample count.
double per_class_top1(const std::vector<ClassId>& predictions, const std::vector<ClassId>& labels,
                      const std::vector<ClassId>& classes);

template <typename Scalar>
Scalar harmonic_mean(Scalar unseen, Scalar seen) {
    if (unseen + seen <= Scalar(0)) return Scalar(0);
    return Scalar(2) * unseen * seen / (unseen + seen);
}

struct ClassAccuracy {
    ClassId cls = 0;
    bool unseen = false;
    Index samples = 0;
    double gzsl = 0.0;
    double czsl = 0.0;  // unseen classes only
};

struct EvalReport {
    double t1_czsl = 0.0;
    double acc_unseen = 0.0;
    double acc_seen = 0.0;
    double harmonic = 0.0;
    std::vector<ClassAccuracy> per_class;
};

/// CZSL on test_unseen and GZSL on test_seen / test_unseen.
EvalReport evaluate(const SccModel& model, const FeatureDataset& dataset, const AttributeMatrix& attrs);

}  // namespace zsl
