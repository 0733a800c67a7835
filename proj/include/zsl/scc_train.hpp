#pragma once

#include <cstdint>
#include <vector>

#include "zsl/dpsr.hpp"
#include "zsl/scc_model.hpp"
#include "zsl/synthesis.hpp"

namespace zsl {

struct TrainConfig {
    double beta = 0.2;
    double learning_rate = 1e-3;
    Index batch_size = 64;
    Index epochs = 50;
    std::uint64_t seed = 0;
    bool dpsr_enabled = true;
    // Optimize the unsplit cross-entropy over all classes instead of
    // L_S + beta * L_U; beta and the masks are ignored.
    bool plain_loss_mode = false;

    void check() const;
};

/// What the objective sums over a batch.
struct LossSpec {
    Index num_seen = 0;
    double beta = 0.2;
    bool plain = false;
};

struct ObjectiveValue {
    double total = 0.0;
    double seen = 0.0;    // L_S, or the joint loss in plain mode
    double unseen = 0.0;  // L_U (0 in plain mode)
};

/// Summed batch objective. When `gradient` is non-null it receives
/// d(total)/d(parameter) in the model's layout.
ObjectiveValue objective(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const std::vector<ClassId>& labels, const Eigen::Ref<const Eigen::MatrixXd>& attrs,
                         const SimilarityMatrix& sim, const LossSpec& spec, SccModel* gradient = nullptr);

struct GradientCheckResult {
    double max_relative_error = 0.0;
    Index parameters_checked = 0;
};

/// Analytic gradient against central differences over every parameter.
/// Relative error is |a - n| / max(|a|, |n|, 1e-4) per entry.
GradientCheckResult gradient_check(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features,
                                   const std::vector<ClassId>& labels, const Eigen::Ref<const Eigen::MatrixXd>& attrs,
                                   const SimilarityMatrix& sim, const LossSpec& spec, double step = 1e-5);

struct TrainResult {
    SccModel model;
    // Mean per-sample objective of each epoch.
    std::vector<double> loss_history;
};

/// Adam on (L_S + beta L_U) / batch_size over the shuffled training view.
/// The "shuffle" substream of cfg.seed fixes the sample order.
TrainResult train(SccModel model, const TrainingView& view, const AttributeMatrix& attrs,
                  const SimilarityMatrix& sim, const TrainConfig& cfg);

}  // namespace zsl
