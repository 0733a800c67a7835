#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "zsl/types.hpp"

namespace zsl {

/// Lower/upper clamp applied to every score before a logarithm.
inline constexpr double kScoreEpsilon = 1e-7;

struct SccArchitecture {
    Index attribute_dim = 0;
    Index feature_dim = 0;
    Index encoder_hidden = 1024;
    Index scorer_hidden = 1024;
    double leaky_slope = 0.01;
};

/// Semantic encoder E: d_a -> hidden (ReLU) -> d_v (LeakyReLU), and
/// contrastive scorer f: d_v -> hidden (ReLU) -> 1 (sigmoid).
/// Weight matrices are (out x in); biases are column vectors.
struct SccModel {
    SccArchitecture arch;
    Eigen::MatrixXd enc_w1, enc_b1, enc_w2, enc_b2;
    Eigen::MatrixXd sc_w1, sc_b1, sc_w2, sc_b2;

    static SccModel zeros(const SccArchitecture& arch);
    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
    static SccModel initialized(const SccArchitecture& arch, std::uint64_t seed);

    Index parameter_count() const;

    /// Visits the eight parameter blocks in a fixed order.
    void for_each(const std::function<void(std::string_view, Eigen::MatrixXd&)>& f);
    void for_each(const std::function<void(std::string_view, const Eigen::MatrixXd&)>& f) const;

    bool operator==(const SccModel& other) const;
};

/// Row j = E(a_j).
Eigen::MatrixXd encode_semantics(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& attrs);

template <typename DerivedA, typename DerivedB>
auto fuse(const Eigen::MatrixBase<DerivedA>& feature, const Eigen::MatrixBase<DerivedB>& class_embedding) {
    if (feature.size() != class_embedding.size()) {
        throw std::invalid_argument("fuse: feature and class embedding lengths differ");
    }
    return feature.cwiseProduct(class_embedding).eval();
}

/// f(z), clamped to [eps, 1 - eps].
double score(const SccModel& model, const Eigen::Ref<const Eigen::VectorXd>& fused);

/// Scores for every (sample, class) pair: B x C.
Eigen::MatrixXd score_matrix(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features,
                             const Eigen::Ref<const Eigen::MatrixXd>& class_embeddings);

}  // namespace zsl
