#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "zsl/errors.hpp"
#include "zsl/types.hpp"

namespace zsl {

/// Attribute re-scoring settings: entries strictly above `threshold` are
/// doubled, then everything is scaled by `weight`.
struct MsasConfig {
    double weight = 1.0;
    double threshold = 0.5;

    void check() const {
        if (!(weight > 0.0) || !std::isfinite(weight)) throw ConfigError("MSAS weight must be positive");
        if (std::isnan(threshold)) throw ConfigError("MSAS threshold must not be NaN");
    }
};

/// Elementwise (A + A * [A > threshold]) * weight.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
msas_rescore(const Eigen::MatrixBase<Derived>& scores, typename Derived::Scalar weight,
             typename Derived::Scalar threshold) {
    using Scalar = typename Derived::Scalar;
    if (!scores.allFinite()) throw DataError("MSAS: non-finite attribute score");
    const auto mask = (scores.array() > threshold).template cast<Scalar>();
    return ((scores.array() + scores.array() * mask) * weight).matrix();
}

inline AttributeMatrix msas_rescore(const AttributeMatrix& attrs, const MsasConfig& cfg) {
    cfg.check();
    AttributeMatrix out = attrs;
    out.values = msas_rescore(attrs.values, cfg.weight, cfg.threshold);
    return out;
}

}  // namespace zsl
