#include "zsl/dpsr.hpp"

#include "zsl/errors.hpp"
#include "zsl/ridge.hpp"

namespace zsl {

Eigen::VectorXd solve_similarity_row(const Eigen::Ref<const Eigen::VectorXd>& row,
                                     const Eigen::Ref<const Eigen::MatrixXd>& all, double phi) {
    if (!(phi > 0.0)) throw ConfigError("phi must be positive");
    return ridge_solve(all, row, phi);
}

Eigen::VectorXd normalize_similarity(const Eigen::Ref<const Eigen::VectorXd>& raw) {
    Eigen::VectorXd clamped = raw.cwiseMax(0.0);
    const double total = clamped.sum();
    if (!(total > 0.0)) return Eigen::VectorXd::Constant(raw.size(), 1.0 / static_cast<double>(raw.size()));
    return clamped / total;
}

SimilarityMatrix build_similarity_matrix(const AttributeMatrix& attrs, double phi) {
    const Index C = attrs.num_classes();
    SimilarityMatrix sim;
    sim.phi = phi;
    sim.values.resize(C, C);
    for (Index p = 0; p < C; ++p) {
        const Eigen::VectorXd raw = solve_similarity_row(attrs.row(p).transpose(), attrs.values, phi);
        sim.values.row(p) = normalize_similarity(raw).transpose();
    }
    if (!sim.values.allFinite()) throw NumericalError("similarity matrix has non-finite entries");
    return sim;
}

SimilarityMatrix unit_similarity(Index num_classes) {
    SimilarityMatrix sim;
    sim.values = Eigen::MatrixXd::Ones(num_classes, num_classes);
    sim.phi = 0.0;
    return sim;
}

}  // namespace zsl
