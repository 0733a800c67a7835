#pragma once

#include <string>

#include <Eigen/Dense>

#include "zsl/errors.hpp"

namespace zsl {

/// Ridge reconstruction of `target` from the rows of `dictionary`:
///
///   argmin_w || target - dictionary^T w ||^2 + lambda || w ||^2
///
/// solved through the regularized normal equations
/// (D D^T + lambda I) w = D target. One coefficient per dictionary row.
template <typename DerivedD, typename DerivedT>
Eigen::Matrix<typename DerivedD::Scalar, Eigen::Dynamic, 1>
ridge_solve(const Eigen::MatrixBase<DerivedD>& dictionary, const Eigen::MatrixBase<DerivedT>& target,
            typename DerivedD::Scalar lambda) {
    using Scalar = typename DerivedD::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    if (target.size() != dictionary.cols()) {
        throw DataError("ridge: target length " + std::to_string(target.size()) +
                        " does not match dictionary width " + std::to_string(dictionary.cols()));
    }
    if (!(lambda >= Scalar(0))) throw ConfigError("ridge: lambda must be non-negative");

    const Eigen::Index atoms = dictionary.rows();
    Matrix gram = dictionary * dictionary.transpose();
    gram.diagonal().array() += lambda;
    const Vector t = target;
    const Vector rhs = dictionary * t;

    Vector w;
    if (lambda > Scalar(0)) {
        Eigen::LLT<Matrix> llt(gram);
        if (llt.info() != Eigen::Success) throw NumericalError("ridge: normal matrix not positive definite");
        w = llt.solve(rhs);
    } else {
        Eigen::FullPivLU<Matrix> lu(gram);
        if (!lu.isInvertible()) {
            throw NumericalError("ridge: singular normal matrix at lambda = 0 (" + std::to_string(atoms) +
                                 " atoms, rank " + std::to_string(lu.rank()) + ")");
        }
        w = lu.solve(rhs);
    }
    if (!w.allFinite()) throw NumericalError("ridge: non-finite solution");
    return w;
}

}  // namespace zsl
