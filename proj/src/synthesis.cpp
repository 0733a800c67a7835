#include "zsl/synthesis.hpp"

#include <algorithm>
#include <sstream>

#include "zsl/errors.hpp"
#include "zsl/random.hpp"

namespace zsl {

Index TrainingView::num_synthetic() const {
    return static_cast<Index>(std::count(synthetic.begin(), synthetic.end(), true));
}

ClassMeans compute_seen_means(const FeatureDataset& dataset) {
    const Index K = dataset.num_seen;
    ClassMeans out;
    out.means = Eigen::MatrixXd::Zero(dataset.dim(), K);
    out.counts.assign(static_cast<std::size_t>(K), 0);
    for (auto i : dataset.splits.train_seen) {
        const auto c = dataset.labels[i];
        if (c >= K) throw DataError("train_seen row " + std::to_string(i) + " has unseen label");
        out.means.col(c) += dataset.features.row(static_cast<Index>(i)).transpose();
        ++out.counts[c];
    }
    for (Index c = 0; c < K; ++c) {
        const auto n = out.counts[static_cast<std::size_t>(c)];
        if (n == 0) throw DataError("seen class " + std::to_string(c) + " has no training samples");
        out.means.col(c) /= static_cast<double>(n);
    }
    return out;
}

SparseCode ridge_code(const Eigen::Ref<const Eigen::VectorXd>& unseen_attributes,
                      const Eigen::Ref<const Eigen::MatrixXd>& seen_attributes, double lambda,
                      ClassId target_class) {
    SparseCode code;
    code.coefficients = ridge_solve(seen_attributes, unseen_attributes, lambda);
    code.lambda = lambda;
    code.target_class = target_class;
    return code;
}

Eigen::VectorXd synthesize_prototype(const ClassMeans& means, const SparseCode& code) {
    if (code.coefficients.size() != means.means.cols()) {
        std::ostringstream os;
        os << "synthesize_prototype: code has " << code.coefficients.size() << " coefficients for "
           << means.means.cols() << " seen classes";
        throw DataError(os.str());
    }
    return means.means * code.coefficients;
}

PrototypeSet generate_prototype_set(const AttributeMatrix& attrs, const ClassMeans& means,
                                    const SynthesisConfig& cfg) {
    if (cfg.per_class < 1) throw ConfigError("prototypes per class must be >= 1");
    if (!(cfg.lambda_min > 0.0) || !(cfg.lambda_min <= cfg.lambda_max)) {
        throw ConfigError("lambda range must satisfy 0 < lambda_min <= lambda_max");
    }
    if (means.means.cols() != attrs.num_seen) throw DataError("class means do not match seen class count");

    const Index K = attrs.num_seen, L = attrs.num_unseen, P = cfg.per_class;

    // All draws happen up front so the set does not depend on solve order.
    Rng rng = substream(cfg.seed, "lambda");
    std::vector<std::vector<double>> lambdas(static_cast<std::size_t>(L));
    for (auto& row : lambdas) {
        row.resize(static_cast<std::size_t>(P));
        for (auto& l : row) l = rng.uniform(cfg.lambda_min, cfg.lambda_max);
        std::sort(row.begin(), row.end());
    }

    PrototypeSet out;
    out.prototypes.resize(L * P, means.means.rows());
    out.labels.reserve(static_cast<std::size_t>(L * P));
    out.lambdas.reserve(static_cast<std::size_t>(L * P));
    const Eigen::MatrixXd seen = attrs.seen();
    for (Index u = 0; u < L; ++u) {
        const auto cls = static_cast<ClassId>(K + u);
        const Eigen::VectorXd target = attrs.row(K + u).transpose();
        for (Index k = 0; k < P; ++k) {
            const double lambda = lambdas[static_cast<std::size_t>(u)][static_cast<std::size_t>(k)];
            const SparseCode code = ridge_code(target, seen, lambda, cls);
            out.prototypes.row(u * P + k) = synthesize_prototype(means, code).transpose();
            out.labels.push_back(cls);
            out.lambdas.push_back(lambda);
        }
    }
    return out;
}

TrainingView augment_training_set(const FeatureDataset& dataset, const PrototypeSet& protos) {
    if (!protos.empty() && protos.prototypes.cols() != dataset.dim()) {
        throw DataError("prototype dimension " + std::to_string(protos.prototypes.cols()) +
                        " does not match feature dimension " + std::to_string(dataset.dim()));
    }
    const auto& real = dataset.splits.train_seen;
    const Index n_real = static_cast<Index>(real.size());
    TrainingView view;
    view.features.resize(n_real + protos.size(), dataset.dim());
    view.features.topRows(n_real) = dataset.gather(real);
    if (!protos.empty()) view.features.bottomRows(protos.size()) = protos.prototypes;
    view.labels = dataset.gather_labels(real);
    view.labels.insert(view.labels.end(), protos.labels.begin(), protos.labels.end());
    view.synthetic.assign(static_cast<std::size_t>(n_real), false);
    view.synthetic.resize(static_cast<std::size_t>(view.size()), true);
    return view;
}

}  // namespace zsl
