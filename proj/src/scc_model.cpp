#include "zsl/scc_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zsl/random.hpp"

namespace zsl {
namespace {

Eigen::MatrixXd uniform_block(Index rows, Index cols, double bound, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Index c = 0; c < cols; ++c) {
        for (Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-bound, bound);
    }
    return m;
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

SccModel SccModel::zeros(const SccArchitecture& a) {
    if (a.attribute_dim < 1 || a.feature_dim < 1 || a.encoder_hidden < 1 || a.scorer_hidden < 1) {
        throw std::invalid_argument("SccArchitecture: all dimensions must be positive");
    }
    SccModel m;
    m.arch = a;
    m.enc_w1 = Eigen::MatrixXd::Zero(a.encoder_hidden, a.attribute_dim);
    m.enc_b1 = Eigen::MatrixXd::Zero(a.encoder_hidden, 1);
    m.enc_w2 = Eigen::MatrixXd::Zero(a.feature_dim, a.encoder_hidden);
    m.enc_b2 = Eigen::MatrixXd::Zero(a.feature_dim, 1);
    m.sc_w1 = Eigen::MatrixXd::Zero(a.scorer_hidden, a.feature_dim);
    m.sc_b1 = Eigen::MatrixXd::Zero(a.scorer_hidden, 1);
    m.sc_w2 = Eigen::MatrixXd::Zero(1, a.scorer_hidden);
    m.sc_b2 = Eigen::MatrixXd::Zero(1, 1);
    return m;
}

SccModel SccModel::initialized(const SccArchitecture& a, std::uint64_t seed) {
    SccModel m = zeros(a);
    Rng rng(seed);
    auto layer = [&rng](Eigen::MatrixXd& w, Eigen::MatrixXd& b) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
        w = uniform_block(w.rows(), w.cols(), bound, rng);
        b = uniform_block(b.rows(), b.cols(), bound, rng);
    };
    layer(m.enc_w1, m.enc_b1);
    layer(m.enc_w2, m.enc_b2);
    layer(m.sc_w1, m.sc_b1);
    layer(m.sc_w2, m.sc_b2);
    return m;
}

Index SccModel::parameter_count() const {
    Index n = 0;
    for_each([&](std::string_view, const Eigen::MatrixXd& p) { n += p.size(); });
    return n;
}

void SccModel::for_each(const std::function<void(std::string_view, Eigen::MatrixXd&)>& f) {
    f("encoder.w1", enc_w1);
    f("encoder.b1", enc_b1);
    f("encoder.w2", enc_w2);
    f("encoder.b2", enc_b2);
    f("scorer.w1", sc_w1);
    f("scorer.b1", sc_b1);
    f("scorer.w2", sc_w2);
    f("scorer.b2", sc_b2);
}

void SccModel::for_each(const std::function<void(std::string_view, const Eigen::MatrixXd&)>& f) const {
    f("encoder.w1", enc_w1);
    f("encoder.b1", enc_b1);
    f("encoder.w2", enc_w2);
    f("encoder.b2", enc_b2);
    f("scorer.w1", sc_w1);
    f("scorer.b1", sc_b1);
    f("scorer.w2", sc_w2);
    f("scorer.b2", sc_b2);
}

bool SccModel::operator==(const SccModel& o) const {
    auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
    };
    return same(enc_w1, o.enc_w1) && same(enc_b1, o.enc_b1) && same(enc_w2, o.enc_w2) &&
           same(enc_b2, o.enc_b2) && same(sc_w1, o.sc_w1) && same(sc_b1, o.sc_b1) && same(sc_w2, o.sc_w2) &&
           same(sc_b2, o.sc_b2);
}

Eigen::MatrixXd encode_semantics(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& attrs) {
    if (attrs.cols() != model.arch.attribute_dim) {
        throw std::invalid_argument("encode_semantics: attribute dimension mismatch");
    }
    Eigen::MatrixXd hidden = (attrs * model.enc_w1.transpose()).rowwise() + model.enc_b1.col(0).transpose();
    hidden = hidden.cwiseMax(0.0);
    Eigen::MatrixXd out = (hidden * model.enc_w2.transpose()).rowwise() + model.enc_b2.col(0).transpose();
    const double slope = model.arch.leaky_slope;
    return out.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
}

double score(const SccModel& model, const Eigen::Ref<const Eigen::VectorXd>& fused) {
    if (fused.size() != model.arch.feature_dim) throw std::invalid_argument("score: fused length mismatch");
    const Eigen::VectorXd hidden = (model.sc_w1 * fused + model.sc_b1.col(0)).cwiseMax(0.0);
    const double logit = model.sc_w2.row(0).dot(hidden) + model.sc_b2(0, 0);
    return std::clamp(sigmoid(logit), kScoreEpsilon, 1.0 - kScoreEpsilon);
}

Eigen::MatrixXd score_matrix(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features,
                             const Eigen::Ref<const Eigen::MatrixXd>& class_embeddings) {
    if (features.cols() != model.arch.feature_dim || class_embeddings.cols() != model.arch.feature_dim) {
        throw std::invalid_argument("score_matrix: feature dimension mismatch");
    }
    const Index B = features.rows(), C = class_embeddings.rows();
    Eigen::MatrixXd fused(B * C, features.cols());
    for (Index i = 0; i < B; ++i) {
        for (Index j = 0; j < C; ++j) fused.row(i * C + j) = features.row(i).cwiseProduct(class_embeddings.row(j));
    }
    const Eigen::MatrixXd hidden =
        ((fused * model.sc_w1.transpose()).rowwise() + model.sc_b1.col(0).transpose()).cwiseMax(0.0);
    const Eigen::VectorXd logits = (hidden * model.sc_w2.row(0).transpose()).array() + model.sc_b2(0, 0);
    Eigen::MatrixXd scores(B, C);
    for (Index i = 0; i < B; ++i) {
        for (Index j = 0; j < C; ++j) {
            scores(i, j) = std::clamp(sigmoid(logits(i * C + j)), kScoreEpsilon, 1.0 - kScoreEpsilon);
        }
    }
    return scores;
}

}  // namespace zsl
