#include "zsl/scc_train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zsl/errors.hpp"
#include "zsl/scc_loss.hpp"
#include "zsl/random.hpp"

namespace zsl {
namespace {

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

bool interior(double p) { return p > kScoreEpsilon && p < 1.0 - kScoreEpsilon; }

double clamp_prob(double p) { return std::clamp(p, kScoreEpsilon, 1.0 - kScoreEpsilon); }

}  // namespace

void TrainConfig::check() const {
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
    if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be >= 0");
}

ObjectiveValue objective(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const std::vector<ClassId>& labels, const Eigen::Ref<const Eigen::MatrixXd>& attrs,
                         const SimilarityMatrix& sim, const LossSpec& spec, SccModel* gradient) {
    const Index B = features.rows(), C = attrs.rows(), K = spec.num_seen;
    if (static_cast<Index>(labels.size()) != B) throw std::invalid_argument("objective: label count mismatch");
    if (sim.values.rows() != C || sim.values.cols() != C) {
        throw std::invalid_argument("objective: similarity matrix does not match class count");
    }
    const double slope = model.arch.leaky_slope;

    // Encoder.
    const Eigen::MatrixXd enc_pre1 = (attrs * model.enc_w1.transpose()).rowwise() + model.enc_b1.col(0).transpose();
    const Eigen::MatrixXd enc_h1 = enc_pre1.cwiseMax(0.0);
    const Eigen::MatrixXd enc_pre2 = (enc_h1 * model.enc_w2.transpose()).rowwise() + model.enc_b2.col(0).transpose();
    const Eigen::MatrixXd embed = enc_pre2.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });

    // Fusion, row i * C + j.
    Eigen::MatrixXd fused(B * C, features.cols());
    for (Index i = 0; i < B; ++i) {
        for (Index j = 0; j < C; ++j) fused.row(i * C + j) = features.row(i).cwiseProduct(embed.row(j));
    }

    // Scorer.
    const Eigen::MatrixXd sc_pre1 = (fused * model.sc_w1.transpose()).rowwise() + model.sc_b1.col(0).transpose();
    const Eigen::MatrixXd sc_h1 = sc_pre1.cwiseMax(0.0);
    const Eigen::VectorXd logits = (sc_h1 * model.sc_w2.row(0).transpose()).array() + model.sc_b2(0, 0);

    ObjectiveValue value;
    Eigen::VectorXd d_logits(B * C);
    for (Index i = 0; i < B; ++i) {
        const ClassId y = labels[static_cast<std::size_t>(i)];
        for (Index j = 0; j < C; ++j) {
            const Index r = i * C + j;
            const double raw = sigmoid(logits(r));
            const double c = clamp_prob(raw);
            const double dc = interior(raw) ? raw * (1.0 - raw) : 0.0;
            const double m = (static_cast<Index>(y) == j) ? 1.0 : 0.0;

            double p = c, dp = 1.0, weight = 1.0;
            const bool unseen_term = !spec.plain && j >= K;
            if (unseen_term) {
                const double q = c * sim.values(y, j);
                p = clamp_prob(q);
                dp = interior(q) ? sim.values(y, j) : 0.0;
                weight = spec.beta;
            }
            const double term = -(m * std::log(p) + (1.0 - m) * std::log(1.0 - p));
            (unseen_term ? value.unseen : value.seen) += term;
            d_logits(r) = weight * (-m / p + (1.0 - m) / (1.0 - p)) * dp * dc;
        }
    }
    value.total = spec.plain ? value.seen : total_loss(value.seen, value.unseen, spec.beta);

    if (gradient == nullptr) return value;

    SccModel& g = *gradient;
    g.arch = model.arch;
    g.sc_w2 = d_logits.transpose() * sc_h1;
    g.sc_b2 = Eigen::MatrixXd::Constant(1, 1, d_logits.sum());
    Eigen::MatrixXd d_sc_h1 = d_logits * model.sc_w2;
    d_sc_h1.array() *= (sc_pre1.array() > 0.0).cast<double>();
    g.sc_w1 = d_sc_h1.transpose() * fused;
    g.sc_b1 = d_sc_h1.colwise().sum().transpose();
    const Eigen::MatrixXd d_fused = d_sc_h1 * model.sc_w1;

    Eigen::MatrixXd d_embed = Eigen::MatrixXd::Zero(C, features.cols());
    for (Index i = 0; i < B; ++i) {
        for (Index j = 0; j < C; ++j) d_embed.row(j) += d_fused.row(i * C + j).cwiseProduct(features.row(i));
    }
    const Eigen::MatrixXd d_enc_pre2 =
        d_embed.cwiseProduct(enc_pre2.unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; }));
    g.enc_w2 = d_enc_pre2.transpose() * enc_h1;
    g.enc_b2 = d_enc_pre2.colwise().sum().transpose();
    Eigen::MatrixXd d_enc_h1 = d_enc_pre2 * model.enc_w2;
    d_enc_h1.array() *= (enc_pre1.array() > 0.0).cast<double>();
    g.enc_w1 = d_enc_h1.transpose() * attrs;
    g.enc_b1 = d_enc_h1.colwise().sum().transpose();
    return value;
}

GradientCheckResult gradient_check(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& features,
                                   const std::vector<ClassId>& labels, const Eigen::Ref<const Eigen::MatrixXd>& attrs,
                                   const SimilarityMatrix& sim, const LossSpec& spec, double step) {
    SccModel analytic;
    objective(model, features, labels, attrs, sim, spec, &analytic);

    GradientCheckResult result;
    SccModel probe = model;
    std::vector<Eigen::MatrixXd*> probe_blocks;
    std::vector<const Eigen::MatrixXd*> grad_blocks;
    probe.for_each([&](std::string_view, Eigen::MatrixXd& p) { probe_blocks.push_back(&p); });
    analytic.for_each([&](std::string_view, const Eigen::MatrixXd& p) { grad_blocks.push_back(&p); });

    for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
        Eigen::MatrixXd& param = *probe_blocks[b];
        for (Index k = 0; k < param.size(); ++k) {
            const double saved = param.data()[k];
            param.data()[k] = saved + step;
            const double up = objective(probe, features, labels, attrs, sim, spec).total;
            param.data()[k] = saved - step;
            const double down = objective(probe, features, labels, attrs, sim, spec).total;
            param.data()[k] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double exact = grad_blocks[b]->data()[k];
            const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-4});
            result.max_relative_error = std::max(result.max_relative_error, std::abs(exact - numeric) / denom);
            ++result.parameters_checked;
        }
    }
    return result;
}

TrainResult train(SccModel model, const TrainingView& view, const AttributeMatrix& attrs,
                  const SimilarityMatrix& sim, const TrainConfig& cfg) {
    cfg.check();
    if (view.size() == 0) throw DataError("train: empty training set");
    if (view.features.cols() != model.arch.feature_dim || attrs.dim() != model.arch.attribute_dim) {
        throw DataError("train: model dimensions do not match the data");
    }
    const SimilarityMatrix masks = cfg.dpsr_enabled ? sim : unit_similarity(attrs.num_classes());
    const LossSpec spec{attrs.num_seen, cfg.beta, cfg.plain_loss_mode};

    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
    SccModel first = SccModel::zeros(model.arch);
    SccModel second = SccModel::zeros(model.arch);
    SccModel grad;
    long step = 0;

    Rng rng = substream(cfg.seed, "shuffle");
    std::vector<std::size_t> order(static_cast<std::size_t>(view.size()));
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    Eigen::MatrixXd batch_x;
    std::vector<ClassId> batch_y;
    for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle(order, rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const auto n = static_cast<Index>(end - start);
            batch_x.resize(n, view.features.cols());
            batch_y.clear();
            for (std::size_t k = start; k < end; ++k) {
                batch_x.row(static_cast<Index>(k - start)) = view.features.row(static_cast<Index>(order[k]));
                batch_y.push_back(view.labels[order[k]]);
            }
            const ObjectiveValue v = objective(model, batch_x, batch_y, attrs.values, masks, spec, &grad);
            if (!std::isfinite(v.total)) {
                std::ostringstream os;
                os << "training diverged: non-finite loss at epoch " << epoch << ", batch starting at " << start;
                throw NumericalError(os.str());
            }
            epoch_loss += v.total;

            ++step;
            const double scale = 1.0 / static_cast<double>(n);
            const double lr_t = cfg.learning_rate * std::sqrt(1.0 - std::pow(kBeta2, static_cast<double>(step))) /
                                (1.0 - std::pow(kBeta1, static_cast<double>(step)));
            std::vector<Eigen::MatrixXd*> p, g, m1, m2;
            model.for_each([&](std::string_view, Eigen::MatrixXd& x) { p.push_back(&x); });
            grad.for_each([&](std::string_view, Eigen::MatrixXd& x) { g.push_back(&x); });
            first.for_each([&](std::string_view, Eigen::MatrixXd& x) { m1.push_back(&x); });
            second.for_each([&](std::string_view, Eigen::MatrixXd& x) { m2.push_back(&x); });
            for (std::size_t b = 0; b < p.size(); ++b) {
                const Eigen::ArrayXXd gb = g[b]->array() * scale;
                m1[b]->array() = kBeta1 * m1[b]->array() + (1.0 - kBeta1) * gb;
                m2[b]->array() = kBeta2 * m2[b]->array() + (1.0 - kBeta2) * gb.square();
                p[b]->array() -= lr_t * m1[b]->array() / (m2[b]->array().sqrt() + kAdamEps);
            }
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(view.size()));
    }
    result.model = std::move(model);
    return result;
}

}  // namespace zsl
