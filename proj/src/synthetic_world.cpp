#include "zsl/synthetic_world.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "zsl/errors.hpp"
#include "zsl/random.hpp"

namespace zsl {

SyntheticWorld make_synthetic_world(const SyntheticWorldParams& p) {
    if (p.num_seen < 2 || p.num_unseen < 1) throw ConfigError("synthetic world needs K >= 2 and L >= 1");
    if (p.feature_dim < 1 || p.attribute_dim < 1) throw ConfigError("synthetic world dimensions must be positive");
    if (p.attribute_dim < p.num_unseen) throw ConfigError("synthetic world needs d_a >= L");
    if (p.samples_per_seen_class < 1 || p.test_samples_per_class < 1) {
        throw ConfigError("synthetic world needs at least one sample per class");
    }
    if (p.noise_scale < 0.0) throw ConfigError("noise_scale must be non-negative");

    const Index K = p.num_seen, L = p.num_unseen, C = K + L;
    Rng means_rng = substream(p.seed, "world.means");
    Rng attr_rng = substream(p.seed, "world.attributes");
    Rng mix_rng = substream(p.seed, "world.mixing");
    Rng noise_rng = substream(p.seed, "world.noise");

    SyntheticWorld w;
    w.seen_means.resize(K, p.feature_dim);
    for (Index i = 0; i < w.seen_means.size(); ++i) w.seen_means.data()[i] = means_rng.normal();

    w.attributes.num_seen = K;
    w.attributes.num_unseen = L;
    w.attributes.values.resize(C, p.attribute_dim);
    for (Index c = 0; c < K; ++c) {
        for (Index j = 0; j < p.attribute_dim; ++j) w.attributes.values(c, j) = attr_rng.uniform();
    }

    // Uniform positive weights renormalized to sum to 1. Supports walk a
    // seeded permutation of the seen classes so they overlap only once
    // L * support exceeds K.
    const Index support = std::clamp<Index>(p.mixture_support, 1, K);
    std::vector<Index> order(static_cast<std::size_t>(K));
    std::iota(order.begin(), order.end(), Index{0});
    shuffle(order, mix_rng);
    w.mixing = Eigen::MatrixXd::Zero(L, K);
    for (Index u = 0; u < L; ++u) {
        double total = 0.0;
        for (Index s = 0; s < support; ++s) {
            const double v = mix_rng.uniform(0.5, 1.0);
            w.mixing(u, order[static_cast<std::size_t>((u * support + s) % K)]) += v;
            total += v;
        }
        w.mixing.row(u) /= total;
    }
    w.unseen_means = w.mixing * w.seen_means;
    w.attributes.values.bottomRows(L) = w.mixing * w.attributes.values.topRows(K);
    for (Index c = 0; c < C; ++c) {
        w.attributes.class_names.push_back((c < K ? "seen_" : "unseen_") + std::to_string(c < K ? c : c - K));
    }

    auto& ds = w.dataset;
    ds.num_seen = K;
    ds.num_unseen = L;
    const Index n_total = K * (p.samples_per_seen_class + p.test_samples_per_class) + L * p.test_samples_per_class;
    ds.features.resize(n_total, p.feature_dim);
    ds.labels.reserve(static_cast<std::size_t>(n_total));

    Index row = 0;
    auto emit = [&](Index cls, const Eigen::RowVectorXd& mean, std::vector<std::size_t>& split) {
        for (Index j = 0; j < p.feature_dim; ++j) {
            const double noise = p.noise_scale > 0.0 ? p.noise_scale * noise_rng.normal() : 0.0;
            ds.features(row, j) = mean(j) + noise;
        }
        ds.labels.push_back(static_cast<ClassId>(cls));
        split.push_back(static_cast<std::size_t>(row));
        ++row;
    };
    for (Index c = 0; c < K; ++c) {
        for (Index s = 0; s < p.samples_per_seen_class; ++s) emit(c, w.seen_means.row(c), ds.splits.train_seen);
    }
    for (Index c = 0; c < K; ++c) {
        for (Index s = 0; s < p.test_samples_per_class; ++s) emit(c, w.seen_means.row(c), ds.splits.test_seen);
    }
    for (Index u = 0; u < L; ++u) {
        for (Index s = 0; s < p.test_samples_per_class; ++s) emit(K + u, w.unseen_means.row(u), ds.splits.test_unseen);
    }
    return w;
}

}  // namespace zsl
