#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "zsl/errors.hpp"
#include "zsl/kmeans.hpp"
#include "zsl/metrics.hpp"
#include "zsl/synthesis.hpp"
#include "zsl/synthetic_world.hpp"

using namespace zsl;

TEST(Predict, CzslIgnoresSeenColumns) {
    Eigen::RowVectorXd s(5);
    s << 0.9, 0.8, 0.1, 0.3, 0.2;
    EXPECT_EQ(predict_czsl(s, 2), 3u);
    EXPECT_EQ(predict_gzsl(s), 0u);
}

TEST(Predict, TiesBreakToLowestIndex) {
    Eigen::RowVectorXd s(4);
    s << 0.2, 0.7, 0.7, 0.7;
    EXPECT_EQ(predict_gzsl(s), 1u);
    EXPECT_EQ(predict_czsl(s, 2), 2u);
    EXPECT_EQ(predict_gzsl(Eigen::RowVectorXd::Constant(6, 0.5)), 0u);
}

TEST(Predict, CzslEqualsGzslOnRestrictedRow) {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        const Eigen::RowVectorXd s = testutil::random_matrix(1, 9, rng, 0, 1);
        EXPECT_EQ(predict_czsl(s, 6), 6 + predict_gzsl(s.tail(3)));
    }
}

TEST(PerClassTop1, ClassesWeighEqually) {
    std::vector<ClassId> labels(10, 0), preds(10, 0);
    labels.push_back(1);
    preds.push_back(0);
    EXPECT_DOUBLE_EQ(per_class_top1(preds, labels, {0, 1}), 50.0);
    EXPECT_DOUBLE_EQ(per_class_top1(preds, labels, {0}), 100.0);
}

TEST(PerClassTop1, MatchesTallyOracle) {
    Rng rng(8);
    std::vector<ClassId> labels, preds;
    for (int i = 0; i < 500; ++i) {
        labels.push_back(static_cast<ClassId>(rng.below(7)));
        preds.push_back(rng.uniform() < 0.6 ? labels.back() : static_cast<ClassId>(rng.below(7)));
    }
    double acc = 0.0;
    for (ClassId c = 0; c < 7; ++c) {
        double hit = 0, n = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == c) {
                n += 1;
                hit += preds[i] == c;
            }
        }
        acc += hit / n;
    }
    EXPECT_NEAR(per_class_top1(preds, labels, {0, 1, 2, 3, 4, 5, 6}), 100.0 * acc / 7.0, 1e-12);
}

TEST(PerClassTop1, PermutationInvariant) {
    Rng rng(9);
    std::vector<ClassId> labels, preds;
    for (int i = 0; i < 60; ++i) {
        labels.push_back(static_cast<ClassId>(i % 4));
        preds.push_back(static_cast<ClassId>(rng.below(4)));
    }
    const double base = per_class_top1(preds, labels, {0, 1, 2, 3});
    std::vector<std::size_t> order(60);
    std::iota(order.begin(), order.end(), 0u);
    shuffle(order, rng);
    std::vector<ClassId> l2, p2;
    for (auto i : order) {
        l2.push_back(labels[i]);
        p2.push_back(preds[i]);
    }
    EXPECT_DOUBLE_EQ(per_class_top1(p2, l2, {0, 1, 2, 3}), base);
}

TEST(PerClassTop1, EmptySubsetOrMissingClassIsAnError) {
    EXPECT_THROW(per_class_top1({0}, {0}, {}), DataError);
    EXPECT_THROW(per_class_top1({0}, {0}, {0, 1}), DataError);
}

TEST(HarmonicMean, ReportedFixtures) {
    EXPECT_NEAR(harmonic_mean(67.6, 82.3), 74.2, 0.05);
    EXPECT_NEAR(harmonic_mean(42.5, 49.9), 45.9, 0.05);
    EXPECT_EQ(harmonic_mean(0.0, 0.0), 0.0);
    EXPECT_EQ(harmonic_mean(0.0, 80.0), 0.0);
}

TEST(HarmonicMean, Bounds) {
    Rng rng(10);
    for (int t = 0; t < 1000; ++t) {
        const double u = rng.uniform(0, 100), s = rng.uniform(0, 100);
        const double h = harmonic_mean(u, s);
        EXPECT_LE(h, (u + s) / 2 + 1e-12);
        EXPECT_LE(h, 2 * std::min(u, s) + 1e-12);
        EXPECT_EQ(h, harmonic_mean(s, u));
    }
}

TEST(Evaluate, ZeroModelPredictsFirstClass) {
    SyntheticWorldParams p;
    p.seed = 1;
    p.feature_dim = 4;
    p.attribute_dim = 3;
    p.num_seen = 3;
    p.num_unseen = 2;
    p.samples_per_seen_class = 2;
    p.test_samples_per_class = 3;
    const SyntheticWorld w = make_synthetic_world(p);
    const EvalReport r = evaluate(SccModel::zeros({3, 4, 2, 2, 0.01}), w.dataset, w.attributes);
    // Constant scores: GZSL always picks class 0, CZSL class 3.
    EXPECT_DOUBLE_EQ(r.acc_seen, 100.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.acc_unseen, 0.0);
    EXPECT_DOUBLE_EQ(r.t1_czsl, 50.0);
    EXPECT_DOUBLE_EQ(r.harmonic, 0.0);
    EXPECT_EQ(r.per_class.size(), 5u);
}

TEST(KMeans, KEqualsNReturnsThePoints) {
    Rng rng(1);
    const Eigen::MatrixXd pts = testutil::random_matrix(5, 3, rng);
    Eigen::MatrixXd c = kmeans_subclusters(pts, 5, 7);
    for (Index i = 0; i < 5; ++i) {
        double best = 1e9;
        for (Index j = 0; j < 5; ++j) best = std::min(best, (pts.row(i) - c.row(j)).norm());
        EXPECT_EQ(best, 0.0);
    }
}

TEST(KMeans, SeparatesTwoBlobs) {
    Rng rng(2);
    Eigen::MatrixXd pts(40, 2);
    for (Index i = 0; i < 40; ++i) {
        const double cx = i < 20 ? -5.0 : 5.0;
        pts(i, 0) = cx + 0.1 * rng.normal();
        pts(i, 1) = 0.1 * rng.normal();
    }
    Eigen::MatrixXd c = kmeans_subclusters(pts, 2, 3);
    if (c(0, 0) > c(1, 0)) c.row(0).swap(c.row(1));
    EXPECT_NEAR(c(0, 0), pts.topRows(20).col(0).mean(), 1e-12);
    EXPECT_NEAR(c(1, 0), pts.bottomRows(20).col(0).mean(), 1e-12);
}

TEST(KMeans, DeterministicAndValidated) {
    Rng rng(3);
    const Eigen::MatrixXd pts = testutil::random_matrix(30, 4, rng);
    EXPECT_EQ(kmeans_subclusters(pts, 4, 11), kmeans_subclusters(pts, 4, 11));
    EXPECT_THROW(kmeans_subclusters(pts, 31, 1), DataError);
    EXPECT_THROW(kmeans_subclusters(pts, 0, 1), ConfigError);
}

namespace {

SyntheticWorld alignment_world(double noise) {
    SyntheticWorldParams p;
    p.seed = 7;
    p.noise_scale = noise;
    return make_synthetic_world(p);
}

}  // namespace

TEST(Alignment, CentroidPrototypesScoreZero) {
    const SyntheticWorld w = alignment_world(0.2);
    PrototypeSet protos;
    protos.prototypes.resize(4, w.dataset.dim());
    for (Index u = 0; u < 4; ++u) {
        std::vector<std::size_t> rows;
        for (auto r : w.dataset.splits.test_unseen) {
            if (w.dataset.labels[r] == static_cast<ClassId>(8 + u)) rows.push_back(r);
        }
        protos.prototypes.row(u) = w.dataset.gather(rows).colwise().mean();
        protos.labels.push_back(static_cast<ClassId>(8 + u));
        protos.lambdas.push_back(1.0);
    }
    const AlignmentReport r = prototype_alignment(protos, w.dataset, 1, 1);
    EXPECT_LT(r.mean, 1e-12);
    EXPECT_EQ(r.classes.size(), 4u);
}

TEST(Alignment, SynthesizedBeatsRandomPrototypes) {
    const SyntheticWorld w = alignment_world(0.0);
    const ClassMeans means = compute_seen_means(w.dataset);
    const PrototypeSet good = generate_prototype_set(w.attributes, means, {5, 1e-8, 2e-8, 1});
    const AlignmentReport r = prototype_alignment(good, w.dataset, 5, 1);
    EXPECT_LT(r.mean, 0.05);

    PrototypeSet bad = good;
    Rng rng(5);
    bad.prototypes = testutil::random_matrix(good.size(), w.dataset.dim(), rng, -1, 1);
    EXPECT_GT(prototype_alignment(bad, w.dataset, 5, 1).mean, r.mean);
}
