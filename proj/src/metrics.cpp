#include "zsl/metrics.hpp"

#include <map>
#include <stdexcept>

#include "zsl/errors.hpp"

namespace zsl {

ClassId predict_czsl(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& class_embeddings,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feature, Index num_seen) {
    const Eigen::RowVectorXd scores = score_matrix(model, feature, class_embeddings).row(0);
    return predict_czsl(scores, num_seen);
}

ClassId predict_gzsl(const SccModel& model, const Eigen::Ref<const Eigen::MatrixXd>& class_embeddings,
                     const Eigen::Ref<const Eigen::RowVectorXd>& feature) {
    const Eigen::RowVectorXd scores = score_matrix(model, feature, class_embeddings).row(0);
    return predict_gzsl(scores);
}

double per_class_top1(const std::vector<ClassId>& predictions, const std::vector<ClassId>& labels,
                      const std::vector<ClassId>& classes) {
    if (predictions.size() != labels.size()) throw std::invalid_argument("per_class_top1: size mismatch");
    if (classes.empty()) throw DataError("per_class_top1: empty class subset");
    std::map<ClassId, std::pair<long, long>> tally;  // class -> (correct, total)
    for (auto c : classes) tally[c] = {0, 0};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = tally.find(labels[i]);
        if (it == tally.end()) continue;
        ++it->second.second;
        if (predictions[i] == labels[i]) ++it->second.first;
    }
    double sum = 0.0;
    for (const auto& [cls, counts] : tally) {
        if (counts.second == 0) throw DataError("per_class_top1: class " + std::to_string(cls) + " has no test samples");
        sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
    }
    return 100.0 * sum / static_cast<double>(tally.size());
}

namespace {

// Scores in fixed-size chunks to bound memory on large test sets.
Eigen::MatrixXd score_rows(const SccModel& model, const Eigen::MatrixXd& embed, const FeatureDataset& data,
                           const std::vector<std::size_t>& rows) {
    constexpr std::size_t kChunk = 256;
    Eigen::MatrixXd scores(static_cast<Index>(rows.size()), embed.rows());
    for (std::size_t start = 0; start < rows.size(); start += kChunk) {
        const std::size_t end = std::min(rows.size(), start + kChunk);
        const std::vector<std::size_t> chunk(rows.begin() + static_cast<long>(start), rows.begin() + static_cast<long>(end));
        scores.middleRows(static_cast<Index>(start), static_cast<Index>(end - start)) =
            score_matrix(model, data.gather(chunk), embed);
    }
    return scores;
}

double class_rate(const std::vector<ClassId>& pred, const std::vector<ClassId>& labels, ClassId cls, Index& n) {
    long hit = 0;
    n = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != cls) continue;
        ++n;
        if (pred[i] == cls) ++hit;
    }
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(hit) / static_cast<double>(n);
}

}  // namespace

EvalReport evaluate(const SccModel& model, const FeatureDataset& dataset, const AttributeMatrix& attrs) {
    const Index K = attrs.num_seen, C = attrs.num_classes();
    const Eigen::MatrixXd embed = encode_semantics(model, attrs.values);

    const auto& seen_rows = dataset.splits.test_seen;
    const auto& unseen_rows = dataset.splits.test_unseen;
    const Eigen::MatrixXd seen_scores = score_rows(model, embed, dataset, seen_rows);
    const Eigen::MatrixXd unseen_scores = score_rows(model, embed, dataset, unseen_rows);

    std::vector<ClassId> seen_gzsl, unseen_gzsl, unseen_czsl;
    for (Index i = 0; i < seen_scores.rows(); ++i) seen_gzsl.push_back(predict_gzsl(seen_scores.row(i)));
    for (Index i = 0; i < unseen_scores.rows(); ++i) {
        unseen_gzsl.push_back(predict_gzsl(unseen_scores.row(i)));
        unseen_czsl.push_back(predict_czsl(unseen_scores.row(i), K));
    }
    const auto seen_labels = dataset.gather_labels(seen_rows);
    const auto unseen_labels = dataset.gather_labels(unseen_rows);

    std::vector<ClassId> seen_classes, unseen_classes;
    for (Index c = 0; c < K; ++c) seen_classes.push_back(static_cast<ClassId>(c));
    for (Index c = K; c < C; ++c) unseen_classes.push_back(static_cast<ClassId>(c));

    EvalReport r;
    r.t1_czsl = per_class_top1(unseen_czsl, unseen_labels, unseen_classes);
    r.acc_unseen = per_class_top1(unseen_gzsl, unseen_labels, unseen_classes);
    r.acc_seen = per_class_top1(seen_gzsl, seen_labels, seen_classes);
    r.harmonic = harmonic_mean(r.acc_unseen, r.acc_seen);
    for (Index c = 0; c < C; ++c) {
        ClassAccuracy a;
        a.cls = static_cast<ClassId>(c);
        a.unseen = c >= K;
        if (a.unseen) {
            a.gzsl = class_rate(unseen_gzsl, unseen_labels, a.cls, a.samples);
            a.czsl = class_rate(unseen_czsl, unseen_labels, a.cls, a.samples);
        } else {
            a.gzsl = class_rate(seen_gzsl, seen_labels, a.cls, a.samples);
        }
        r.per_class.push_back(a);
    }
    return r;
}

}  // namespace zsl
