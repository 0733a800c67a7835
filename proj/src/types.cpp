#include "zsl/types.hpp"

#include <sstream>
#include <unordered_set>

#include "zsl/errors.hpp"

namespace zsl {
namespace {

template <typename... Args>
[[noreturn]] void fail(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    throw DataError(os.str());
}

}  // namespace

Eigen::MatrixXd FeatureDataset::gather(const std::vector<std::size_t>& indices) const {
    Eigen::MatrixXd out(static_cast<Index>(indices.size()), features.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.row(static_cast<Index>(i)) = features.row(static_cast<Index>(indices[i]));
    }
    return out;
}

std::vector<ClassId> FeatureDataset::gather_labels(const std::vector<std::size_t>& indices) const {
    std::vector<ClassId> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(labels[i]);
    return out;
}

void validate(const AttributeMatrix& attrs) {
    if (attrs.num_seen < 1 || attrs.num_unseen < 0) fail("attributes: invalid class counts");
    if (attrs.values.rows() != attrs.num_classes()) {
        fail("attributes: ", attrs.values.rows(), " rows but K+L = ", attrs.num_classes());
    }
    if (!attrs.values.allFinite()) fail("attributes: non-finite entry");
    if (!attrs.class_names.empty() &&
        static_cast<Index>(attrs.class_names.size()) != attrs.num_classes()) {
        fail("attributes: ", attrs.class_names.size(), " class names for ", attrs.num_classes(),
             " classes");
    }
}

void validate(const FeatureDataset& data) {
    if (data.num_seen < 1 || data.num_unseen < 0) fail("dataset: invalid class counts");
    if (static_cast<Index>(data.labels.size()) != data.size()) {
        fail("dataset: ", data.labels.size(), " labels for ", data.size(), " feature rows");
    }
    if (!data.features.allFinite()) fail("dataset: non-finite feature value");
    const auto total = static_cast<std::size_t>(data.size());
    const auto K = static_cast<ClassId>(data.num_seen);
    const auto C = static_cast<ClassId>(data.num_classes());
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        if (data.labels[i] >= C) fail("dataset: label ", data.labels[i], " at row ", i, " out of range");
    }
    std::unordered_set<std::size_t> seen_rows;
    auto check = [&](const std::vector<std::size_t>& idx, const char* name, bool want_seen) {
        for (auto i : idx) {
            if (i >= total) fail("dataset: split ", name, " index ", i, " out of bounds");
            if (!seen_rows.insert(i).second) fail("dataset: row ", i, " appears in more than one split");
            const bool is_seen = data.labels[i] < K;
            if (is_seen != want_seen) {
                fail("dataset: split ", name, " row ", i, " has label ", data.labels[i],
                     want_seen ? " (expected seen class)" : " (expected unseen class)");
            }
        }
    };
    check(data.splits.train_seen, "train_seen", true);
    check(data.splits.test_seen, "test_seen", true);
    check(data.splits.test_unseen, "test_unseen", false);
}

void validate(const FeatureDataset& data, const AttributeMatrix& attrs) {
    validate(data);
    validate(attrs);
    if (data.num_seen != attrs.num_seen || data.num_unseen != attrs.num_unseen) {
        fail("dataset/attributes class count mismatch");
    }
}

void validate(const PrototypeSet& protos, Index num_seen, Index num_unseen) {
    if (static_cast<Index>(protos.labels.size()) != protos.size() ||
        static_cast<Index>(protos.lambdas.size()) != protos.size()) {
        fail("prototypes: label/lambda count mismatch");
    }
    if (!protos.prototypes.allFinite()) fail("prototypes: non-finite value");
    for (auto l : protos.labels) {
        if (l < num_seen || l >= num_seen + num_unseen) fail("prototypes: label ", l, " is not an unseen class");
    }
}

}  // namespace zsl
