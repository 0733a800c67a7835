#include "zsl/bundle.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zsl/errors.hpp"
#include "zsl/zfb.hpp"

namespace zsl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_metadata(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("metadata.json: missing in " + path.parent_path().string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(std::string("metadata.json: ") + e.what());
    }
}

template <typename T>
T field(const json& meta, const char* key) {
    if (!meta.contains(key)) throw DataError(std::string("metadata.json: missing key \"") + key + "\"");
    try {
        return meta.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("metadata.json: bad value for \"") + key + "\": " + e.what());
    }
}

void expect_shape(const char* file, const Eigen::MatrixXd& m, Index rows, Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
        std::ostringstream os;
        os << file << ": shape " << m.rows() << "x" << m.cols() << " does not match manifest "
           << rows << "x" << cols;
        throw DataError(os.str());
    }
}

}  // namespace

Bundle load_bundle(const fs::path& dir) {
    const json meta = read_metadata(dir / "metadata.json");
    if (field<int>(meta, "version") != kBundleVersion) {
        throw DataError("metadata.json: unsupported version");
    }
    const auto d_v = field<Index>(meta, "d_v");
    const auto d_a = field<Index>(meta, "d_a");
    const auto num_seen = field<Index>(meta, "num_seen");
    const auto num_unseen = field<Index>(meta, "num_unseen");

    Bundle b;
    b.attributes.values = zfb::read_matrix(dir / "attributes.zfb");
    b.attributes.num_seen = num_seen;
    b.attributes.num_unseen = num_unseen;
    if (meta.contains("class_names")) {
        b.attributes.class_names = field<std::vector<std::string>>(meta, "class_names");
    }
    expect_shape("attributes.zfb", b.attributes.values, num_seen + num_unseen, d_a);

    auto& ds = b.dataset;
    ds.features = zfb::read_matrix(dir / "features.zfb");
    ds.labels = zfb::read_labels(dir / "labels.zfb");
    ds.num_seen = num_seen;
    ds.num_unseen = num_unseen;
    if (ds.features.cols() != d_v) {
        throw DataError("features.zfb: feature dimension " + std::to_string(ds.features.cols()) +
                        " does not match manifest d_v " + std::to_string(d_v));
    }
    if (static_cast<Index>(ds.labels.size()) != ds.features.rows()) {
        throw DataError("labels.zfb: " + std::to_string(ds.labels.size()) + " labels for " +
                        std::to_string(ds.features.rows()) + " feature rows");
    }
    const json splits = field<json>(meta, "splits");
    for (const char* key : {"train_seen", "test_seen", "test_unseen"}) {
        if (!splits.contains(key)) throw DataError(std::string("metadata.json: missing split \"") + key + "\"");
    }
    ds.splits.train_seen = splits.at("train_seen").get<std::vector<std::size_t>>();
    ds.splits.test_seen = splits.at("test_seen").get<std::vector<std::size_t>>();
    ds.splits.test_unseen = splits.at("test_unseen").get<std::vector<std::size_t>>();

    validate(ds, b.attributes);
    return b;
}

void save_bundle(const FeatureDataset& dataset, const AttributeMatrix& attrs, const fs::path& dir) {
    validate(dataset, attrs);

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create bundle directory " + dir.string() + ": " + ec.message());

    json meta;
    meta["version"] = kBundleVersion;
    meta["d_v"] = dataset.dim();
    meta["d_a"] = attrs.dim();
    meta["num_seen"] = attrs.num_seen;
    meta["num_unseen"] = attrs.num_unseen;
    if (attrs.class_names.empty()) {
        std::vector<std::string> names;
        for (Index c = 0; c < attrs.num_classes(); ++c) names.push_back("class_" + std::to_string(c));
        meta["class_names"] = names;
    } else {
        meta["class_names"] = attrs.class_names;
    }
    meta["splits"] = {{"train_seen", dataset.splits.train_seen},
                      {"test_seen", dataset.splits.test_seen},
                      {"test_unseen", dataset.splits.test_unseen}};

    zfb::write_matrix(dir / "features.zfb", dataset.features);
    zfb::write_matrix(dir / "attributes.zfb", attrs.values);
    zfb::write_labels(dir / "labels.zfb", dataset.labels);
    std::ofstream out(dir / "metadata.json");
    if (!out) throw DataError("cannot write " + (dir / "metadata.json").string());
    out << meta.dump(2) << '\n';
}

}  // namespace zsl
