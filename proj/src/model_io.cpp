#include "zsl/model_io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "zsl/errors.hpp"
#include "zsl/zfb.hpp"

namespace zsl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string block_file(std::string_view name) {
    std::string f(name);
    for (auto& ch : f) {
        if (ch == '.') ch = '_';
    }
    return f + ".zfb";
}

}  // namespace

void save_model(const ModelArtifact& a, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create model directory " + dir.string() + ": " + ec.message());

    const auto& arch = a.model.arch;
    json manifest;
    manifest["format"] = "zsl-scc";
    manifest["version"] = 1;
    manifest["d_v"] = arch.feature_dim;
    manifest["d_a"] = arch.attribute_dim;
    manifest["num_seen"] = a.num_seen;
    manifest["num_unseen"] = a.num_unseen;
    manifest["seed"] = a.seed;
    manifest["encoder"] = {{"hidden", arch.encoder_hidden},
                           {"activations", {"relu", "leaky_relu"}},
                           {"leaky_slope", arch.leaky_slope}};
    manifest["scorer"] = {{"hidden", arch.scorer_hidden}, {"activations", {"relu", "sigmoid"}}};
    manifest["msas"] = {{"enabled", a.msas_enabled}, {"weight", a.msas.weight}, {"threshold", a.msas.threshold}};
    json layers = json::array();
    a.model.for_each([&](std::string_view name, const Eigen::MatrixXd& p) {
        zfb::write_matrix(dir / block_file(name), p, zfb::Precision::Float64);
        layers.push_back({{"name", name}, {"file", block_file(name)}, {"shape", {p.rows(), p.cols()}}});
    });
    manifest["parameters"] = layers;
    std::ofstream out(dir / "model.json");
    if (!out) throw DataError("cannot write " + (dir / "model.json").string());
    out << manifest.dump(2) << '\n';
}

ModelArtifact load_model(const fs::path& dir) {
    std::ifstream in(dir / "model.json");
    if (!in) throw DataError("model.json: missing in " + dir.string());
    json manifest;
    try {
        manifest = json::parse(in);
        ModelArtifact a;
        SccArchitecture arch;
        arch.feature_dim = manifest.at("d_v").get<Index>();
        arch.attribute_dim = manifest.at("d_a").get<Index>();
        arch.encoder_hidden = manifest.at("encoder").at("hidden").get<Index>();
        arch.leaky_slope = manifest.at("encoder").at("leaky_slope").get<double>();
        arch.scorer_hidden = manifest.at("scorer").at("hidden").get<Index>();
        a.num_seen = manifest.at("num_seen").get<Index>();
        a.num_unseen = manifest.at("num_unseen").get<Index>();
        a.seed = manifest.at("seed").get<std::uint64_t>();
        a.msas_enabled = manifest.at("msas").at("enabled").get<bool>();
        a.msas.weight = manifest.at("msas").at("weight").get<double>();
        a.msas.threshold = manifest.at("msas").at("threshold").get<double>();
        a.model = SccModel::zeros(arch);
        a.model.for_each([&](std::string_view name, Eigen::MatrixXd& p) {
            Eigen::MatrixXd loaded = zfb::read_matrix(dir / block_file(name));
            if (loaded.rows() != p.rows() || loaded.cols() != p.cols()) {
                throw DataError(block_file(name) + ": shape does not match model.json");
            }
            p = std::move(loaded);
        });
        return a;
    } catch (const json::exception& e) {
        throw DataError(std::string("model.json: ") + e.what());
    }
}

}  // namespace zsl
