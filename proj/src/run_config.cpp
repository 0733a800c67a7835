#include "zsl/run_config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "zsl/errors.hpp"

namespace zsl {
namespace pt = boost::property_tree;

void RunConfig::sync() {
    synthesis.seed = seed;
    train.seed = seed;
    train.dpsr_enabled = dpsr_enabled;
}

void RunConfig::validate(bool require_bundle) const {
    if (require_bundle) {
        if (bundle.empty()) throw ConfigError("no bundle directory given");
        if (!std::filesystem::is_directory(bundle)) throw ConfigError("bundle directory does not exist: " + bundle.string());
    }
    if (msas_enabled) msas.check();
    if (synthesis.per_class < 1) throw ConfigError("per_class must be >= 1");
    if (!(synthesis.lambda_min > 0.0) || !(synthesis.lambda_min <= synthesis.lambda_max)) {
        throw ConfigError("lambda range must satisfy 0 < lambda_min <= lambda_max");
    }
    if (dpsr_enabled && !(phi > 0.0)) throw ConfigError("phi must be positive");
    if (encoder_hidden < 1 || scorer_hidden < 1) throw ConfigError("hidden widths must be positive");
    if (alignment_k < 0) throw ConfigError("alignment_k must be >= 0");
    train.check();
}

nlohmann::json RunConfig::to_json() const {
    return {
        {"bundle", bundle.string()},
        {"seed", seed},
        {"msas", {{"enabled", msas_enabled}, {"weight", msas.weight}, {"threshold", msas.threshold}}},
        {"synthesis",
         {{"per_class", synthesis.per_class}, {"lambda_min", synthesis.lambda_min}, {"lambda_max", synthesis.lambda_max}}},
        {"dpsr", {{"enabled", dpsr_enabled}, {"phi", phi}}},
        {"train",
         {{"beta", train.beta},
          {"learning_rate", train.learning_rate},
          {"batch_size", train.batch_size},
          {"epochs", train.epochs},
          {"plain_loss", train.plain_loss_mode},
          {"encoder_hidden", encoder_hidden},
          {"scorer_hidden", scorer_hidden}}},
        {"eval", {{"alignment_k", alignment_k}}},
    };
}

std::optional<DatasetPreset> find_preset(const std::string& name) {
    if (name == "sun") return DatasetPreset{0.005, 0.7, 15};
    if (name == "awa2") return DatasetPreset{0.08, 0.8, 90};
    if (name == "cub") return DatasetPreset{0.3, 0.7, 10};
    return std::nullopt;
}

void apply_preset(RunConfig& cfg, const std::string& name) {
    const auto preset = find_preset(name);
    if (!preset) throw ConfigError("unknown preset '" + name + "' (expected sun, awa2 or cub)");
    cfg.msas.weight = preset->msas_weight;
    cfg.msas.threshold = preset->msas_threshold;
    cfg.synthesis.per_class = preset->per_class;
    cfg.synthesis.lambda_min = 1.0;
    cfg.synthesis.lambda_max = 1.02;
}

namespace {

template <typename T>
T value_of(const pt::ptree& node, const std::string& key) {
    try {
        return node.get_value<T>();
    } catch (const pt::ptree_error&) {
        throw ConfigError("config: bad value for '" + key + "': '" + node.data() + "'");
    }
}

bool bool_of(const pt::ptree& node, const std::string& key) {
    const std::string v = node.data();
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean for '" + key + "': '" + v + "'");
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    RunConfig cfg;
    // Presets first so explicit keys win.
    if (auto run = tree.get_child_optional("run")) {
        if (auto preset = run->get_optional<std::string>("preset")) apply_preset(cfg, *preset);
    }

    for (const auto& [section, body] : tree) {
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            if (full == "run.preset") continue;
            else if (full == "run.bundle") cfg.bundle = node.data();
            else if (full == "run.output") cfg.output_dir = node.data();
            else if (full == "run.seed") cfg.seed = value_of<std::uint64_t>(node, full);
            else if (full == "msas.enabled") cfg.msas_enabled = bool_of(node, full);
            else if (full == "msas.weight") cfg.msas.weight = value_of<double>(node, full);
            else if (full == "msas.threshold") cfg.msas.threshold = value_of<double>(node, full);
            else if (full == "synthesis.per_class") cfg.synthesis.per_class = value_of<Index>(node, full);
            else if (full == "synthesis.lambda_min") cfg.synthesis.lambda_min = value_of<double>(node, full);
            else if (full == "synthesis.lambda_max") cfg.synthesis.lambda_max = value_of<double>(node, full);
            else if (full == "dpsr.enabled") cfg.dpsr_enabled = bool_of(node, full);
            else if (full == "dpsr.phi") cfg.phi = value_of<double>(node, full);
            else if (full == "train.beta") cfg.train.beta = value_of<double>(node, full);
            else if (full == "train.learning_rate") cfg.train.learning_rate = value_of<double>(node, full);
            else if (full == "train.batch_size") cfg.train.batch_size = value_of<Index>(node, full);
            else if (full == "train.epochs") cfg.train.epochs = value_of<Index>(node, full);
            else if (full == "train.plain_loss") cfg.train.plain_loss_mode = bool_of(node, full);
            else if (full == "train.encoder_hidden") cfg.encoder_hidden = value_of<Index>(node, full);
            else if (full == "train.scorer_hidden") cfg.scorer_hidden = value_of<Index>(node, full);
            else if (full == "eval.alignment_k") cfg.alignment_k = value_of<Index>(node, full);
            else throw ConfigError("config: unknown key '" + full + "'");
        }
    }
    cfg.sync();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    RunConfig cfg = parse_run_config(text.str());
    // Relative bundle/output paths resolve against the config file.
    if (!cfg.bundle.empty() && cfg.bundle.is_relative()) cfg.bundle = path.parent_path() / cfg.bundle;
    if (!cfg.output_dir.empty() && cfg.output_dir.is_relative()) cfg.output_dir = path.parent_path() / cfg.output_dir;
    return cfg;
}

}  // namespace zsl
