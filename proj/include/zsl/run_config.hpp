#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "zsl/msas.hpp"
#include "zsl/scc_train.hpp"
#include "zsl/synthesis.hpp"

namespace zsl {

/// Everything one pipeline run needs. All randomness derives from `seed`
/// through named substreams.
struct RunConfig {
    std::filesystem::path bundle;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;

    bool msas_enabled = true;
    MsasConfig msas;
    SynthesisConfig synthesis;  // synthesis.seed mirrors `seed`
    bool dpsr_enabled = true;
    double phi = 0.1;
    TrainConfig train;  // train.seed mirrors `seed`
    Index encoder_hidden = 1024;
    Index scorer_hidden = 1024;
    Index alignment_k = 0;  // 0 disables the alignment analysis

    /// Pushes the root seed and ablation flags into the nested configs.
    void sync();
    /// Throws ConfigError on invalid values or missing bundle.
    void validate(bool require_bundle = true) const;

    nlohmann::json to_json() const;
};

/// Per-dataset defaults for the attribute re-scoring and prototype count.
struct DatasetPreset {
    double msas_weight;
    double msas_threshold;
    Index per_class;
};
std::optional<DatasetPreset> find_preset(const std::string& name);
void apply_preset(RunConfig& cfg, const std::string& name);

/// Sectioned key = value file ([run], [msas], [synthesis], [dpsr],
/// [train], [eval]). Unknown keys are rejected.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text);

}  // namespace zsl
