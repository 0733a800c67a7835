#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsl/bundle.hpp"
#include "zsl/dpsr.hpp"
#include "zsl/kmeans.hpp"
#include "zsl/metrics.hpp"
#include "zsl/model_io.hpp"
#include "zsl/run_config.hpp"

namespace zsl {

// Stage building blocks shared by the CLI subcommands and run_pipeline.

/// Re-scored attributes when enabled, the originals otherwise.
AttributeMatrix prepare_attributes(const AttributeMatrix& raw, bool msas_enabled, const MsasConfig& msas);

PrototypeSet synthesize(const Bundle& bundle, const AttributeMatrix& attrs, const SynthesisConfig& cfg);

/// Writes `path` (ZFB8 matrix) with `path`.labels (ZFL1) and
/// `path`.lambdas (ZFB8 column) beside it.
void save_prototypes(const PrototypeSet& protos, const std::filesystem::path& path);
PrototypeSet load_prototypes(const std::filesystem::path& path);

struct TrainOutcome {
    ModelArtifact artifact;
    std::vector<double> loss_history;
};

TrainOutcome train_classifier(const Bundle& bundle, const AttributeMatrix& attrs, const PrototypeSet& protos,
                              const RunConfig& cfg);

nlohmann::json report_to_json(const EvalReport& report, const nlohmann::json& config_echo,
                              const std::optional<AlignmentReport>& alignment = std::nullopt);
std::string report_csv_header();
std::string report_csv_row(const EvalReport& report);

struct RunOutcome {
    EvalReport report;
    std::optional<AlignmentReport> alignment;
    std::vector<double> loss_history;
};

/// Re-score -> synthesize -> similarity -> train -> evaluate. Artifacts,
/// report.json/report.csv and manifest.json go to cfg.output_dir when it
/// is set. A failing stage rethrows with the stage name and marks the
/// manifest stale.
RunOutcome run_pipeline(RunConfig cfg);

enum class SweepAxis { PerClass, Beta };
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
    double value = 0.0;
    std::optional<EvalReport> report;
    std::string error;
};

/// One pipeline run per value with the shared base seed; each run writes
/// into <output_dir>/<axis>_<value> when an output directory is set.
std::vector<SweepRow> run_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace zsl
