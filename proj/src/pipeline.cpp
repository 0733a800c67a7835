#include "zsl/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include <zlib.h>

#include "zsl/errors.hpp"
#include "zsl/msas.hpp"
#include "zsl/random.hpp"
#include "zsl/zfb.hpp"

namespace zsl {
namespace fs = std::filesystem;
using nlohmann::json;

AttributeMatrix prepare_attributes(const AttributeMatrix& raw, bool msas_enabled, const MsasConfig& msas) {
    return msas_enabled ? msas_rescore(raw, msas) : raw;
}

PrototypeSet synthesize(const Bundle& bundle, const AttributeMatrix& attrs, const SynthesisConfig& cfg) {
    const ClassMeans means = compute_seen_means(bundle.dataset);
    PrototypeSet protos = generate_prototype_set(attrs, means, cfg);
    validate(protos, attrs.num_seen, attrs.num_unseen);
    return protos;
}

void save_prototypes(const PrototypeSet& protos, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    zfb::write_matrix(path, protos.prototypes, zfb::Precision::Float64);
    zfb::write_labels(fs::path(path.string() + ".labels"), protos.labels);
    const Eigen::Map<const Eigen::VectorXd> lambdas(protos.lambdas.data(), static_cast<Index>(protos.lambdas.size()));
    zfb::write_matrix(fs::path(path.string() + ".lambdas"), lambdas, zfb::Precision::Float64);
}

PrototypeSet load_prototypes(const fs::path& path) {
    PrototypeSet protos;
    protos.prototypes = zfb::read_matrix(path);
    protos.labels = zfb::read_labels(fs::path(path.string() + ".labels"));
    const Eigen::MatrixXd lambdas = zfb::read_matrix(fs::path(path.string() + ".lambdas"));
    protos.lambdas.assign(lambdas.data(), lambdas.data() + lambdas.size());
    if (static_cast<Index>(protos.labels.size()) != protos.size() ||
        static_cast<Index>(protos.lambdas.size()) != protos.size()) {
        throw DataError(path.filename().string() + ": prototype, label and lambda counts differ");
    }
    return protos;
}

TrainOutcome train_classifier(const Bundle& bundle, const AttributeMatrix& attrs, const PrototypeSet& protos,
                              const RunConfig& cfg) {
    validate(protos, attrs.num_seen, attrs.num_unseen);
    SccArchitecture arch;
    arch.attribute_dim = attrs.dim();
    arch.feature_dim = bundle.dataset.dim();
    arch.encoder_hidden = cfg.encoder_hidden;
    arch.scorer_hidden = cfg.scorer_hidden;

    const SimilarityMatrix sim =
        cfg.dpsr_enabled ? build_similarity_matrix(attrs, cfg.phi) : unit_similarity(attrs.num_classes());
    const TrainingView view = augment_training_set(bundle.dataset, protos);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    tc.dpsr_enabled = cfg.dpsr_enabled;
    TrainResult trained = train(SccModel::initialized(arch, substream_seed(cfg.seed, "init")), view, attrs, sim, tc);

    TrainOutcome out;
    out.artifact.model = std::move(trained.model);
    out.artifact.num_seen = attrs.num_seen;
    out.artifact.num_unseen = attrs.num_unseen;
    out.artifact.seed = cfg.seed;
    out.artifact.msas_enabled = cfg.msas_enabled;
    out.artifact.msas = cfg.msas;
    out.loss_history = std::move(trained.loss_history);
    return out;
}

json report_to_json(const EvalReport& r, const json& config_echo, const std::optional<AlignmentReport>& alignment) {
    json per_class = json::array();
    for (const auto& c : r.per_class) {
        json row = {{"class", c.cls}, {"unseen", c.unseen}, {"samples", c.samples}, {"gzsl", c.gzsl}};
        if (c.unseen) row["czsl"] = c.czsl;
        per_class.push_back(row);
    }
    json out = {{"t1_czsl", r.t1_czsl},
                {"acc_unseen_U", r.acc_unseen},
                {"acc_seen_S", r.acc_seen},
                {"harmonic_H", r.harmonic},
                {"per_class", per_class},
                {"config", config_echo}};
    if (alignment) {
        json a = json::array();
        for (std::size_t i = 0; i < alignment->classes.size(); ++i) {
            a.push_back({{"class", alignment->classes[i]}, {"normalized_distance", alignment->normalized_distance[i]}});
        }
        out["alignment"] = {{"per_class", a}, {"mean", alignment->mean}};
    }
    return out;
}

std::string report_csv_header() { return "t1_czsl,acc_unseen_U,acc_seen_S,harmonic_H"; }

std::string report_csv_row(const EvalReport& r) {
    std::ostringstream os;
    os << std::setprecision(10) << r.t1_czsl << ',' << r.acc_unseen << ',' << r.acc_seen << ',' << r.harmonic;
    return os.str();
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

std::string crc_hex(const std::string& bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    std::ostringstream os;
    os << std::hex << std::setw(8) << std::setfill('0') << crc;
    return os.str();
}

std::string file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

[[noreturn]] void rethrow_in_stage(const std::string& stage, const std::exception& e) {
    const std::string msg = "stage '" + stage + "': " + e.what();
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        switch (err->code()) {
            case ExitCode::Config: throw ConfigError(msg);
            case ExitCode::Numerical: throw NumericalError(msg);
            default: break;
        }
    }
    throw DataError(msg);
}

class Manifest {
public:
    Manifest(const RunConfig& cfg) : dir_(cfg.output_dir) {
        const json config = cfg.to_json();
        body_["config"] = config;
        body_["config_hash"] = crc_hex(config.dump());
        body_["seeds"] = {{"root", cfg.seed},
                          {"init", substream_seed(cfg.seed, "init")},
                          {"shuffle", substream_seed(cfg.seed, "shuffle")},
                          {"lambda", substream_seed(cfg.seed, "lambda")}};
        body_["flags"] = {{"msas", cfg.msas_enabled},
                          {"dpsr", cfg.dpsr_enabled},
                          {"plain_loss", cfg.train.plain_loss_mode}};
        body_["artifacts"] = json::array();
    }

    void add(const fs::path& path) {
        const std::string bytes = file_bytes(path);
        body_["artifacts"].push_back({{"path", fs::relative(path, dir_).generic_string()},
                                      {"bytes", bytes.size()},
                                      {"crc32", crc_hex(bytes)}});
    }

    void add_tree(const fs::path& dir) {
        std::vector<fs::path> files;
        for (const auto& e : fs::recursive_directory_iterator(dir)) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) add(f);
    }

    void finish(const std::string& status, const std::string& failed_stage = {}) {
        body_["status"] = status;
        body_["stale"] = !failed_stage.empty();
        if (!failed_stage.empty()) body_["failed_stage"] = failed_stage;
        write_text(dir_ / "manifest.json", body_.dump(2) + "\n");
    }

private:
    fs::path dir_;
    json body_;
};

}  // namespace

RunOutcome run_pipeline(RunConfig cfg) {
    cfg.sync();
    cfg.validate();
    const bool persist = !cfg.output_dir.empty();
    std::optional<Manifest> manifest;
    if (persist) {
        fs::create_directories(cfg.output_dir);
        manifest.emplace(cfg);
    }

    std::string stage = "load";
    try {
        const Bundle bundle = load_bundle(cfg.bundle);

        stage = "msas";
        const AttributeMatrix attrs = prepare_attributes(bundle.attributes, cfg.msas_enabled, cfg.msas);

        stage = "synth";
        const PrototypeSet protos = synthesize(bundle, attrs, cfg.synthesis);
        if (persist) {
            const fs::path p = cfg.output_dir / "prototypes.zfb";
            save_prototypes(protos, p);
            manifest->add(p);
            manifest->add(p.string() + ".labels");
            manifest->add(p.string() + ".lambdas");
        }

        stage = "train";
        TrainOutcome trained = train_classifier(bundle, attrs, protos, cfg);
        if (persist) {
            save_model(trained.artifact, cfg.output_dir / "model");
            manifest->add_tree(cfg.output_dir / "model");
        }

        stage = "eval";
        RunOutcome out;
        out.report = evaluate(trained.artifact.model, bundle.dataset, attrs);
        out.loss_history = std::move(trained.loss_history);
        if (cfg.alignment_k > 0) {
            out.alignment = prototype_alignment(protos, bundle.dataset, cfg.alignment_k, cfg.seed);
        }
        if (persist) {
            const json report = report_to_json(out.report, cfg.to_json(), out.alignment);
            write_text(cfg.output_dir / "report.json", report.dump(2) + "\n");
            write_text(cfg.output_dir / "report.csv", report_csv_header() + "\n" + report_csv_row(out.report) + "\n");
            manifest->add(cfg.output_dir / "report.json");
            manifest->add(cfg.output_dir / "report.csv");
            manifest->finish("complete");
        }
        return out;
    } catch (const std::exception& e) {
        if (manifest) {
            try {
                manifest->finish("failed", stage);
            } catch (const std::exception&) {
                // The original error is more useful than a manifest write failure.
            }
        }
        rethrow_in_stage(stage, e);
    }
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "per_class" || name == "per-class") return SweepAxis::PerClass;
    if (name == "beta") return SweepAxis::Beta;
    throw ConfigError("unknown sweep axis '" + name + "' (expected per_class or beta)");
}

std::vector<SweepRow> run_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<SweepRow> rows;
    for (double v : values) {
        RunConfig cfg = base;
        std::ostringstream tag;
        if (axis == SweepAxis::PerClass) {
            cfg.synthesis.per_class = static_cast<Index>(v);
            tag << "per_class_" << cfg.synthesis.per_class;
        } else {
            cfg.train.beta = v;
            tag << "beta_" << v;
        }
        if (!base.output_dir.empty()) cfg.output_dir = base.output_dir / tag.str();
        SweepRow row;
        row.value = v;
        try {
            row.report = run_pipeline(cfg).report;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "value,T1,U,S,H,status\n" << std::setprecision(10);
    for (const auto& r : rows) {
        os << r.value << ',';
        if (r.report) {
            os << r.report->t1_czsl << ',' << r.report->acc_unseen << ',' << r.report->acc_seen << ','
               << r.report->harmonic << ",ok\n";
        } else {
            std::string msg = r.error;
            for (auto& ch : msg) {
                if (ch == ',' || ch == '\n') ch = ';';
            }
            os << ",,,,failed: " << msg << '\n';
        }
    }
    return os.str();
}

}  // namespace zsl
