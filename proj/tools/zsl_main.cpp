// Command line front end: make-synthetic, synth, train, eval, run, sweep.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zsl/bundle.hpp"
#include "zsl/errors.hpp"
#include "zsl/pipeline.hpp"
#include "zsl/synthetic_world.hpp"
#include "zsl/zfb.hpp"

namespace fs = std::filesystem;
using namespace zsl;

namespace {

// Flags shared by the stages; anything set here wins over the config file.
struct Overrides {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<double> wa, th;
    std::optional<Index> per_class;
    std::optional<double> lambda_min, lambda_max;
    std::optional<double> phi, beta, lr;
    std::optional<Index> epochs, batch, hidden;
    bool no_msas = false, no_dpsr = false, plain_loss = false;

    void add_msas(CLI::App* app) {
        app->add_option("--wa", wa, "attribute re-scoring weight");
        app->add_option("--th", th, "attribute re-scoring threshold");
        app->add_flag("--no-msas", no_msas, "use the raw attribute matrix");
        app->add_option("--preset", preset, "per-dataset defaults: sun, awa2, cub");
        app->add_option("--config", config, "run configuration file");
        app->add_option("--seed", seed, "root seed");
    }
    void add_synth(CLI::App* app) {
        app->add_option("--per-class", per_class, "prototypes per unseen class");
        app->add_option("--lambda-min", lambda_min);
        app->add_option("--lambda-max", lambda_max);
    }
    void add_train(CLI::App* app) {
        app->add_option("--beta", beta, "weight of the unseen-class loss");
        app->add_option("--lr", lr, "learning rate");
        app->add_option("--epochs", epochs);
        app->add_option("--batch", batch);
        app->add_option("--phi", phi, "similarity regularizer");
        app->add_option("--hidden", hidden, "hidden width of both networks");
        app->add_flag("--no-dpsr", no_dpsr, "train without similarity masks");
        app->add_flag("--plain-loss", plain_loss, "optimize unsplit cross-entropy");
    }

    RunConfig resolve() const {
        RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
        if (!preset.empty()) apply_preset(cfg, preset);
        if (seed) cfg.seed = *seed;
        if (wa) cfg.msas.weight = *wa;
        if (th) cfg.msas.threshold = *th;
        if (no_msas) cfg.msas_enabled = false;
        if (per_class) cfg.synthesis.per_class = *per_class;
        if (lambda_min) cfg.synthesis.lambda_min = *lambda_min;
        if (lambda_max) cfg.synthesis.lambda_max = *lambda_max;
        if (phi) cfg.phi = *phi;
        if (beta) cfg.train.beta = *beta;
        if (lr) cfg.train.learning_rate = *lr;
        if (epochs) cfg.train.epochs = *epochs;
        if (batch) cfg.train.batch_size = *batch;
        if (hidden) cfg.encoder_hidden = cfg.scorer_hidden = *hidden;
        if (no_dpsr) cfg.dpsr_enabled = false;
        if (plain_loss) cfg.train.plain_loss_mode = true;
        cfg.sync();
        return cfg;
    }
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("bad sweep value '" + item + "'");
        }
    }
    return values;
}

void print_report(const EvalReport& r) {
    std::cout << "T1 " << r.t1_czsl << "  U " << r.acc_unseen << "  S " << r.acc_seen << "  H " << r.harmonic
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prototype-synthesis zero-shot classifier"};
    app.require_subcommand(1);

    // make-synthetic
    SyntheticWorldParams world;
    std::string world_out;
    auto* mk = app.add_subcommand("make-synthetic", "write a planted synthetic bundle");
    mk->add_option("--out", world_out, "bundle directory")->required();
    mk->add_option("--seed", world.seed);
    mk->add_option("--num-seen", world.num_seen);
    mk->add_option("--num-unseen", world.num_unseen);
    mk->add_option("--d-v", world.feature_dim);
    mk->add_option("--d-a", world.attribute_dim);
    mk->add_option("--samples", world.samples_per_seen_class, "training samples per seen class");
    mk->add_option("--test-samples", world.test_samples_per_class, "test samples per class");
    mk->add_option("--noise", world.noise_scale);

    // synth
    Overrides synth_o;
    std::string synth_bundle, synth_out;
    auto* synth = app.add_subcommand("synth", "synthesize unseen-class prototypes");
    synth->add_option("--bundle", synth_bundle)->required();
    synth->add_option("--out", synth_out, "prototype file")->required();
    synth_o.add_msas(synth);
    synth_o.add_synth(synth);

    // train
    Overrides train_o;
    std::string train_bundle, train_protos, train_out, dump_sim;
    auto* tr = app.add_subcommand("train", "train the contrastive classifier");
    tr->add_option("--bundle", train_bundle)->required();
    tr->add_option("--protos", train_protos, "prototype file from synth")->required();
    tr->add_option("--out", train_out, "model directory")->required();
    tr->add_option("--dump-similarity", dump_sim, "write the similarity matrix (ZFB8)");
    train_o.add_msas(tr);
    train_o.add_train(tr);

    // eval
    std::string eval_bundle, eval_model, eval_report, eval_csv, eval_protos;
    Index eval_k = 0;
    auto* ev = app.add_subcommand("eval", "evaluate a trained model");
    ev->add_option("--bundle", eval_bundle)->required();
    ev->add_option("--model", eval_model)->required();
    ev->add_option("--report", eval_report, "report JSON path");
    ev->add_option("--csv", eval_csv, "report CSV path");
    ev->add_option("--protos", eval_protos, "prototype file for the alignment analysis");
    ev->add_option("--alignment-k", eval_k, "k-means sub-clusters per unseen class");

    // run
    Overrides run_o;
    std::string run_bundle, run_out;
    Index run_k = -1;
    auto* run = app.add_subcommand("run", "full pipeline: synth, train, eval");
    run->add_option("--bundle", run_bundle);
    run->add_option("--out", run_out, "output directory");
    run->add_option("--alignment-k", run_k);
    run_o.add_msas(run);
    run_o.add_synth(run);
    run_o.add_train(run);

    // sweep
    Overrides sweep_o;
    std::string sweep_bundle, sweep_out, sweep_axis, sweep_values, sweep_csv_path;
    auto* sw = app.add_subcommand("sweep", "pipeline runs over per_class or beta");
    sw->add_option("--bundle", sweep_bundle);
    sw->add_option("--out", sweep_out, "directory for per-run artifacts");
    sw->add_option("--axis", sweep_axis, "per_class or beta")->required();
    sw->add_option("--values", sweep_values, "comma separated values")->required();
    sw->add_option("--csv", sweep_csv_path, "CSV output (default stdout)");
    sweep_o.add_msas(sw);
    sweep_o.add_synth(sw);
    sweep_o.add_train(sw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::Config);
    }

    try {
        if (mk->parsed()) {
            const SyntheticWorld w = make_synthetic_world(world);
            save_bundle(w.dataset, w.attributes, world_out);
            zfb::write_matrix(fs::path(world_out) / "unseen_means.zfb", w.unseen_means, zfb::Precision::Float64);
            std::cout << "wrote " << world_out << " (" << w.dataset.size() << " samples)\n";
        } else if (synth->parsed()) {
            RunConfig cfg = synth_o.resolve();
            cfg.bundle = synth_bundle;
            cfg.validate();
            const Bundle b = load_bundle(cfg.bundle);
            const AttributeMatrix attrs = prepare_attributes(b.attributes, cfg.msas_enabled, cfg.msas);
            const PrototypeSet protos = synthesize(b, attrs, cfg.synthesis);
            save_prototypes(protos, synth_out);
            std::cout << "wrote " << protos.size() << " prototypes to " << synth_out << '\n';
        } else if (tr->parsed()) {
            RunConfig cfg = train_o.resolve();
            cfg.bundle = train_bundle;
            cfg.validate();
            const Bundle b = load_bundle(cfg.bundle);
            const AttributeMatrix attrs = prepare_attributes(b.attributes, cfg.msas_enabled, cfg.msas);
            const PrototypeSet protos = load_prototypes(train_protos);
            if (!dump_sim.empty()) {
                zfb::write_matrix(dump_sim, build_similarity_matrix(attrs, cfg.phi).values, zfb::Precision::Float64);
            }
            const TrainOutcome out = train_classifier(b, attrs, protos, cfg);
            save_model(out.artifact, train_out);
            std::ostringstream hist;
            hist << "epoch,loss\n" << std::setprecision(12);
            for (std::size_t e = 0; e < out.loss_history.size(); ++e) hist << e + 1 << ',' << out.loss_history[e] << '\n';
            write_file(fs::path(train_out) / "history.csv", hist.str());
            std::cout << "final loss " << out.loss_history.back() << ", model in " << train_out << '\n';
        } else if (ev->parsed()) {
            const Bundle b = load_bundle(eval_bundle);
            const ModelArtifact m = load_model(eval_model);
            if (m.num_seen != b.attributes.num_seen || m.num_unseen != b.attributes.num_unseen) {
                throw DataError("model class counts do not match the bundle");
            }
            const AttributeMatrix attrs = prepare_attributes(b.attributes, m.msas_enabled, m.msas);
            const EvalReport r = evaluate(m.model, b.dataset, attrs);
            std::optional<AlignmentReport> alignment;
            if (eval_k > 0) {
                if (eval_protos.empty()) throw ConfigError("--alignment-k needs --protos");
                alignment = prototype_alignment(load_prototypes(eval_protos), b.dataset, eval_k, m.seed);
            }
            const nlohmann::json echo = {{"bundle", eval_bundle}, {"model", eval_model}, {"alignment_k", eval_k}};
            if (!eval_report.empty()) write_file(eval_report, report_to_json(r, echo, alignment).dump(2) + "\n");
            if (!eval_csv.empty()) write_file(eval_csv, report_csv_header() + "\n" + report_csv_row(r) + "\n");
            print_report(r);
            if (alignment) std::cout << "alignment mean normalized distance " << alignment->mean << '\n';
        } else if (run->parsed()) {
            RunConfig cfg = run_o.resolve();
            if (!run_bundle.empty()) cfg.bundle = run_bundle;
            if (!run_out.empty()) cfg.output_dir = run_out;
            if (run_k >= 0) cfg.alignment_k = run_k;
            const RunOutcome out = run_pipeline(cfg);
            print_report(out.report);
        } else if (sw->parsed()) {
            RunConfig cfg = sweep_o.resolve();
            if (!sweep_bundle.empty()) cfg.bundle = sweep_bundle;
            if (!sweep_out.empty()) cfg.output_dir = sweep_out;
            cfg.validate();
            const auto values = parse_values(sweep_values);
            const auto rows = run_sweep(cfg, parse_sweep_axis(sweep_axis), values);
            const std::string csv = sweep_csv(rows);
            if (sweep_csv_path.empty()) {
                std::cout << csv;
            } else {
                write_file(sweep_csv_path, csv);
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Data);
    }
    return 0;
}
