#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "zsl/errors.hpp"
#include "zsl/pipeline.hpp"
#include "zsl/synthetic_world.hpp"

using namespace zsl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path small_bundle(const fs::path& dir) {
    SyntheticWorldParams p;
    p.seed = 2;
    p.num_seen = 4;
    p.num_unseen = 2;
    p.feature_dim = 8;
    p.attribute_dim = 6;
    p.samples_per_seen_class = 20;
    p.test_samples_per_class = 6;
    p.noise_scale = 0.1;
    const SyntheticWorld w = make_synthetic_world(p);
    save_bundle(w.dataset, w.attributes, dir / "bundle");
    return dir / "bundle";
}

RunConfig small_config(const fs::path& bundle, const fs::path& out) {
    RunConfig cfg;
    cfg.bundle = bundle;
    cfg.output_dir = out;
    cfg.seed = 3;
    cfg.msas = {1.0, 1.0};
    cfg.synthesis.per_class = 3;
    cfg.synthesis.lambda_min = 1e-3;
    cfg.synthesis.lambda_max = 1e-2;
    cfg.train.epochs = 3;
    cfg.train.batch_size = 16;
    cfg.encoder_hidden = cfg.scorer_hidden = 16;
    cfg.sync();
    return cfg;
}

}  // namespace

TEST(RunConfigFile, ParsesSectionsAndPreset) {
    const RunConfig cfg = parse_run_config(
        "[run]\nseed = 9\npreset = awa2\n"
        "[msas]\nthreshold = 0.75\n"
        "[synthesis]\nlambda_max = 1.5\n"
        "[dpsr]\nenabled = false\nphi = 0.2\n"
        "[train]\nbeta = 0.4\nepochs = 7\nplain_loss = yes\nencoder_hidden = 32\n"
        "[eval]\nalignment_k = 3\n");
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.synthesis.seed, 9u);
    EXPECT_EQ(cfg.train.seed, 9u);
    EXPECT_DOUBLE_EQ(cfg.msas.weight, 0.08);
    EXPECT_DOUBLE_EQ(cfg.msas.threshold, 0.75);
    EXPECT_EQ(cfg.synthesis.per_class, 90);
    EXPECT_DOUBLE_EQ(cfg.synthesis.lambda_min, 1.0);
    EXPECT_DOUBLE_EQ(cfg.synthesis.lambda_max, 1.5);
    EXPECT_FALSE(cfg.dpsr_enabled);
    EXPECT_FALSE(cfg.train.dpsr_enabled);
    EXPECT_DOUBLE_EQ(cfg.phi, 0.2);
    EXPECT_DOUBLE_EQ(cfg.train.beta, 0.4);
    EXPECT_EQ(cfg.train.epochs, 7);
    EXPECT_TRUE(cfg.train.plain_loss_mode);
    EXPECT_EQ(cfg.encoder_hidden, 32);
    EXPECT_EQ(cfg.scorer_hidden, 1024);
    EXPECT_EQ(cfg.alignment_k, 3);
}

TEST(RunConfigFile, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_run_config("[train]\nbta = 1\n"), ConfigError);
    EXPECT_THROW(parse_run_config("[train]\nepochs = many\n"), ConfigError);
    EXPECT_THROW(parse_run_config("[dpsr]\nenabled = maybe\n"), ConfigError);
    EXPECT_THROW(parse_run_config("[run]\npreset = imagenet\n"), ConfigError);
    EXPECT_THROW(load_run_config("/nonexistent/zsl.ini"), ConfigError);
}

TEST(RunConfigFile, RelativePathsResolveAgainstFile) {
    testutil::TempDir tmp;
    std::ofstream(tmp.path() / "run.ini") << "[run]\nbundle = data/b\noutput = out\n";
    const RunConfig cfg = load_run_config(tmp.path() / "run.ini");
    EXPECT_EQ(cfg.bundle, tmp.path() / "data/b");
    EXPECT_EQ(cfg.output_dir, tmp.path() / "out");
}

TEST(RunConfigFile, ValidateCatchesBadValues) {
    RunConfig cfg;
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_NO_THROW(cfg.validate(false));
    cfg.synthesis.lambda_min = 2.0;
    EXPECT_THROW(cfg.validate(false), ConfigError);
    cfg = RunConfig{};
    cfg.phi = 0.0;
    EXPECT_THROW(cfg.validate(false), ConfigError);
    cfg.dpsr_enabled = false;
    EXPECT_NO_THROW(cfg.validate(false));
}

TEST(Artifacts, PrototypeFilesRoundTrip) {
    testutil::TempDir tmp;
    PrototypeSet set;
    Rng rng(1);
    set.prototypes = testutil::random_matrix(4, 3, rng);
    set.labels = {5, 5, 6, 6};
    set.lambdas = {1.0, 1.01, 1.0, 1.02};
    save_prototypes(set, tmp.path() / "p.zfb");
    const PrototypeSet back = load_prototypes(tmp.path() / "p.zfb");
    EXPECT_EQ(back.prototypes, set.prototypes);
    EXPECT_EQ(back.labels, set.labels);
    EXPECT_EQ(back.lambdas, set.lambdas);
}

TEST(Artifacts, ModelRoundTripIsExact) {
    testutil::TempDir tmp;
    ModelArtifact a;
    a.model = SccModel::initialized({5, 4, 7, 3, 0.01}, 12);
    a.num_seen = 3;
    a.num_unseen = 2;
    a.seed = 12;
    a.msas = {0.08, 0.8};
    save_model(a, tmp.path() / "m");
    const ModelArtifact b = load_model(tmp.path() / "m");
    EXPECT_TRUE(b.model == a.model);
    EXPECT_EQ(b.model.arch.encoder_hidden, 7);
    EXPECT_EQ(b.model.arch.scorer_hidden, 3);
    EXPECT_EQ(b.num_seen, 3);
    EXPECT_EQ(b.msas.threshold, 0.8);
    EXPECT_THROW(load_model(tmp.path() / "missing"), DataError);
}

TEST(Pipeline, WritesArtifactsAndManifest) {
    testutil::TempDir tmp;
    RunConfig cfg = small_config(small_bundle(tmp.path()), tmp.path() / "run");
    cfg.alignment_k = 2;
    const RunOutcome out = run_pipeline(cfg);
    EXPECT_EQ(out.loss_history.size(), 3u);
    ASSERT_TRUE(out.alignment.has_value());
    for (const char* f : {"prototypes.zfb", "prototypes.zfb.labels", "prototypes.zfb.lambdas", "model/model.json",
                          "report.json", "report.csv", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
    }
    const auto manifest = nlohmann::json::parse(slurp(cfg.output_dir / "manifest.json"));
    EXPECT_EQ(manifest["status"], "complete");
    EXPECT_EQ(manifest["stale"], false);
    EXPECT_EQ(manifest["flags"]["dpsr"], true);
    const auto report = nlohmann::json::parse(slurp(cfg.output_dir / "report.json"));
    for (const char* k : {"t1_czsl", "acc_unseen_U", "acc_seen_S", "harmonic_H", "per_class", "config", "alignment"}) {
        EXPECT_TRUE(report.contains(k)) << k;
    }
    EXPECT_DOUBLE_EQ(report["harmonic_H"].get<double>(), out.report.harmonic);
}

TEST(Pipeline, AblationFlagsRecorded) {
    testutil::TempDir tmp;
    RunConfig cfg = small_config(small_bundle(tmp.path()), tmp.path() / "run");
    cfg.dpsr_enabled = false;
    cfg.msas_enabled = false;
    cfg.train.plain_loss_mode = true;
    run_pipeline(cfg);
    const auto manifest = nlohmann::json::parse(slurp(cfg.output_dir / "manifest.json"));
    EXPECT_EQ(manifest["flags"]["dpsr"], false);
    EXPECT_EQ(manifest["flags"]["msas"], false);
    EXPECT_EQ(manifest["flags"]["plain_loss"], true);
}

TEST(Pipeline, ReportIsByteIdenticalAcrossRuns) {
    testutil::TempDir tmp;
    const fs::path bundle = small_bundle(tmp.path());
    run_pipeline(small_config(bundle, tmp.path() / "a"));
    run_pipeline(small_config(bundle, tmp.path() / "b"));
    EXPECT_EQ(slurp(tmp.path() / "a/report.json"), slurp(tmp.path() / "b/report.json"));
    EXPECT_EQ(slurp(tmp.path() / "a/model/encoder_w1.zfb"), slurp(tmp.path() / "b/model/encoder_w1.zfb"));
}

TEST(Pipeline, FailingStageMarksManifestStale) {
    testutil::TempDir tmp;
    RunConfig cfg = small_config(small_bundle(tmp.path()), tmp.path() / "run");
    cfg.alignment_k = 50;  // more sub-clusters than unseen test samples
    try {
        run_pipeline(cfg);
        FAIL() << "expected a data error";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("stage 'eval'"), std::string::npos);
    }
    const auto manifest = nlohmann::json::parse(slurp(cfg.output_dir / "manifest.json"));
    EXPECT_EQ(manifest["status"], "failed");
    EXPECT_EQ(manifest["stale"], true);
    EXPECT_EQ(manifest["failed_stage"], "eval");
}

TEST(Pipeline, MissingBundleIsAConfigError) {
    testutil::TempDir tmp;
    EXPECT_THROW(run_pipeline(small_config(tmp.path() / "nope", {})), ConfigError);
}

TEST(Sweep, BetaAxisGivesOneRowPerValue) {
    testutil::TempDir tmp;
    const RunConfig cfg = small_config(small_bundle(tmp.path()), tmp.path() / "sweep");
    const auto rows = run_sweep(cfg, parse_sweep_axis("beta"), {0.0, 0.2, 1.0});
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) EXPECT_TRUE(r.report.has_value()) << r.error;
    EXPECT_TRUE(fs::exists(tmp.path() / "sweep/beta_0.2/report.json"));
    const std::string csv = sweep_csv(rows);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_EQ(csv.rfind("value,T1,U,S,H,status\n", 0), 0u);
}

TEST(Sweep, EmptyValuesAndUnknownAxisRejected) {
    EXPECT_THROW(run_sweep(RunConfig{}, SweepAxis::Beta, {}), ConfigError);
    EXPECT_THROW(parse_sweep_axis("epochs"), ConfigError);
}

TEST(Sweep, FailedRunIsRecordedNotFatal) {
    testutil::TempDir tmp;
    const RunConfig cfg = small_config(small_bundle(tmp.path()), {});
    const auto rows = run_sweep(cfg, SweepAxis::PerClass, {2, 0});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].report.has_value());
    EXPECT_FALSE(rows[1].report.has_value());
    EXPECT_NE(sweep_csv(rows).find("failed:"), std::string::npos);
}
