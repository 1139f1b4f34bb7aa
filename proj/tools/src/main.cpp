#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glare/calib.hpp"
#include "glare/deglare.hpp"
#include "glare/encode.hpp"
#include "glare/errors.hpp"
#include "glare/gsf.hpp"
#include "glare/image_io.hpp"
#include "glare/metrics.hpp"
#include "glare/synth.hpp"
#include "pipeline.hpp"
#include "util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::optional<std::uint64_t> seed;
};

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension().string();
        if (ext == ".pfm" || ext == ".png") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw glare::ArgumentError("no .pfm/.png inputs in " + dir.string());
    return files;
}

// Run `work` over the sorted file list with a bounded pool, then hand results
// to `emit` sequentially in sorted-path order so output writes stay
// deterministic.
template <typename Result, typename Work, typename Emit>
void run_batch(const std::vector<fs::path>& files, unsigned jobs, Work work, Emit emit) {
    std::vector<Result> results(files.size());
    std::vector<std::exception_ptr> errors(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) {
            try {
                results[i] = work(files[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::size_t>(jobs, files.size());
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        emit(files[i], std::move(results[i]));
    }
}

// --- calibrate ---------------------------------------------------------

struct CalibrateArgs {
    std::string manifest, init, out, report, holdout;
    std::vector<double> lambda_grid;
    std::string alpha_policy = "uniform";
};

int cmd_calibrate(const CalibrateArgs& a) {
    glare::CalibDataset ds = glare::load_calib_manifest(a.manifest);
    glare::GsfParams init;
    if (!a.init.empty()) init = glare::GsfParams::load(a.init);
    else init = glare::GsfParams{0.9, 0.01, 0.5, 1.2};

    glare::FitReport report;
    glare::GsfParams fitted;
    if (!a.holdout.empty()) {
        const glare::CalibDataset hd = glare::load_calib_manifest(a.holdout);
        const glare::AlphaPolicy policy = a.alpha_policy == "inverse-residual"
                                              ? glare::AlphaPolicy::InverseResidual
                                              : glare::AlphaPolicy::Uniform;
        std::vector<double> grid = a.lambda_grid;
        if (grid.empty()) grid = {0.0, 1e-6, 1e-4, 1e-2};
        const glare::TuneResult tuned =
            glare::validate_and_tune(ds, hd.scenes, grid, policy, init);
        fitted = tuned.params;
        report = tuned.report;
        cli::log("info", "calib",
                 "tuned lambda=" + cli::format_value(tuned.lambda) +
                     " holdout_rmse=" + cli::format_value(tuned.holdout_rmse));
    } else {
        report = glare::fit_joint_gsf(ds, init);
        fitted = report.params;
    }
    fitted.save(a.out);
    if (!a.report.empty()) {
        std::ofstream f(a.report);
        if (!f) throw glare::ArgumentError("cannot write " + a.report);
        f << report.to_json() << "\n";
    }
    cli::log("info", "calib", "fitted parameters written to " + a.out);
    return 0;
}

// --- simulate ----------------------------------------------------------

int cmd_simulate(const GlobalOpts& g, const std::string& in, const std::string& gsf,
                 const std::string& out) {
    const glare::GsfParams params = glare::GsfParams::load(gsf);
    if (fs::is_directory(in)) {
        fs::create_directories(out);
        run_batch<glare::RadianceMap>(
            list_images(in), g.jobs,
            [&](const fs::path& p) {
                const glare::RadianceMap img = glare::load_image(p.string());
                return glare::simulate_glare(img,
                                             glare::GsfKernel(params, img.width(), img.height()));
            },
            [&](const fs::path& p, glare::RadianceMap r) {
                glare::save_image(r, (fs::path(out) / p.filename()).string());
            });
    } else {
        const glare::RadianceMap img = glare::load_image(in);
        glare::save_image(
            glare::simulate_glare(img, glare::GsfKernel(params, img.width(), img.height())), out);
    }
    cli::log("info", "gsf", "simulated glare -> " + out);
    return 0;
}

// --- deglare -----------------------------------------------------------

struct DeglareArgs {
    std::string in, gsf, out, report;
    std::string method = "deglare";
    glare::DeglareOptions opts;
    double ceiling = -1.0;
};

int cmd_deglare(const GlobalOpts& g, DeglareArgs a) {
    if (a.ceiling >= 0.0) a.opts.ceiling = a.ceiling;
    cli::GlareAConfig cfg;
    cfg.method = a.method;
    cfg.gsf_path = a.gsf;
    cfg.opts = a.opts;

    if (fs::is_directory(a.in)) {
        fs::create_directories(a.out);
        if (!a.report.empty()) fs::create_directories(a.report);
        using R = std::pair<glare::RadianceMap, glare::DeglareReport>;
        run_batch<R>(
            list_images(a.in), g.jobs,
            [&](const fs::path& p) {
                glare::DeglareReport rep;
                glare::RadianceMap out = cli::run_glare_a(glare::load_image(p.string()), cfg, &rep);
                return R{std::move(out), rep};
            },
            [&](const fs::path& p, R r) {
                glare::save_image(r.first, (fs::path(a.out) / p.filename()).string());
                if (!a.report.empty()) {
                    const fs::path rp =
                        fs::path(a.report) / (p.stem().string() + ".report.json");
                    std::ofstream f(rp);
                    if (!f) throw glare::ArgumentError("cannot write " + rp.string());
                    f << r.second.to_json() << "\n";
                }
            });
    } else {
        glare::DeglareReport rep;
        const glare::RadianceMap out = cli::run_glare_a(glare::load_image(a.in), cfg, &rep);
        glare::save_image(out, a.out);
        if (!a.report.empty()) {
            std::ofstream f(a.report);
            if (!f) throw glare::ArgumentError("cannot write " + a.report);
            f << rep.to_json() << "\n";
        }
    }
    cli::log("info", "deglare", "restored -> " + a.out);
    return 0;
}

// --- encode ------------------------------------------------------------

int cmd_encode(const GlobalOpts& g, const std::string& in, const std::string& out,
               const std::string& tf_flag, int quant_bits, double ceiling) {
    const glare::TransferFunction tf = glare::tf_from_flag(tf_flag);
    auto encode_one = [&](const fs::path& p) {
        glare::RadianceMap img = glare::load_image(p.string());
        if (!std::holds_alternative<glare::LogTf>(tf)) {
            double c = ceiling > 0.0 ? ceiling : img.max_value();
            if (c <= 0.0) c = 1.0;
            for (double& v : img.data()) v /= c;
        }
        glare::EncodedImage enc = glare::encode(img, tf);
        if (quant_bits > 0) enc = glare::quantize(enc, quant_bits);
        return enc.values;
    };
    if (fs::is_directory(in)) {
        fs::create_directories(out);
        run_batch<glare::RadianceMap>(list_images(in), g.jobs, encode_one,
                                      [&](const fs::path& p, glare::RadianceMap r) {
                                          glare::save_image(
                                              r, (fs::path(out) / p.filename()).string());
                                      });
    } else {
        glare::save_image(encode_one(in), out);
    }
    cli::log("info", "encode", "encoded -> " + out);
    return 0;
}

// --- synth -------------------------------------------------------------

struct SynthArgs {
    std::string spec, out, gsf;
    double ceiling = 1.0;
    double noise = 0.0;
};

int cmd_synth(const GlobalOpts& g, const SynthArgs& a) {
    glare::SceneSpec spec = glare::SceneSpec::load(a.spec);
    if (g.seed) spec.seed = *g.seed;
    glare::GsfParams params{0.9, 0.004, 0.3, 0.9};
    if (!a.gsf.empty()) params = glare::GsfParams::load(a.gsf);

    fs::create_directories(a.out);
    const fs::path dir(a.out);
    const glare::RadianceMap scene = glare::make_scene(spec);
    glare::save_image(scene, (dir / "scene.pfm").string());

    auto [degraded, record] = glare::degrade(scene, params, a.ceiling, a.noise, spec.seed);
    glare::save_image(degraded, (dir / "degraded.pfm").string());

    {
        std::ofstream f(dir / "record.json");
        f << record.to_json() << "\n";
    }
    params.save((dir / "params.json").string());

    // Metric-harness ground truth from the labeled rectangles.
    {
        json line;
        line["image_id"] = "scene";
        line["boxes"] = json::array();
        for (const auto& obj : spec.objects) {
            line["boxes"].push_back({{"x1", obj.rect.x},
                                     {"y1", obj.rect.y},
                                     {"x2", obj.rect.x + obj.rect.w},
                                     {"y2", obj.rect.y + obj.rect.h},
                                     {"class", obj.label},
                                     {"score", 1.0}});
        }
        std::ofstream f(dir / "gt_detections.jsonl");
        f << line.dump() << "\n";
    }
    cli::log("info", "synth", "scene fixtures written to " + a.out);
    return 0;
}

// --- main --------------------------------------------------------------

int dispatch(int argc, char** argv) {
    CLI::App app{"Glare calibration, simulation, and removal toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Global RNG seed (overrides spec seeds)");
    app.add_option("--jobs", g.jobs, "Worker threads for batch directories")
        ->default_val(g.jobs)
        ->check(CLI::PositiveNumber);

    CalibrateArgs ca;
    auto* calibrate = app.add_subcommand("calibrate", "Fit joint glare-spread parameters");
    calibrate->add_option("--manifest", ca.manifest, "Calibration manifest JSON")->required();
    calibrate->add_option("--init", ca.init, "Initial parameter JSON (default 0.9,0.01,0.5,1.2)");
    calibrate->add_option("--out", ca.out, "Fitted parameter JSON output")->required();
    calibrate->add_option("--report", ca.report, "Fit report JSON output");
    calibrate->add_option("--holdout", ca.holdout, "Holdout manifest enabling lambda tuning");
    calibrate->add_option("--lambda-grid", ca.lambda_grid,
                          "Lambda grid for tuning (default 0,1e-6,1e-4,1e-2)");
    calibrate
        ->add_option("--alpha-policy", ca.alpha_policy, "Scene weighting during tuning")
        ->check(CLI::IsMember({"uniform", "inverse-residual"}))
        ->default_val("uniform");

    std::string sim_in, sim_gsf, sim_out;
    auto* simulate = app.add_subcommand("simulate", "Apply glare to an image or directory");
    simulate->add_option("--in", sim_in, "Input image or directory")->required();
    simulate->add_option("--gsf", sim_gsf, "Glare parameter JSON")->required();
    simulate->add_option("--out", sim_out, "Output image or directory")->required();

    DeglareArgs da;
    auto* deglare = app.add_subcommand("deglare", "Remove glare (saturation-aware by default)");
    deglare->add_option("--in", da.in, "Input image or directory")->required();
    deglare->add_option("--gsf", da.gsf, "Glare parameter JSON")->required();
    deglare->add_option("--out", da.out, "Output image or directory")->required();
    deglare->add_option("--report", da.report, "Report JSON path (directory in batch mode)");
    deglare->add_option("--method", da.method, "deglare | wiener")
        ->check(CLI::IsMember({"deglare", "wiener"}))
        ->default_val("deglare");
    deglare->add_option("--nsr", da.opts.wiener.nsr, "Wiener noise-to-signal ratio")
        ->default_val(da.opts.wiener.nsr);
    deglare
        ->add_option("--sat-threshold", da.opts.sat_threshold_frac,
                     "Saturation threshold as a fraction of the ceiling")
        ->default_val(da.opts.sat_threshold_frac);
    deglare->add_option("--dark-sigma", da.opts.dark_sigma, "Dark-prior blur sigma")
        ->default_val(da.opts.dark_sigma);
    deglare->add_option("--dark-patch", da.opts.dark_patch, "Dark-channel patch size")
        ->default_val(da.opts.dark_patch);
    deglare->add_option("--dark-quantile", da.opts.dark_quantile, "Darkest-pixel quantile")
        ->default_val(da.opts.dark_quantile);
    deglare->add_option("--lambda1", da.opts.lambda1, "Stray-light L1 weight (<0 = auto)")
        ->default_val(da.opts.lambda1);
    deglare->add_option("--ceiling", da.ceiling, "Sensor ceiling (default: image max)");

    std::string enc_in, enc_out, enc_tf = "gamma:2.2";
    int enc_bits = 0;
    double enc_ceiling = -1.0;
    auto* encode = app.add_subcommand("encode", "Apply a transfer function and quantize");
    encode->add_option("--in", enc_in, "Input image or directory")->required();
    encode->add_option("--out", enc_out, "Output image or directory")->required();
    encode->add_option("--tf", enc_tf, "gamma:G | log:N | linear:m,c")->default_val(enc_tf);
    encode->add_option("--quant-bits", enc_bits, "Quantization depth (0 = none)")
        ->default_val(0)
        ->check(CLI::Range(0, 16));
    encode->add_option("--ceiling", enc_ceiling,
                       "Normalization ceiling for gamma/linear (default: image max)");

    cli::ScoreRequest sr;
    auto* score = app.add_subcommand("score", "Score predictions against ground truth");
    score->add_option("--metric", sr.metric, "miou | map | mota | motp | lane-rmse | depth-rmse")
        ->required()
        ->check(CLI::IsMember({"miou", "map", "mota", "motp", "lane-rmse", "depth-rmse"}));
    score->add_option("--pred", sr.pred, "Prediction file")->required();
    score->add_option("--ref", sr.ref, "Ground-truth file")->required();
    score->add_option("--mask", sr.mask, "Validity mask image (depth-rmse)");
    score->add_option("--iou", sr.iou, "IoU threshold")->default_val(0.5);
    score->add_option("--out", sr.out_json, "Score record JSON output");
    score->add_option("--csv", sr.out_csv, "Aggregate CSV output");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Generate a scene with its degraded capture and GT");
    synth->add_option("--spec", sa.spec, "Scene specification JSON")->required();
    synth->add_option("--out", sa.out, "Output directory")->required();
    synth->add_option("--gsf", sa.gsf, "Glare parameter JSON (default 0.9,0.004,0.3,0.9)");
    synth->add_option("--ceiling", sa.ceiling, "Clipping ceiling")->default_val(1.0);
    synth->add_option("--noise", sa.noise, "Gaussian noise sigma relative to the ceiling")
        ->default_val(0.0);

    std::string pipe_config;
    auto* pipeline = app.add_subcommand("pipeline", "Run the staged camera pipeline from a config");
    pipeline->add_option("--config", pipe_config, "Pipeline config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    if (seed_opt->count() > 0) g.seed = seed_value;

    if (calibrate->parsed()) return cmd_calibrate(ca);
    if (simulate->parsed()) return cmd_simulate(g, sim_in, sim_gsf, sim_out);
    if (deglare->parsed()) return cmd_deglare(g, da);
    if (encode->parsed()) return cmd_encode(g, enc_in, enc_out, enc_tf, enc_bits, enc_ceiling);
    if (score->parsed()) {
        const glare::ScoreRecord rec = cli::run_score(sr);
        std::printf("%s\n", cli::format_value(rec.value).c_str());
        return 0;
    }
    if (synth->parsed()) return cmd_synth(g, sa);
    if (pipeline->parsed()) return cli::run_pipeline(pipe_config);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const glare::Error& e) {
        json err{{"error", {{"code", e.code()}, {"msg", e.what()}}}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    } catch (const json::exception& e) {
        json err{{"error", {{"code", "common/json"}, {"msg", e.what()}}}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", {{"code", "common/internal"}, {"msg", e.what()}}}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    }
}
