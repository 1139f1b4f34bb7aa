// Acceptance gate: one pass/fail line per criterion, exit 0 only when all
// criteria hold. Each check is self-contained and uses independent oracles
// (brute-force convolution, forward-simulation ground truth, analytic
// rectangle arithmetic) rather than the code paths under test.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glare/calib.hpp"
#include "glare/deglare.hpp"
#include "glare/encode.hpp"
#include "glare/gsf.hpp"
#include "glare/hdr.hpp"
#include "glare/metrics.hpp"
#include "glare/synth.hpp"

#include "helpers.hpp"

using namespace glare;
namespace fs = std::filesystem;

namespace {

const GsfParams kTrue{0.90, 0.004, 0.30, 0.90};

struct Criterion {
    Criterion() = default;
    explicit Criterion(std::string n) : name(std::move(n)) {}

    std::string name;
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
Criterion c1_fourier_spatial() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n = 8; n <= 16; ++n) {
        RadianceMap img = th::random_map(n, n, 1, 1000 + n, 1.0);
        GsfKernel kernel = rasterize_kernel(kTrue, n, n);
        worst = std::max(worst,
                         th::max_abs_diff(simulate_glare(img, kernel),
                                          th::spatial_convolve(img, kernel)));
    }
    const double dt = seconds_since(t0);
    Criterion c{"fourier/spatial equivalence on 8x8..16x16 random images"};
    c.pass = worst <= 1e-8 && dt < 10.0;
    c.detail = fmt("max |diff| = %.3g (bound 1e-8), %.1f s (bound 10 s)", worst, dt);
    return c;
}

// ---------------------------------------------------------------- criterion 2
Criterion c2_wiener_round_trip() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        // Interior content: the forward simulation drops glare spread past
        // the frame, so round-trip accuracy needs a border margin.
        SceneSpec spec;
        spec.width = spec.height = 64;
        spec.seed = seed;
        spec.sources.push_back({24.0 + static_cast<double>(seed % 7), 30.0, 4.0, 0.8});
        spec.objects.push_back({{36, 14, 12, 10}, "car", 0.25});
        RadianceMap scene = make_scene(spec);
        GsfKernel kernel = rasterize_kernel(kTrue, 64, 64);
        RadianceMap back = wiener_deconvolve(simulate_glare(scene, kernel), kernel, {1e-12});
        worst = std::max(worst, th::rel_rmse(back, scene));
    }
    const double dt = seconds_since(t0);
    Criterion c{"wiener round trip on unclipped 64x64 scenes"};
    c.pass = worst <= 1e-3 && dt < 10.0;
    c.detail = fmt("max rel RMSE = %.3g (bound 1e-3) at nsr 1e-12, %.1f s (bound 10 s)", worst, dt);
    return c;
}

// ---------------------------------------------------------------- criterion 3
CalibScene calib_scene(const std::string& id, int n, double cx, double cy) {
    SceneSpec spec;
    spec.width = spec.height = n;
    spec.sources.push_back({cx, cy, 2.0, 20.0});
    CalibScene s;
    s.camera_id = id;
    s.l_in = make_scene(spec);
    s.l_capt = simulate_glare(s.l_in, rasterize_kernel(kTrue, n, n));
    return s;
}

// The rasterized kernel is normalized to unit sum, so jointly scaling
// (p1, p2) leaves every model output unchanged; only the unit-raw-sum gauge
// of the parameters is observable. Recovery is compared in that gauge.
GsfParams canonical(const GsfParams& p, int n) {
    GsfKernel k(p, n, n);
    const int cx = k.canvas_width() / 2, cy = k.canvas_height() / 2;
    double raw = p.p1 + p.p2;
    for (int y = 0; y < k.canvas_height(); ++y)
        for (int x = 0; x < k.canvas_width(); ++x) {
            if (x == cx && y == cy) continue;
            raw += p.p2 * std::exp(-p.p3 * std::pow(std::hypot(x - cx, y - cy), p.p4));
        }
    return {p.p1 / raw, p.p2 / raw, p.p3, p.p4};
}

double worst_component_err(const GsfParams& fit, int n) {
    const GsfParams cf = canonical(fit, n), ct = canonical(kTrue, n);
    const double e[4] = {std::abs(cf.p1 - ct.p1) / ct.p1, std::abs(cf.p2 - ct.p2) / ct.p2,
                         std::abs(cf.p3 - ct.p3) / ct.p3, std::abs(cf.p4 - ct.p4) / ct.p4};
    return std::max(std::max(e[0], e[1]), std::max(e[2], e[3]));
}

Criterion c3_calibration_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 128;
    const GsfParams init{0.8, 0.01, 0.5, 1.2};

    CalibDataset single;
    single.scenes.push_back(calib_scene("cam0", n, 64.0, 64.0));
    const double err1 = worst_component_err(fit_joint_gsf(single, init).params, n);

    CalibDataset joint;
    joint.scenes.push_back(calib_scene("cam0", n, 64.0, 64.0));
    joint.scenes.push_back(calib_scene("cam1", n, 48.0, 70.0));
    joint.scenes.push_back(calib_scene("cam2", n, 76.0, 52.0));
    FitReport rep3 = fit_joint_gsf(joint, init);
    const double err3 = worst_component_err(rep3.params, n);
    double rmin = rep3.per_scene_residual[0], rmax = rmin;
    for (double r : rep3.per_scene_residual) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    // residuals at numerical zero (noiseless fit) count as equal
    const bool residuals_equal = (rmax - rmin) <= 0.1 * std::max(rmax, 1e-6);

    const double dt = seconds_since(t0);
    Criterion c{"calibration parameter recovery at 128x128 (1 and 3 cameras)"};
    c.pass = err1 <= 0.05 && err3 <= 0.05 && residuals_equal && dt < 120.0;
    c.detail = fmt("worst component err: single %.2f%%, joint %.2f%% (bound 5%%); "
                   "residual spread %.3g (bound 10%%); %.1f s (bound 120 s)",
                   100.0 * err1, 100.0 * err3, rmax - rmin, dt);
    return c;
}

// ------------------------------------------------------------ criteria 4 + 5
void c45_deglare(Criterion& c4, Criterion& c5) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 128, trials = 20;
    int beats_input = 0, beats_wiener = 0, constraints_ok = 0;
    GsfKernel kernel = rasterize_kernel(kTrue, n, n);

    for (int t = 0; t < trials; ++t) {
        Rng rng(9000 + t);
        SceneSpec spec;
        spec.width = spec.height = n;
        spec.background = 0.05;
        spec.dark_patches.push_back(
            {4 + static_cast<int>(rng.next_u64() % 8), 4 + static_cast<int>(rng.next_u64() % 8),
             10, 10});
        const int nsrc = 1 + static_cast<int>(rng.next_u64() % 3);
        for (int s = 0; s < nsrc; ++s)
            spec.sources.push_back({40.0 + 60.0 * rng.uniform(), 40.0 + 60.0 * rng.uniform(),
                                    2.0 + 2.0 * rng.uniform(), 3.0 + 5.0 * rng.uniform()});
        RadianceMap scene = make_scene(spec);
        auto [degraded, rec] = degrade(scene, kTrue, 1.0);

        DeglareOptions opts;
        opts.ceiling = 1.0;
        auto [restored, rep] = deglare(degraded, kernel, opts);
        SaturationPartition part = detect_saturation(degraded, opts.sat_threshold_frac, 1.0);
        std::vector<bool> u(part.mask.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = !part.mask[i];

        const double e_in = th::log_rmse(degraded, scene, u);
        const double e_out = th::log_rmse(restored, scene, u);
        const double e_wnr =
            th::log_rmse(wiener_deconvolve(degraded, kernel, opts.wiener), scene, u);
        if (e_out < e_in) ++beats_input;
        if (e_out <= e_wnr) ++beats_wiener;
        if (rep.unsat_residual_min >= -rep.tolerance && rep.stray_min >= 0.0 &&
            rep.deconv_min >= -rep.tolerance)
            ++constraints_ok;
    }
    const double dt = seconds_since(t0);
    c4 = Criterion("saturation-aware deglare beats input and plain wiener on clipped scenes");
    c4.pass = beats_input >= 19 && beats_wiener >= 18 && dt < 300.0;
    c4.detail = fmt("improves on input %d/20 (need >= 19), <= wiener %d/20 (need >= 18), "
                    "%.1f s (bound 300 s)",
                    beats_input, beats_wiener, dt);
    c5 = Criterion("constraint residuals within tolerance on every deglare run");
    c5.pass = constraints_ok == trials;
    c5.detail = fmt("%d/%d runs within tolerance (stray exactly >= 0, others >= -1e-6*max)",
                    constraints_ok, trials);
}

// ---------------------------------------------------------------- criterion 6
Criterion c6_hdr_merge() {
    RadianceMap scene = th::random_map(64, 64, 1, 77, 0.85);
    for (double& v : scene.data()) v += 0.05;  // keep the shortest frame well-exposed
    ExposureStack stack = make_exposure_stack(scene, {1.0, 4.0, 16.0}, 1.0);
    RadianceMap merged = merge_hdr(stack);
    double worst = 0.0;
    for (std::size_t i = 0; i < scene.size(); ++i)
        worst = std::max(worst,
                         std::abs(merged.data()[i] - scene.data()[i]) / scene.data()[i]);
    Criterion c{"hdr merge reproduces the scene at pixels unsaturated in some frame"};
    c.pass = worst <= 1e-6;
    c.detail = fmt("max relative error %.3g (bound 1e-6) over a noiseless 3-exposure stack", worst);
    return c;
}

// ---------------------------------------------------------------- criterion 7
Criterion c7_transfer_functions() {
    auto enc1 = [](double v, const TransferFunction& tf) {
        return encode(RadianceMap(1, 1, 1, v), tf).values.data()[0];
    };
    double worst = 0.0;
    worst = std::max(worst, std::abs(enc1(0.25, GammaTf{2.0}) - 0.5));
    worst = std::max(worst, std::abs(enc1(65535.0, LogTf{16}) - 1.0));
    worst = std::max(worst, std::abs(enc1(1.0, LogTf{16}) - 0.0));
    worst = std::max(worst, std::abs(enc1(0.5, LogTf{16}) - 0.0));
    for (double v : {0.0, 0.125, 0.5, 0.9, 1.0})
        worst = std::max(worst, std::abs(enc1(v, LinearTf{1.0, 0.0}) - v));

    bool quant_ok = true;
    RadianceMap samples = th::random_map(10000, 1, 1, 4242, 1.0);
    for (int bits : {4, 8, 12}) {
        const double levels = std::pow(2.0, bits) - 1.0;
        EncodedImage q = quantize(encode(samples, LinearTf{1.0, 0.0}), bits);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double err = std::abs(q.values.data()[i] - samples.data()[i]);
            if (err > 0.5 / levels + 1e-15) quant_ok = false;
            const double steps = q.values.data()[i] * levels;
            if (std::abs(steps - std::round(steps)) > 1e-9) quant_ok = false;
        }
    }
    Criterion c{"transfer-function endpoints exact; quantization error bounded"};
    c.pass = worst <= 1e-12 && quant_ok;
    c.detail = fmt("endpoint max err %.3g (bound 1e-12); half-step bound %s over 1e4 samples "
                   "at 4/8/12 bits",
                   worst, quant_ok ? "holds" : "VIOLATED");
    return c;
}

// ---------------------------------------------------------------- criterion 8
BoundingBox bx(double x1, double y1, double x2, double y2, double score = 0.0) {
    BoundingBox b;
    b.x1 = x1;
    b.y1 = y1;
    b.x2 = x2;
    b.y2 = y2;
    b.class_id = "c";
    b.score = score;
    return b;
}

Criterion c8_metric_oracles() {
    const auto t0 = std::chrono::steady_clock::now();
    // Exhaustive 2-box integer configurations on a 20x20 canvas, reduced by
    // joint translation (both metrics are invariant to it): the first box is
    // anchored at the origin, the second ranges over the full canvas.
    bool miou_ok = true;
    long checked = 0;
    for (int aw = 1; aw <= 20 && miou_ok; ++aw)
        for (int ah = 1; ah <= 20 && miou_ok; ++ah)
            for (int x1 = 0; x1 < 20 && miou_ok; ++x1)
                for (int x2 = x1 + 1; x2 <= 20 && miou_ok; ++x2)
                    for (int y1 = 0; y1 < 20 && miou_ok; ++y1)
                        for (int y2 = y1 + 1; y2 <= 20; ++y2) {
                            const BoundingBox a = bx(0, 0, aw, ah);
                            const BoundingBox b = bx(x1, y1, x2, y2);
                            const double ix =
                                std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
                            const double iy =
                                std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
                            const double inter = ix * iy;
                            const double want = inter / (a.area() + b.area() - inter);
                            DetectionSet da, db;
                            da.boxes = {a};
                            db.boxes = {b};
                            ++checked;
                            if (std::abs(miou(da, db) - want) > 1e-12) {
                                miou_ok = false;
                                break;
                            }
                        }

    // AP hand cases and the {1, 1, 0.5} -> 0.8333 class mean.
    bool ap_ok = true;
    ap_ok &= average_precision({bx(0, 0, 10, 10, 0.9)}, {bx(0, 0, 10, 10)}, 0.5) == 1.0;
    std::map<std::string, std::vector<BoundingBox>> refs, preds;
    refs["one"] = {bx(0, 0, 4, 4)};
    preds["one"] = {bx(0, 0, 4, 4, 0.7)};
    refs["two"] = {bx(10, 0, 14, 4)};
    preds["two"] = {bx(10, 0, 14, 4, 0.7)};
    refs["half"] = {bx(0, 10, 4, 14), bx(10, 10, 14, 14)};
    preds["half"] = {bx(0, 10, 4, 14, 0.7)};
    ap_ok &= std::abs(mean_ap(preds, refs, 0.5) - 5.0 / 6.0) <= 1e-9;

    // MOTA 1 - 2/10 = 0.8: ten ground truths, one miss, one false positive.
    std::vector<TrackFrame> ref_frames, pred_frames;
    for (int t = 0; t < 5; ++t) {
        TrackFrame f;
        f.t = t;
        f.entries = {{1, bx(0, 0, 5, 5)}, {2, bx(20, 0, 25, 5)}};
        ref_frames.push_back(f);
        pred_frames.push_back(f);
    }
    pred_frames[2].entries.pop_back();
    pred_frames[4].entries.push_back({9, bx(40, 40, 45, 45)});
    const TrackingScore ts = mota_motp(pred_frames, ref_frames, 0.5);
    const bool mota_ok = std::abs(ts.mota - 0.8) <= 1e-12;

    // RMSE identity cases.
    LanePointSet lane;
    lane.points = {{10, 0}, {12, 5}, {15, 10}};
    const bool lane_ok = rmse_points(lane, lane) == 0.0;
    DepthMap depth{2, 2, {1.0, 2.0, 3.0, 4.0}};
    const bool depth_ok = rmse_depth(depth, depth, std::vector<bool>(4, true)) == 0.0;

    const double dt = seconds_since(t0);
    Criterion c{"metric oracles: exhaustive 2-box miou, ap/mota hand cases, rmse identities"};
    c.pass = miou_ok && ap_ok && mota_ok && lane_ok && depth_ok;
    c.detail = fmt("miou %s over %ld configurations; ap %s; mota %s; rmse identities %s; %.1f s",
                   miou_ok ? "exact" : "MISMATCH", checked, ap_ok ? "ok" : "FAIL",
                   mota_ok ? "ok" : "FAIL", (lane_ok && depth_ok) ? "ok" : "FAIL", dt);
    return c;
}

// ---------------------------------------------------------------- criterion 9
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Criterion c9_pipeline_determinism() {
    Criterion c{"pipeline subcommand is byte-identical across two runs"};
    auto dir = th::tmp_dir("acceptance-pipe");
    auto shell = [&](const std::string& args) {
        const std::string cmd = std::string(GLAREKIT_BIN) + " " + args + " >/dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    {
        std::ofstream f(dir / "spec.json");
        f << R"({"width":48,"height":48,"background":0.05,"seed":5,)"
          << R"("sources":[{"cx":30.0,"cy":22.0,"radius":3.0,"intensity":4.0}]})";
    }
    if (!shell("synth --spec " + (dir / "spec.json").string() + " --out " + (dir / "s").string())) {
        c.detail = "synth subcommand failed";
        return c;
    }
    nlohmann::json cfg = {
        {"version", 1},
        {"input", {{"image", (dir / "s" / "degraded.pfm").string()}}},
        {"glare_reduction_a",
         {{"method", "deglare"},
          {"gsf", (dir / "s" / "params.json").string()},
          {"ceiling", 1.0}}},
        {"encode", {{"tf", "gamma:2.2"}, {"ceiling", 1.0}, {"quant_bits", 8}}},
        {"output", {{"image", ""}, {"report", ""}}},
    };
    for (int run = 1; run <= 2; ++run) {
        cfg["output"]["image"] = (dir / ("out" + std::to_string(run) + ".pfm")).string();
        cfg["output"]["report"] = (dir / ("rep" + std::to_string(run) + ".json")).string();
        std::ofstream f(dir / "cfg.json");
        f << cfg.dump();
        f.close();
        if (!shell("--seed 5 pipeline --config " + (dir / "cfg.json").string())) {
            c.detail = "pipeline run failed";
            return c;
        }
    }
    const std::string a = slurp(dir / "out1.pfm"), b = slurp(dir / "out2.pfm");
    c.pass = !a.empty() && a == b;
    c.detail = fmt("two runs, %zu bytes each, %s", a.size(),
                   c.pass ? "identical" : "DIFFERENT");
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(c1_fourier_spatial());
    results.push_back(c2_wiener_round_trip());
    results.push_back(c3_calibration_recovery());
    Criterion c4, c5;
    c45_deglare(c4, c5);
    results.push_back(c4);
    results.push_back(c5);
    results.push_back(c6_hdr_merge());
    results.push_back(c7_transfer_functions());
    results.push_back(c8_metric_oracles());
    results.push_back(c9_pipeline_determinism());

    bool all = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::printf("[%s] criterion %zu: %s — %s\n", results[i].pass ? "PASS" : "FAIL", i + 1,
                    results[i].name.c_str(), results[i].detail.c_str());
        all = all && results[i].pass;
    }
    std::printf("%s\n", all ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: FAILURES PRESENT");
    return all ? 0 : 1;
}
