#include <doctest.h>

#include <cmath>

#include "glare/deglare.hpp"
#include "glare/synth.hpp"

#include "helpers.hpp"

using namespace glare;

namespace {

const GsfParams kGlare{0.9, 0.004, 0.3, 0.9};

struct Fixture {
    RadianceMap pristine;
    RadianceMap degraded;
    DegradationRecord record;
    GsfKernel kernel;
};

Fixture clipped_scene(int n = 64, double ceiling = 1.0) {
    SceneSpec spec;
    spec.width = spec.height = n;
    spec.background = 0.05;
    spec.dark_patches.push_back({4, 4, 8, 8});
    spec.dark_patches.push_back({n - 14, n - 12, 8, 8});
    spec.sources.push_back({n * 0.6, n * 0.45, 3.0, 4.0});
    spec.objects.push_back({{6, n - 20, 10, 8}, "car", 0.3});
    RadianceMap scene = make_scene(spec);
    auto [degraded, rec] = degrade(scene, kGlare, ceiling);
    return {std::move(scene), std::move(degraded), std::move(rec),
            rasterize_kernel(kGlare, n, n)};
}

std::vector<bool> dilate8(const std::vector<bool>& m, int W, int H) {
    std::vector<bool> out(m.size(), false);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            bool v = false;
            for (int dy = -1; dy <= 1 && !v; ++dy)
                for (int dx = -1; dx <= 1 && !v; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx >= 0 && yy >= 0 && xx < W && yy < H)
                        v = v || m[static_cast<std::size_t>(yy) * W + xx];
                }
            out[static_cast<std::size_t>(y) * W + x] = v;
        }
    return out;
}

}  // namespace

TEST_CASE("saturation: image below threshold yields an empty S") {
    RadianceMap img = th::random_map(16, 16, 1, 4, 0.5);
    SaturationPartition part = detect_saturation(img, 0.98, 1.0);
    CHECK(part.saturated_count == 0);
    CHECK(part.unsaturated_count == 16 * 16);
    for (bool b : part.mask) CHECK_FALSE(b);
}

TEST_CASE("saturation: mask is the recorded clip mask dilated by one pixel") {
    Fixture f = clipped_scene();
    SaturationPartition part = detect_saturation(f.degraded, 1.0, 1.0);
    const std::vector<bool> want = dilate8(f.record.clip_mask, 64, 64);
    REQUIRE(part.mask.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(part.mask[i] == want[i]);
    // partition exactness
    CHECK(part.saturated_count + part.unsaturated_count == 64 * 64);
    CHECK(part.saturated_count > 0);
}

TEST_CASE("saturation: threshold 1 on a unique interior maximum gives pixel plus ring") {
    RadianceMap img(10, 10, 1, 0.1);
    img.at(5, 5) = 1.0;
    SaturationPartition part = detect_saturation(img, 1.0);
    CHECK(part.saturated_count == 9);
    CHECK(part.mask[5 * 10 + 5]);
}

TEST_CASE("saturation: fully saturated image is degenerate") {
    RadianceMap img(8, 8, 1, 1.0);
    CHECK_THROWS_AS(detect_saturation(img, 0.5), DegenerateImageError);
    CHECK_THROWS_AS(detect_saturation(img, 1.5), ArgumentError);
}

TEST_CASE("dark stray: uniform image reports the uniform value") {
    RadianceMap img(32, 32, 1, 0.7);
    img.at(16, 16) = 1.0;  // anchor so S is just this pixel's neighbourhood
    SaturationPartition part = detect_saturation(img, 1.0);
    DarkPixelSet dark = estimate_dark_stray(img, part, 2.0, 7, 0.05);
    CHECK(dark.indices.size() > 0);
    for (double v : dark.stray_estimate) CHECK(v == doctest::Approx(0.7).epsilon(2e-2));
}

TEST_CASE("dark stray: glare-free black patches sit at zero up to blur leakage") {
    // A patch deep enough that the darkest-quantile pixels sit many blur
    // sigmas from the lit background, so the leakage bound applies.
    SceneSpec spec;
    spec.width = spec.height = 64;
    spec.background = 0.3;
    spec.dark_patches.push_back({18, 18, 28, 28});
    spec.sources.push_back({54.0, 10.0, 2.0, 1.0});
    RadianceMap scene = make_scene(spec);
    SaturationPartition part = detect_saturation(scene, 1.0);
    DarkPixelSet dark = estimate_dark_stray(scene, part, 2.0, 7, 0.002);
    REQUIRE(dark.indices.size() > 0);
    // D must land inside the black patch, where the only energy is blur
    // leakage from the background at the patch border
    for (std::size_t i = 0; i < dark.indices.size(); ++i) {
        const int x = dark.indices[i] % 64, y = dark.indices[i] / 64;
        CHECK(x >= 18);
        CHECK(x < 46);
        CHECK(y >= 18);
        CHECK(y < 46);
        CHECK(dark.stray_estimate[i] <= 1e-3 * 0.3);
    }
}

TEST_CASE("dark stray: glared scene reports the simulated stray level at D") {
    SceneSpec spec;
    spec.width = spec.height = 64;
    spec.background = 0.0;
    spec.dark_patches.push_back({6, 6, 12, 12});
    spec.sources.push_back({44.0, 40.0, 3.0, 8.0});
    RadianceMap scene = make_scene(spec);
    RadianceMap glared = simulate_glare(scene, rasterize_kernel(kGlare, 64, 64));

    SaturationPartition part = detect_saturation(glared, 0.98);
    DarkPixelSet dark = estimate_dark_stray(glared, part, 2.0, 7, 0.05);

    // oracle: the known forward simulation itself
    std::vector<double> rel;
    for (std::size_t i = 0; i < dark.indices.size(); ++i) {
        const int x = dark.indices[i] % 64, y = dark.indices[i] / 64;
        const double truth = glared.at(x, y);
        if (truth <= 0.0) continue;
        rel.push_back(std::abs(dark.stray_estimate[i] - truth) / truth);
    }
    REQUIRE(!rel.empty());
    std::sort(rel.begin(), rel.end());
    CHECK(rel[rel.size() / 2] <= 0.10);  // median relative error
}

TEST_CASE("recovery: clipped-region flux is reconstructed within 15 percent") {
    Fixture f = clipped_scene();
    DeglareOptions opts;
    opts.ceiling = 1.0;
    SaturationPartition part = detect_saturation(f.degraded, opts.sat_threshold_frac, 1.0);
    DarkPixelSet dark = estimate_dark_stray(f.degraded, part, 2.0, 7, 0.05);

    DeglareReport rep;
    RadianceMap xs = estimate_saturated_radiance(f.degraded, part, dark, f.kernel, 1e-4, opts, &rep);

    double flux = 0.0, true_flux = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (part.mask[i]) {
            flux += xs.data()[i];
            true_flux += f.pristine.data()[i];
        }
    CHECK(std::abs(flux - true_flux) <= 0.15 * true_flux);
    // the estimate is supported on S only
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!part.mask[i]) CHECK(xs.data()[i] == 0.0);
}

TEST_CASE("recovery: isolated source on black with zero penalty is least squares") {
    SceneSpec spec;
    spec.width = spec.height = 64;
    spec.background = 0.0;
    spec.sources.push_back({32.0, 32.0, 3.0, 4.0});
    RadianceMap scene = make_scene(spec);
    auto [degraded, rec] = degrade(scene, kGlare, 1.0);
    GsfKernel kernel = rasterize_kernel(kGlare, 64, 64);

    DeglareOptions opts;
    opts.ceiling = 1.0;
    SaturationPartition part = detect_saturation(degraded, opts.sat_threshold_frac, 1.0);
    DarkPixelSet dark = estimate_dark_stray(degraded, part, 2.0, 7, 0.05);
    RadianceMap xs = estimate_saturated_radiance(degraded, part, dark, kernel, 0.0, opts);

    double flux = 0.0, true_flux = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (part.mask[i]) {
            flux += xs.data()[i];
            true_flux += scene.data()[i];
        }
    CHECK(std::abs(flux - true_flux) <= 0.05 * true_flux);
}

TEST_CASE("recovery: a delta kernel pins the estimate at the lower bound") {
    RadianceMap img(32, 32, 1, 0.2);
    img.at(16, 16) = 1.0;  // reads as clipped at ceiling 1
    GsfKernel kernel = rasterize_kernel({0.9, 0.0, 1.0, 1.0}, 32, 32);

    DeglareOptions opts;
    opts.ceiling = 1.0;
    SaturationPartition part = detect_saturation(img, 1.0, 1.0);
    DarkPixelSet dark = estimate_dark_stray(img, part, 2.0, 7, 0.05);
    DeglareReport rep;
    RadianceMap xs = estimate_saturated_radiance(img, part, dark, kernel, 1e-4, opts, &rep);

    // no off-pixel information: the clipped pixel stays at its observation
    CHECK(xs.at(16, 16) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.lower_bound_active);
}

TEST_CASE("wiener: delta kernel at zero nsr is the identity") {
    RadianceMap img = th::random_map(16, 16, 1, 8, 2.0);
    GsfKernel kernel = rasterize_kernel({0.4, 0.0, 1.0, 1.0}, 16, 16);
    RadianceMap out = wiener_deconvolve(img, kernel, {0.0});
    CHECK(th::rel_rmse(out, img) < 1e-9);
}

TEST_CASE("wiener: inverts the glare simulation on unclipped scenes") {
    // Content kept interior: the forward simulation drops glare spread past
    // the frame, so full-frame backgrounds cannot round trip exactly.
    SceneSpec spec;
    spec.width = spec.height = 64;
    spec.sources.push_back({30.0, 28.0, 4.0, 0.8});
    spec.objects.push_back({{40, 38, 10, 8}, "car", 0.2});
    RadianceMap scene = make_scene(spec);
    GsfKernel kernel = rasterize_kernel(kGlare, 64, 64);
    RadianceMap glared = simulate_glare(scene, kernel);
    RadianceMap back = wiener_deconvolve(glared, kernel, {1e-12});
    CHECK(th::rel_rmse(back, scene) < 1e-3);
}

TEST_CASE("wiener: infinite noise ratio suppresses everything") {
    RadianceMap img = th::random_map(16, 16, 1, 9, 1.0);
    GsfKernel kernel = rasterize_kernel(kGlare, 16, 16);
    RadianceMap out = wiener_deconvolve(img, kernel, {1e12});
    for (double v : out.data()) CHECK(v <= 1e-10);
}

TEST_CASE("deglare: with no saturation it is exactly the Wiener filter") {
    RadianceMap img = th::random_map(32, 32, 1, 10, 0.5);
    GsfKernel kernel = rasterize_kernel(kGlare, 32, 32);
    DeglareOptions opts;
    opts.ceiling = 1.0;  // image max stays below threshold
    auto [out, rep] = deglare(img, kernel, opts);
    CHECK(rep.saturated_count == 0);
    RadianceMap plain = wiener_deconvolve(img, kernel, opts.wiener);
    CHECK(th::max_abs_diff(out, plain) < 1e-12);
}

TEST_CASE("deglare: glare-free input passes through unchanged") {
    RadianceMap img = th::random_map(24, 24, 1, 11, 0.8);
    GsfKernel kernel = rasterize_kernel({0.9, 0.0, 1.0, 1.0}, 24, 24);  // delta
    DeglareOptions opts;
    opts.ceiling = 2.0;  // nothing reaches the ceiling
    opts.wiener.nsr = 1e-12;
    auto [out, rep] = deglare(img, kernel, opts);
    CHECK(th::rel_rmse(out, img) < 1e-6);
}

TEST_CASE("deglare: improves on the input and on plain Wiener over U") {
    Fixture f = clipped_scene();
    DeglareOptions opts;
    opts.ceiling = 1.0;
    auto [restored, rep] = deglare(f.degraded, f.kernel, opts);

    SaturationPartition part = detect_saturation(f.degraded, opts.sat_threshold_frac, 1.0);
    std::vector<bool> u_mask(part.mask.size());
    for (std::size_t i = 0; i < u_mask.size(); ++i) u_mask[i] = !part.mask[i];

    const double err_in = th::log_rmse(f.degraded, f.pristine, u_mask);
    const double err_out = th::log_rmse(restored, f.pristine, u_mask);
    const double err_wiener =
        th::log_rmse(wiener_deconvolve(f.degraded, f.kernel, opts.wiener), f.pristine, u_mask);
    CHECK(err_out < err_in);
    CHECK(err_out <= err_wiener);

    // constraint residuals within the reported tolerance
    CHECK(rep.unsat_residual_min >= -rep.tolerance);
    CHECK(rep.stray_min >= 0.0);
    CHECK(rep.deconv_min >= -rep.tolerance);
    CHECK(rep.saturated_count > 0);
    CHECK(rep.dark_count > 0);
}

TEST_CASE("deglare: scale equivariance") {
    Fixture f = clipped_scene(48);
    DeglareOptions opts;
    opts.ceiling = 1.0;
    auto [out1, rep1] = deglare(f.degraded, f.kernel, opts);

    const double c = 37.5;
    RadianceMap scaled = f.degraded;
    for (double& v : scaled.data()) v *= c;
    DeglareOptions opts_c = opts;
    opts_c.ceiling = c;
    opts_c.lambda1 = -1.0;  // auto-lambda scales with the image
    auto [out2, rep2] = deglare(scaled, f.kernel, opts_c);

    // Equivariance holds to solver accuracy, not machine precision: the
    // backtracking step search sees different accepted steps at different
    // scales, so the inner iterates stop at slightly different points.
    for (std::size_t i = 0; i < out1.size(); ++i) {
        const double a = c * out1.data()[i], b = out2.data()[i];
        CHECK(std::abs(a - b) <= 1e-4 * c * (1.0 + std::abs(out1.data()[i])));
    }
}

TEST_CASE("deglare: three-channel images share the partition and solve per channel") {
    SceneSpec spec;
    spec.width = spec.height = 48;
    spec.channels = 3;
    spec.background = 0.05;
    spec.dark_patches.push_back({4, 4, 8, 8});
    spec.sources.push_back({30.0, 24.0, 3.0, 4.0});
    RadianceMap scene = make_scene(spec);
    auto [degraded, rec] = degrade(scene, kGlare, 1.0);
    GsfKernel kernel = rasterize_kernel(kGlare, 48, 48);
    DeglareOptions opts;
    opts.ceiling = 1.0;
    auto [restored, rep] = deglare(degraded, kernel, opts);
    CHECK(restored.channels() == 3);
    CHECK(rep.saturated_count > 0);
    CHECK(rep.unsat_residual_min >= -rep.tolerance);
    CHECK(rep.stray_min >= 0.0);
    CHECK(rep.deconv_min >= -rep.tolerance);
}
