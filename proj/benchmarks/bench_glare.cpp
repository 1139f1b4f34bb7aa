#include <benchmark/benchmark.h>

#include "glare/deglare.hpp"
#include "glare/gsf.hpp"
#include "glare/metrics.hpp"
#include "glare/synth.hpp"

namespace {

const glare::GsfParams kParams{0.9, 0.004, 0.3, 0.9};

glare::RadianceMap random_map(int n, std::uint64_t seed) {
    glare::Rng rng(seed);
    glare::RadianceMap img(n, n, 1);
    for (double& v : img.data()) v = rng.uniform();
    return img;
}

void BM_RasterizeKernel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        glare::GsfKernel kernel = glare::rasterize_kernel(kParams, n, n);
        benchmark::DoNotOptimize(kernel.spectrum().data());
    }
}
BENCHMARK(BM_RasterizeKernel)->Arg(64)->Arg(128)->Arg(256);

void BM_SimulateGlare(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const glare::GsfKernel kernel = glare::rasterize_kernel(kParams, n, n);
    const glare::RadianceMap img = random_map(n, 1);
    for (auto _ : state) {
        glare::RadianceMap out = glare::simulate_glare(img, kernel);
        benchmark::DoNotOptimize(out.data().data());
    }
}
BENCHMARK(BM_SimulateGlare)->Arg(64)->Arg(128)->Arg(256);

void BM_WienerDeconvolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const glare::GsfKernel kernel = glare::rasterize_kernel(kParams, n, n);
    const glare::RadianceMap img = random_map(n, 2);
    for (auto _ : state) {
        glare::RadianceMap out = glare::wiener_deconvolve(img, kernel, {1e-6});
        benchmark::DoNotOptimize(out.data().data());
    }
}
BENCHMARK(BM_WienerDeconvolve)->Arg(64)->Arg(128)->Arg(256);

void BM_Deglare(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    glare::SceneSpec spec;
    spec.width = spec.height = n;
    spec.background = 0.05;
    spec.dark_patches.push_back({4, 4, 10, 10});
    spec.sources.push_back({n * 0.6, n * 0.45, 3.0, 5.0});
    auto [degraded, rec] = glare::degrade(glare::make_scene(spec), kParams, 1.0);
    const glare::GsfKernel kernel = glare::rasterize_kernel(kParams, n, n);
    glare::DeglareOptions opts;
    opts.ceiling = 1.0;
    for (auto _ : state) {
        auto [out, rep] = glare::deglare(degraded, kernel, opts);
        benchmark::DoNotOptimize(out.data().data());
    }
}
BENCHMARK(BM_Deglare)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Miou(benchmark::State& state) {
    glare::DetectionSet a, b;
    glare::Rng rng(3);
    for (int i = 0; i < 16; ++i) {
        const double x = 500.0 * rng.uniform(), y = 500.0 * rng.uniform();
        glare::BoundingBox box;
        box.x1 = x;
        box.y1 = y;
        box.x2 = x + 10.0 + 40.0 * rng.uniform();
        box.y2 = y + 10.0 + 40.0 * rng.uniform();
        (i % 2 == 0 ? a : b).boxes.push_back(box);
    }
    for (auto _ : state) benchmark::DoNotOptimize(glare::miou(a, b));
}
BENCHMARK(BM_Miou);

}  // namespace

BENCHMARK_MAIN();
