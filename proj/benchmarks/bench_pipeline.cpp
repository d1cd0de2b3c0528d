#include <benchmark/benchmark.h>

#include <filesystem>

#include "bvguide/color.hpp"
#include "bvguide/filters.hpp"
#include "bvguide/guidemap.hpp"
#include "bvguide/imgio.hpp"
#include "bvguide/morphology.hpp"
#include "bvguide/synth.hpp"
#include "bvguide/threshold.hpp"

using namespace bvguide;

namespace {

const RgbImage& patch512() {
    static const RgbImage img = [] {
        PhantomSpec spec;
        spec.seed = 4242;
        return generate_phantom(spec).first;
    }();
    return img;
}

void BM_GaussianBlur512(benchmark::State& state) {
    const RgbImage& img = patch512();
    for (auto _ : state)
        benchmark::DoNotOptimize(gaussian_blur_rgb(img, {3, 0.0}));
}
BENCHMARK(BM_GaussianBlur512)->Unit(benchmark::kMillisecond);

void BM_RgbToLab512(benchmark::State& state) {
    const RgbImage& img = patch512();
    for (auto _ : state)
        benchmark::DoNotOptimize(rgb_to_lab(img));
}
BENCHMARK(BM_RgbToLab512)->Unit(benchmark::kMillisecond);

void BM_RgbToHsv512(benchmark::State& state) {
    const RgbImage& img = patch512();
    for (auto _ : state)
        benchmark::DoNotOptimize(rgb_to_hsv(img));
}
BENCHMARK(BM_RgbToHsv512)->Unit(benchmark::kMillisecond);

void BM_Otsu512(benchmark::State& state) {
    const PlaneF32 a = extract_channel(rgb_to_lab(patch512()), Channel::A);
    for (auto _ : state)
        benchmark::DoNotOptimize(otsu_threshold(histogram256(a)));
}
BENCHMARK(BM_Otsu512)->Unit(benchmark::kMicrosecond);

void BM_OpenClose512(benchmark::State& state) {
    const PlaneF32 a = extract_channel(rgb_to_lab(patch512()), Channel::A);
    const StructuringElement se{3};
    for (auto _ : state)
        benchmark::DoNotOptimize(close(open(a, se), se));
}
BENCHMARK(BM_OpenClose512)->Unit(benchmark::kMillisecond);

void BM_GuideMap512(benchmark::State& state) {
    const RgbImage& img = patch512();
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_guide_map(img, {}));
}
BENCHMARK(BM_GuideMap512)->Unit(benchmark::kMillisecond);

void BM_GmapWrite512(benchmark::State& state) {
    const PlaneF32 guide = generate_guide_map(patch512(), {}).guide;
    const auto path = std::filesystem::temp_directory_path() / "bvguide_bench.gmap";
    for (auto _ : state)
        write_gmap(guide, path);
    std::filesystem::remove(path);
}
BENCHMARK(BM_GmapWrite512)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
