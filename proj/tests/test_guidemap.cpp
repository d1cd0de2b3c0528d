#include <doctest.h>

#include <random>

#include "bvguide/guidemap.hpp"
#include "bvguide/imgio.hpp"
#include "bvguide/metrics.hpp"
#include "bvguide/morphology.hpp"
#include "bvguide/synth.hpp"
#include "bvguide/threshold.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace bvguide;

TEST_CASE("min_max_normalize: worked examples") {
    const PlaneF32 plane(3, 1, std::vector<float>{2.0f, 4.0f, 6.0f});
    const PlaneF32 out = min_max_normalize(plane);
    CHECK(out.data == std::vector<float>{0.0f, 0.5f, 1.0f});

    const PlaneF32 flat(4, 4, 7.7f);
    for (const float v : min_max_normalize(flat).data)
        CHECK(v == 0.0f);
}

TEST_CASE("min_max_normalize: idempotent on non-constant planes") {
    std::mt19937 rng(701);
    for (int trial = 0; trial < 20; ++trial) {
        const PlaneF32 plane = oracle::random_plane(rng, 9, 7, -3.0f, 12.0f);
        const PlaneF32 once = min_max_normalize(plane);
        CHECK(min_max_normalize(once) == once);
        float lo = 1e9f, hi = -1e9f;
        for (const float v : once.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo == 0.0f);
        CHECK(hi == 1.0f);
    }
}

TEST_CASE("multiply_planes: identities and mismatch") {
    std::mt19937 rng(702);
    const PlaneF32 a = oracle::random_plane(rng, 5, 4, 0.0f, 9.0f);
    CHECK(multiply_planes(a, PlaneF32(5, 4, 1.0f)) == a);
    for (const float v : multiply_planes(a, PlaneF32(5, 4, 0.0f)).data)
        CHECK(v == 0.0f);

    const PlaneF32 x(2, 1, std::vector<float>{1.0f, 2.0f});
    const PlaneF32 y(2, 1, std::vector<float>{3.0f, 4.0f});
    CHECK(multiply_planes(x, y).data == std::vector<float>{3.0f, 8.0f});

    CHECK_THROWS_AS(multiply_planes(a, PlaneF32(4, 5)), DimensionMismatch);
}

TEST_CASE("pipeline: pure gray input takes the degenerate path") {
    const RgbImage gray(32, 32, std::vector<std::uint8_t>(32 * 32 * 3, 153));
    PipelineConfig cfg;
    cfg.emit_stages = true;
    const GuideResult result = generate_guide_map(gray, cfg);
    CHECK(result.threshold == -1);
    for (const float v : result.guide.data)
        CHECK(v == 0.0f);
    REQUIRE(result.stages.has_value());
    CHECK(result.stages->threshold == -1);
    CHECK(result.stages->a_channel.width == 32);
}

TEST_CASE("pipeline: phantom guide is brighter inside the vessel mask") {
    PhantomSpec spec;
    spec.width = 160;
    spec.height = 160;
    spec.n_blobs = 4;
    spec.seed = 7;
    const auto [img, mask] = generate_phantom(spec);

    const GuideResult result = generate_guide_map(img, {});
    double inside = 0, outside = 0;
    std::size_t n_in = 0, n_out = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask.data[i]) {
            inside += result.guide.data[i];
            ++n_in;
        } else {
            outside += result.guide.data[i];
            ++n_out;
        }
    }
    REQUIRE(n_in > 0);
    REQUIRE(n_out > 0);
    CHECK(inside / n_in > outside / n_out);
}

TEST_CASE("pipeline: non-degenerate guide attains 0 and 1 exactly") {
    std::mt19937 rng(703);
    for (int trial = 0; trial < 5; ++trial) {
        const RgbImage img = oracle::random_rgb(rng, 24, 24);
        const GuideResult result = generate_guide_map(img, {});
        if (result.threshold < 0)
            continue;
        float lo = 1e9f, hi = -1e9f;
        for (const float v : result.guide.data) {
            CHECK(v >= 0.0f);
            CHECK(v <= 1.0f);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo == 0.0f);
        CHECK(hi == 1.0f);
    }
}

TEST_CASE("pipeline: deterministic for identical input and config") {
    std::mt19937 rng(704);
    const RgbImage img = oracle::random_rgb(rng, 40, 40);
    const GuideResult a = generate_guide_map(img, {});
    const GuideResult b = generate_guide_map(img, {});
    CHECK(a.guide == b.guide);
    CHECK(a.threshold == b.threshold);
}

TEST_CASE("pipeline: scale convention does not change the guide") {
    std::mt19937 rng(705);
    PipelineConfig pinned;   // L/255, V
    PipelineConfig rescaled; // L, 255*V
    rescaled.lum_scale = 1.0f;
    rescaled.value_scale = 255.0f;

    for (int trial = 0; trial < 10; ++trial) {
        const RgbImage img = oracle::random_rgb(rng, 24, 24);
        const GuideResult a = generate_guide_map(img, pinned);
        const GuideResult b = generate_guide_map(img, rescaled);
        REQUIRE(a.threshold == b.threshold);
        for (std::size_t i = 0; i < a.guide.size(); ++i)
            CHECK(std::abs(a.guide.data[i] - b.guide.data[i]) < 1e-6f);
    }
}

TEST_CASE("pipeline: stage record is internally consistent") {
    PhantomSpec spec;
    spec.width = 96;
    spec.height = 96;
    spec.n_blobs = 3;
    spec.seed = 3;
    const auto [img, mask] = generate_phantom(spec);

    PipelineConfig cfg;
    cfg.emit_stages = true;
    const GuideResult result = generate_guide_map(img, cfg);
    REQUIRE(result.stages.has_value());
    const PipelineStages& st = *result.stages;

    CHECK(st.threshold == result.threshold);
    CHECK(st.guide == result.guide);
    CHECK(st.heatmap == subtract_clamp(st.a_channel, static_cast<float>(st.threshold)));
    // heatmap is positive exactly where the A channel exceeds the threshold
    for (std::size_t i = 0; i < st.heatmap.size(); ++i) {
        const bool above = st.a_channel.data[i] > static_cast<float>(st.threshold);
        CHECK((st.heatmap.data[i] > 0.0f) == above);
    }
    CHECK(st.morphed == close(open(st.lum_scaled, cfg.morph), cfg.morph));
    CHECK(st.guide == min_max_normalize(st.value_scaled));
}

TEST_CASE("pipeline: raising a pixel's evidence never lowers its response") {
    // Composition of the post-threshold stages on explicit planes: heatmap,
    // luminosity product, morphology, brightness product.
    std::mt19937 rng(706);
    const StructuringElement se{3};
    for (int trial = 0; trial < 20; ++trial) {
        const PlaneF32 a = oracle::random_plane(rng, 10, 10, 100.0f, 200.0f);
        const PlaneF32 lum = oracle::random_plane(rng, 10, 10, 0.0f, 1.0f);
        const PlaneF32 val = oracle::random_plane(rng, 10, 10, 0.0f, 1.0f);
        const float t = 150.0f;

        auto response = [&](const PlaneF32& plane) {
            const PlaneF32 heat = subtract_clamp(plane, t);
            const PlaneF32 scaled = multiply_planes(heat, lum);
            const PlaneF32 morphed = close(open(scaled, se), se);
            return multiply_planes(morphed, val);
        };

        PlaneF32 bumped = a;
        std::uniform_int_distribution<int> pick(0, 99);
        bumped.data[pick(rng)] += 30.0f;

        const PlaneF32 base = response(a);
        const PlaneF32 raised = response(bumped);
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(raised.data[i] >= base.data[i]);
    }
}

TEST_CASE("pipeline: threshold override bypasses Otsu") {
    const RgbImage gray(16, 16, std::vector<std::uint8_t>(16 * 16 * 3, 90));
    PipelineConfig cfg;
    cfg.threshold_override = 100;
    const GuideResult result = generate_guide_map(gray, cfg);
    CHECK(result.threshold == 100); // no degenerate sentinel when overridden
    for (const float v : result.guide.data)
        CHECK(v == 0.0f); // constant A below override -> constant zero stays zero

    PipelineConfig bad;
    bad.threshold_override = 300;
    CHECK_THROWS_AS(generate_guide_map(gray, bad), InvalidArgument);
}

TEST_CASE("assemble_guided: pairs original pixels, validates inputs") {
    std::mt19937 rng(707);
    const RgbImage img = oracle::random_rgb(rng, 12, 8);
    const PlaneF32 guide(12, 8, 0.5f);
    const GuidedPatch patch = assemble_guided(img, guide);
    CHECK(patch.rgb == img);
    CHECK(patch.guide == guide);

    CHECK_THROWS_AS(assemble_guided(img, PlaneF32(8, 12, 0.5f)), DimensionMismatch);
    CHECK_THROWS_AS(assemble_guided(img, PlaneF32(12, 8, 1.5f)), RangeError);
}

TEST_CASE("pipeline: guide persists bit-exactly through GMAP") {
    testutil::TempDir dir;
    PhantomSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.n_blobs = 2;
    spec.seed = 11;
    const auto [img, mask] = generate_phantom(spec);
    const GuideResult result = generate_guide_map(img, {});
    const auto path = dir / "guide.gmap";
    write_gmap(result.guide, path);
    CHECK(read_gmap(path) == result.guide);
}
