#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

#include <png.h>
#include <tiffio.h>

#include "bvguide/imgio.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace bvguide;
using testutil::TempDir;

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    REQUIRE(out);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

// Minimal palette PNG, written directly with libpng.
void write_palette_png(const std::filesystem::path& p) {
    std::FILE* fp = std::fopen(p.string().c_str(), "wb");
    REQUIRE(fp);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, 2, 1, 8, PNG_COLOR_TYPE_PALETTE, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_color palette[2] = {{255, 0, 0}, {0, 255, 0}};
    png_set_PLTE(png, info, palette, 2);
    png_write_info(png, info);
    std::uint8_t row[2] = {0, 1};
    png_bytep rows[1] = {row};
    png_write_image(png, rows);
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

// Raw RGBA decode so tests can inspect the alpha plane the library drops.
std::vector<std::uint8_t> read_rgba_raw(const std::filesystem::path& p, int& w, int& h) {
    std::FILE* fp = std::fopen(p.string().c_str(), "rb");
    REQUIRE(fp);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_read_info(png, info);
    REQUIRE(png_get_color_type(png, info) == PNG_COLOR_TYPE_RGB_ALPHA);
    REQUIRE(png_get_bit_depth(png, info) == 8);
    w = static_cast<int>(png_get_image_width(png, info));
    h = static_cast<int>(png_get_image_height(png, info));
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h * 4);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 4;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return pixels;
}

void write_tiff_rgb(const std::filesystem::path& p, int w, int h,
                    const std::vector<std::uint8_t>& rgb, int bits = 8) {
    TIFF* tif = TIFFOpen(p.string().c_str(), "w");
    REQUIRE(tif);
    TIFFSetField(tif, TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(w));
    TIFFSetField(tif, TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(h));
    TIFFSetField(tif, TIFFTAG_SAMPLESPERPIXEL, 3);
    TIFFSetField(tif, TIFFTAG_BITSPERSAMPLE, bits);
    TIFFSetField(tif, TIFFTAG_ORIENTATION, ORIENTATION_TOPLEFT);
    TIFFSetField(tif, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_RGB);
    TIFFSetField(tif, TIFFTAG_ROWSPERSTRIP, 1);
    const int bytes_per_px = 3 * bits / 8;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * bytes_per_px);
    for (int y = 0; y < h; ++y) {
        std::memcpy(row.data(), rgb.data() + static_cast<std::size_t>(y) * w * bytes_per_px,
                    row.size());
        REQUIRE(TIFFWriteScanline(tif, row.data(), y, 0) == 1);
    }
    TIFFClose(tif);
}

} // namespace

TEST_CASE("png: rgb8 encodes and decodes known bytes") {
    TempDir dir;
    const RgbImage img(2, 1, {255, 0, 0, 0, 0, 0});
    const auto path = dir / "two.png";
    save_png_rgb8(img, path);
    const RgbImage back = load_rgb8(path);
    CHECK(back == img);

    // decoding is deterministic
    CHECK(load_rgb8(path) == back);
}

TEST_CASE("png: rgba alpha channel is dropped on load") {
    TempDir dir;
    const RgbImage rgb(1, 1, {10, 20, 30});
    const PlaneF32 guide(1, 1, std::vector<float>{128.0f / 255.0f});
    const auto path = dir / "rgba.png";
    save_rgba_guided(rgb, guide, path);
    const RgbImage back = load_rgb8(path);
    CHECK(back.data == std::vector<std::uint8_t>{10, 20, 30});
}

TEST_CASE("png: grayscale is replicated to three channels") {
    TempDir dir;
    const auto path = dir / "mask.png";
    BinaryMask mask(2, 1);
    mask.set(0, 0, true);
    save_mask_png(mask, path);
    const RgbImage img = load_rgb8(path);
    CHECK(img.data == std::vector<std::uint8_t>{255, 255, 255, 0, 0, 0});
}

TEST_CASE("png: 16-bit input is rejected for RGB decode") {
    TempDir dir;
    const auto path = dir / "deep.png";
    save_png_gray16(PlaneF32(2, 2, 0.5f), path);
    CHECK_THROWS_AS(load_rgb8(path), UnsupportedFormat);
}

TEST_CASE("png: palette input is rejected") {
    TempDir dir;
    const auto path = dir / "palette.png";
    write_palette_png(path);
    CHECK_THROWS_AS(load_rgb8(path), UnsupportedFormat);
}

TEST_CASE("load: missing and corrupt files") {
    TempDir dir;
    CHECK_THROWS_AS(load_rgb8(dir / "absent.png"), FileNotFound);

    // valid signature, truncated stream
    const auto good = dir / "ok.png";
    save_png_rgb8(RgbImage(8, 8), good);
    auto bytes = slurp(good);
    bytes.resize(bytes.size() / 2);
    const auto bad = dir / "trunc.png";
    spit(bad, bytes);
    CHECK_THROWS_AS(load_rgb8(bad), CorruptImage);

    const auto garbage = dir / "noise.bin";
    spit(garbage, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK_THROWS_AS(load_rgb8(garbage), UnsupportedFormat);
}

TEST_CASE("gray16: quantization endpoints and the half case") {
    TempDir dir;
    const PlaneF32 plane(3, 1, std::vector<float>{0.0f, 1.0f, 0.5f});
    const auto path = dir / "g16.png";
    save_png_gray16(plane, path);

    const PlaneF32 back = load_plane(path);
    CHECK(back.data[0] == 0.0f);
    CHECK(back.data[1] == 1.0f);
    // 0.5 * 65535 = 32767.5 rounds away from zero to 32768
    CHECK(back.data[2] == doctest::Approx(32768.0 / 65535.0).epsilon(1e-9));

    CHECK_THROWS_AS(save_png_gray16(PlaneF32(1, 1, 1.5f), dir / "bad.png"), RangeError);
    CHECK_THROWS_AS(save_png_gray16(PlaneF32(1, 1, -0.1f), dir / "bad.png"), RangeError);
}

TEST_CASE("gray16: save-then-load is exact on the 65536-level grid") {
    TempDir dir;
    std::mt19937 rng(601);
    std::uniform_int_distribution<int> level(0, 65535);
    PlaneF32 plane(16, 16);
    for (float& v : plane.data)
        v = static_cast<float>(level(rng) / 65535.0);
    const auto path = dir / "grid.png";
    save_png_gray16(plane, path);
    CHECK(load_plane(path) == plane);
}

TEST_CASE("tiff: baseline rgb decodes, other flavors are rejected") {
    TempDir dir;
    const auto path = dir / "base.tif";
    const std::vector<std::uint8_t> px = {1, 2, 3, 200, 100, 50};
    write_tiff_rgb(path, 2, 1, px);
    const RgbImage img = load_rgb8(path);
    CHECK(img.width == 2);
    CHECK(img.data == px);

    const auto deep = dir / "deep.tif";
    std::vector<std::uint8_t> px16(2 * 1 * 6, 0);
    write_tiff_rgb(deep, 2, 1, px16, 16);
    CHECK_THROWS_AS(load_rgb8(deep), UnsupportedFormat);

    const auto broken = dir / "broken.tif";
    spit(broken, {'I', 'I', 42, 0, 9, 9, 9});
    CHECK_THROWS_AS(load_rgb8(broken), CorruptImage);
}

TEST_CASE("gmap: pinned 1x1 encoding") {
    TempDir dir;
    const auto path = dir / "one.gmap";
    write_gmap(PlaneF32(1, 1, 0.5f), path);

    const auto bytes = slurp(path);
    REQUIRE(bytes.size() == 20);
    CHECK(std::memcmp(bytes.data(), "GMAP", 4) == 0);
    CHECK(bytes[4] == 1); // version lo
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 0); // reserved
    CHECK(bytes[7] == 0);
    CHECK(bytes[8] == 1); // width
    CHECK(bytes[12] == 1); // height
    // IEEE-754 LE 0.5 = 00 00 00 3F
    CHECK(bytes[16] == 0x00);
    CHECK(bytes[17] == 0x00);
    CHECK(bytes[18] == 0x00);
    CHECK(bytes[19] == 0x3F);
}

TEST_CASE("gmap: 512x512 file size is exactly 16 + 4*512*512") {
    TempDir dir;
    const auto path = dir / "big.gmap";
    write_gmap(PlaneF32(512, 512, 0.25f), path);
    CHECK(std::filesystem::file_size(path) == 1048592);
}

TEST_CASE("gmap: write/read round-trips bit-exactly, including subnormals") {
    TempDir dir;
    std::mt19937 rng(602);
    std::uniform_real_distribution<float> unit(-1.0f, 1.0f);
    std::uniform_int_distribution<int> dim(1, 24);
    std::uniform_int_distribution<int> pick(0, 9);

    const float specials[] = {0.0f, -0.0f, 1e-42f, // subnormal
                              std::numeric_limits<float>::denorm_min(),
                              std::numeric_limits<float>::min(),
                              std::numeric_limits<float>::max(),
                              -std::numeric_limits<float>::max(), 1.0f, -1.0f, 65535.5f};

    for (int trial = 0; trial < 50; ++trial) {
        PlaneF32 plane(dim(rng), dim(rng));
        for (float& v : plane.data)
            v = pick(rng) < 3 ? specials[pick(rng)] : unit(rng);
        const auto path = dir / ("p" + std::to_string(trial) + ".gmap");
        write_gmap(plane, path);
        const PlaneF32 back = read_gmap(path);
        REQUIRE(back.width == plane.width);
        REQUIRE(back.height == plane.height);
        CHECK(std::memcmp(back.data.data(), plane.data.data(),
                          plane.size() * sizeof(float)) == 0);
    }
}

TEST_CASE("gmap: malformed headers") {
    TempDir dir;

    const auto xmap = dir / "x.gmap";
    spit(xmap, {'X', 'M', 'A', 'P', 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0});
    CHECK_THROWS_AS(read_gmap(xmap), BadMagic);

    const auto v2 = dir / "v2.gmap";
    spit(v2, {'G', 'M', 'A', 'P', 2, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(read_gmap(v2), BadVersion);

    // header claims 10x10 but only 3 floats follow
    std::vector<std::uint8_t> short_file = {'G', 'M', 'A', 'P', 1, 0, 0, 0,
                                            10, 0, 0, 0, 10, 0, 0, 0};
    short_file.resize(16 + 12, 0);
    const auto trunc = dir / "short.gmap";
    spit(trunc, short_file);
    CHECK_THROWS_AS(read_gmap(trunc), TruncatedFile);

    const auto stub = dir / "stub.gmap";
    spit(stub, {'G', 'M', 'A', 'P', 1, 0});
    CHECK_THROWS_AS(read_gmap(stub), TruncatedFile);
}

TEST_CASE("rgba export: endpoints and validation") {
    TempDir dir;
    const RgbImage rgb(2, 2, std::vector<std::uint8_t>(12, 9));

    save_rgba_guided(rgb, PlaneF32(2, 2, 1.0f), dir / "full.png");
    save_rgba_guided(rgb, PlaneF32(2, 2, 0.0f), dir / "none.png");

    int w = 0, h = 0;
    const auto full = read_rgba_raw(dir / "full.png", w, h);
    for (int i = 0; i < 4; ++i)
        CHECK(full[i * 4 + 3] == 255);
    const auto none = read_rgba_raw(dir / "none.png", w, h);
    for (int i = 0; i < 4; ++i)
        CHECK(none[i * 4 + 3] == 0);

    CHECK(load_rgb8(dir / "full.png") == rgb);
    CHECK(load_rgb8(dir / "none.png") == rgb);

    CHECK_THROWS_AS(save_rgba_guided(rgb, PlaneF32(2, 3, 0.5f), dir / "bad.png"),
                    DimensionMismatch);
    CHECK_THROWS_AS(save_rgba_guided(rgb, PlaneF32(2, 2, 1.5f), dir / "bad.png"), RangeError);
}

TEST_CASE("load_mask: any nonzero pixel is true") {
    TempDir dir;
    const auto path = dir / "m.png";
    const RgbImage img(3, 1, {0, 0, 0, 1, 0, 0, 255, 255, 255});
    save_png_rgb8(img, path);
    const BinaryMask mask = load_mask(path);
    CHECK_FALSE(mask.at(0, 0));
    CHECK(mask.at(1, 0));
    CHECK(mask.at(2, 0));
}
