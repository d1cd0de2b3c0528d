#include "bvguide/imgio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <png.h>
#include <tiffio.h>

namespace bvguide {

namespace {

namespace fs = std::filesystem;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_read(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec))
        throw FileNotFound("no such file: " + path.string());
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f)
        throw IoError("cannot open " + path.string());
    return f;
}

FilePtr open_for_write(const fs::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f)
        throw IoError("cannot create " + path.string());
    return f;
}

// --- PNG -------------------------------------------------------------------

// Quiet libpng handlers: errors still longjmp, nothing is printed.
void png_error_quiet(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_warning_quiet(png_structp, png_const_charp) {}

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() {
        if (png)
            png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

/// Decoded PNG prior to channel normalization: 8- or 16-bit samples,
/// gray / gray+alpha / rgb / rgba.
struct RawPng {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    int channels = 0; // 1, 2, 3 or 4
    bool has_alpha = false;
    std::vector<std::uint8_t> rows; // packed rows, 16-bit samples big-endian
};

RawPng read_png_raw(const fs::path& path) {
    FilePtr fp = open_for_read(path);

    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_quiet, png_warning_quiet);
    if (!g.png)
        throw IoError("libpng: cannot allocate read struct");
    g.info = png_create_info_struct(g.png);
    if (!g.info)
        throw IoError("libpng: cannot allocate info struct");

    RawPng raw;
    std::vector<png_bytep> row_ptrs;

    if (setjmp(png_jmpbuf(g.png)))
        throw CorruptImage("malformed PNG: " + path.string());

    png_init_io(g.png, fp.get());
    png_read_info(g.png, g.info);

    const png_byte color_type = png_get_color_type(g.png, g.info);
    const png_byte bit_depth = png_get_bit_depth(g.png, g.info);
    const png_uint_32 w = png_get_image_width(g.png, g.info);
    const png_uint_32 h = png_get_image_height(g.png, g.info);

    if (color_type == PNG_COLOR_TYPE_PALETTE)
        throw UnsupportedFormat("palette PNG not supported: " + path.string());
    if (bit_depth != 8 && bit_depth != 16)
        throw UnsupportedFormat("PNG bit depth " + std::to_string(bit_depth) +
                                " not supported: " + path.string());

    png_set_interlace_handling(g.png);
    png_read_update_info(g.png, g.info);

    raw.width = static_cast<int>(w);
    raw.height = static_cast<int>(h);
    raw.bit_depth = bit_depth;
    raw.channels = png_get_channels(g.png, g.info);
    raw.has_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0;

    const std::size_t row_bytes = png_get_rowbytes(g.png, g.info);
    raw.rows.resize(row_bytes * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        row_ptrs[y] = raw.rows.data() + static_cast<std::size_t>(y) * row_bytes;

    png_read_image(g.png, row_ptrs.data());
    png_read_end(g.png, nullptr);
    return raw;
}

void write_png(const fs::path& path, int width, int height, int bit_depth,
               int color_type, const std::vector<std::uint8_t>& rows) {
    FilePtr fp = open_for_write(path);

    PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_quiet, png_warning_quiet);
    if (!g.png)
        throw IoError("libpng: cannot allocate write struct");
    g.info = png_create_info_struct(g.png);
    if (!g.info)
        throw IoError("libpng: cannot allocate info struct");

    std::vector<png_bytep> row_ptrs(height);
    const std::size_t row_bytes = rows.size() / height;
    for (int y = 0; y < height; ++y)
        row_ptrs[y] = const_cast<png_bytep>(rows.data()) + static_cast<std::size_t>(y) * row_bytes;

    if (setjmp(png_jmpbuf(g.png)))
        throw IoError("PNG write failed: " + path.string());

    png_init_io(g.png, fp.get());
    png_set_IHDR(g.png, g.info, width, height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);
    png_write_rows(g.png, row_ptrs.data(), height);
    png_write_end(g.png, g.info);
}

// --- TIFF ------------------------------------------------------------------

struct TiffCloser {
    void operator()(TIFF* t) const {
        if (t)
            TIFFClose(t);
    }
};

RgbImage load_tiff(const fs::path& path) {
    // libtiff reports through global handlers; keep parsing noise off stderr.
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);

    std::unique_ptr<TIFF, TiffCloser> tif(TIFFOpen(path.string().c_str(), "r"));
    if (!tif)
        throw CorruptImage("malformed TIFF: " + path.string());

    std::uint16_t bps = 0, spp = 0, photometric = 0;
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bps);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
    if (!TIFFGetField(tif.get(), TIFFTAG_PHOTOMETRIC, &photometric))
        throw CorruptImage("TIFF without photometric tag: " + path.string());

    if (photometric == PHOTOMETRIC_PALETTE)
        throw UnsupportedFormat("palette TIFF not supported: " + path.string());
    if (photometric == PHOTOMETRIC_SEPARATED)
        throw UnsupportedFormat("CMYK TIFF not supported: " + path.string());
    if (bps != 8)
        throw UnsupportedFormat("TIFF bit depth " + std::to_string(bps) +
                                " not supported: " + path.string());
    if (photometric != PHOTOMETRIC_RGB || (spp != 3 && spp != 4))
        throw UnsupportedFormat("TIFF support is limited to baseline 8-bit RGB: " +
                                path.string());

    std::uint32_t w = 0, h = 0;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
    if (w == 0 || h == 0)
        throw CorruptImage("TIFF with zero dimension: " + path.string());

    std::vector<std::uint32_t> raster(static_cast<std::size_t>(w) * h);
    if (!TIFFReadRGBAImageOriented(tif.get(), w, h, raster.data(), ORIENTATION_TOPLEFT, 0))
        throw CorruptImage("TIFF decode failed: " + path.string());

    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < raster.size(); ++i) {
        img.data[i * 3 + 0] = static_cast<std::uint8_t>(TIFFGetR(raster[i]));
        img.data[i * 3 + 1] = static_cast<std::uint8_t>(TIFFGetG(raster[i]));
        img.data[i * 3 + 2] = static_cast<std::uint8_t>(TIFFGetB(raster[i]));
    }
    return img;
}

// --- format sniffing --------------------------------------------------------

enum class FileKind { Png, Tiff, Gmap, Unknown };

FileKind sniff(const fs::path& path) {
    FilePtr f = open_for_read(path);
    std::uint8_t magic[8] = {};
    const std::size_t got = std::fread(magic, 1, sizeof magic, f.get());
    if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0)
        return FileKind::Png;
    if (got >= 4 && ((magic[0] == 'I' && magic[1] == 'I' && magic[2] == 42 && magic[3] == 0) ||
                     (magic[0] == 'M' && magic[1] == 'M' && magic[2] == 0 && magic[3] == 42)))
        return FileKind::Tiff;
    if (got >= 4 && std::memcmp(magic, "GMAP", 4) == 0)
        return FileKind::Gmap;
    return FileKind::Unknown;
}

std::uint8_t quantize255(float v) {
    return static_cast<std::uint8_t>(std::round(static_cast<double>(v) * 255.0));
}

// --- little-endian scalar serialization --------------------------------------

void put_u16le(std::uint8_t* out, std::uint16_t v) {
    out[0] = static_cast<std::uint8_t>(v & 0xff);
    out[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32le(std::uint8_t* out, std::uint32_t v) {
    out[0] = static_cast<std::uint8_t>(v & 0xff);
    out[1] = static_cast<std::uint8_t>((v >> 8) & 0xff);
    out[2] = static_cast<std::uint8_t>((v >> 16) & 0xff);
    out[3] = static_cast<std::uint8_t>((v >> 24) & 0xff);
}

std::uint16_t get_u16le(const std::uint8_t* in) {
    return static_cast<std::uint16_t>(in[0] | (in[1] << 8));
}

std::uint32_t get_u32le(const std::uint8_t* in) {
    return static_cast<std::uint32_t>(in[0]) | (static_cast<std::uint32_t>(in[1]) << 8) |
           (static_cast<std::uint32_t>(in[2]) << 16) | (static_cast<std::uint32_t>(in[3]) << 24);
}

constexpr std::size_t kGmapHeaderBytes = 16;

} // namespace

RgbImage load_rgb8(const fs::path& path) {
    const FileKind kind = sniff(path);
    if (kind == FileKind::Tiff)
        return load_tiff(path);
    if (kind != FileKind::Png)
        throw UnsupportedFormat("not a PNG or TIFF image: " + path.string());

    const RawPng raw = read_png_raw(path);
    if (raw.bit_depth != 8)
        throw UnsupportedFormat("PNG bit depth 16 not supported for RGB decode: " +
                                path.string());

    RgbImage img(raw.width, raw.height);
    const std::size_t n = img.pixel_count();
    const int ch = raw.channels;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* px = raw.rows.data() + i * ch;
        if (ch <= 2) { // gray or gray+alpha: replicate, drop alpha
            img.data[i * 3 + 0] = px[0];
            img.data[i * 3 + 1] = px[0];
            img.data[i * 3 + 2] = px[0];
        } else { // rgb or rgba: drop alpha
            img.data[i * 3 + 0] = px[0];
            img.data[i * 3 + 1] = px[1];
            img.data[i * 3 + 2] = px[2];
        }
    }
    return img;
}

void save_png_rgb8(const RgbImage& img, const fs::path& path) {
    write_png(path, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, img.data);
}

void save_png_gray16(const PlaneF32& plane, const fs::path& path) {
    for (const float v : plane.data)
        if (!(v >= 0.0f && v <= 1.0f))
            throw RangeError("save_png_gray16: values must lie in [0,1]");

    // 16-bit PNG samples are big-endian on disk.
    std::vector<std::uint8_t> rows(plane.size() * 2);
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const auto q = static_cast<std::uint16_t>(
            std::round(static_cast<double>(plane.data[i]) * 65535.0));
        rows[i * 2 + 0] = static_cast<std::uint8_t>(q >> 8);
        rows[i * 2 + 1] = static_cast<std::uint8_t>(q & 0xff);
    }
    write_png(path, plane.width, plane.height, 16, PNG_COLOR_TYPE_GRAY, rows);
}

void save_rgba_guided(const RgbImage& rgb, const PlaneF32& guide, const fs::path& path) {
    if (rgb.width != guide.width || rgb.height != guide.height)
        throw DimensionMismatch("save_rgba_guided: image and guide dimensions differ");
    for (const float v : guide.data)
        if (!(v >= 0.0f && v <= 1.0f))
            throw RangeError("save_rgba_guided: guide values must lie in [0,1]");

    std::vector<std::uint8_t> rows(rgb.pixel_count() * 4);
    for (std::size_t i = 0; i < rgb.pixel_count(); ++i) {
        rows[i * 4 + 0] = rgb.data[i * 3 + 0];
        rows[i * 4 + 1] = rgb.data[i * 3 + 1];
        rows[i * 4 + 2] = rgb.data[i * 3 + 2];
        rows[i * 4 + 3] = quantize255(guide.data[i]);
    }
    write_png(path, rgb.width, rgb.height, 8, PNG_COLOR_TYPE_RGB_ALPHA, rows);
}

void save_mask_png(const BinaryMask& mask, const fs::path& path) {
    std::vector<std::uint8_t> rows(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        rows[i] = mask.data[i] ? 255 : 0;
    write_png(path, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_gmap(const PlaneF32& plane, const fs::path& path) {
    std::vector<std::uint8_t> buf(kGmapHeaderBytes + plane.size() * 4);
    std::memcpy(buf.data(), "GMAP", 4);
    put_u16le(buf.data() + 4, 1); // version
    put_u16le(buf.data() + 6, 0); // reserved
    put_u32le(buf.data() + 8, static_cast<std::uint32_t>(plane.width));
    put_u32le(buf.data() + 12, static_cast<std::uint32_t>(plane.height));
    for (std::size_t i = 0; i < plane.size(); ++i)
        put_u32le(buf.data() + kGmapHeaderBytes + i * 4, std::bit_cast<std::uint32_t>(plane.data[i]));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw IoError("short write: " + path.string());
}

PlaneF32 read_gmap(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec))
        throw FileNotFound("no such file: " + path.string());
    const std::uintmax_t file_size = fs::file_size(path, ec);
    if (ec)
        throw IoError("cannot stat " + path.string());

    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());

    std::uint8_t header[kGmapHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kGmapHeaderBytes);
    if (in.gcount() < 4 || std::memcmp(header, "GMAP", 4) != 0)
        throw BadMagic("not a GMAP file: " + path.string());
    if (in.gcount() != kGmapHeaderBytes)
        throw TruncatedFile("GMAP header truncated: " + path.string());

    const std::uint16_t version = get_u16le(header + 4);
    if (version != 1)
        throw BadVersion("GMAP version " + std::to_string(version) + " not supported");

    const std::uint32_t w = get_u32le(header + 8);
    const std::uint32_t h = get_u32le(header + 12);
    if (w == 0 || h == 0)
        throw CorruptImage("GMAP with zero dimension: " + path.string());

    const std::uint64_t payload = static_cast<std::uint64_t>(w) * h * 4;
    if (file_size < kGmapHeaderBytes + payload)
        throw TruncatedFile("GMAP payload truncated: " + path.string());

    std::vector<std::uint8_t> bytes(payload);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(payload));
    if (static_cast<std::uint64_t>(in.gcount()) != payload)
        throw TruncatedFile("GMAP payload truncated: " + path.string());

    PlaneF32 plane(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < plane.size(); ++i)
        plane.data[i] = std::bit_cast<float>(get_u32le(bytes.data() + i * 4));
    return plane;
}

PlaneF32 load_plane(const fs::path& path) {
    const FileKind kind = sniff(path);
    if (kind == FileKind::Gmap)
        return read_gmap(path);

    if (kind == FileKind::Png) {
        const RawPng raw = read_png_raw(path);
        if (raw.bit_depth == 16) {
            if (raw.channels != 1)
                throw UnsupportedFormat("16-bit PNG maps must be grayscale: " + path.string());
            PlaneF32 plane(raw.width, raw.height);
            for (std::size_t i = 0; i < plane.size(); ++i) {
                const std::uint16_t s = static_cast<std::uint16_t>(
                    (raw.rows[i * 2] << 8) | raw.rows[i * 2 + 1]);
                plane.data[i] = static_cast<float>(s / 65535.0);
            }
            return plane;
        }
    }

    // 8-bit PNG (any layout) or TIFF: collapse to max(r,g,b)/255.
    const RgbImage img = load_rgb8(path);
    PlaneF32 plane(img.width, img.height);
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const std::uint8_t m = std::max(
            {img.data[i * 3], img.data[i * 3 + 1], img.data[i * 3 + 2]});
        plane.data[i] = static_cast<float>(m / 255.0);
    }
    return plane;
}

BinaryMask load_mask(const fs::path& path) {
    const PlaneF32 plane = load_plane(path);
    BinaryMask mask(plane.width, plane.height);
    for (std::size_t i = 0; i < plane.size(); ++i)
        mask.data[i] = plane.data[i] != 0.0f ? 1 : 0;
    return mask;
}

} // namespace bvguide
