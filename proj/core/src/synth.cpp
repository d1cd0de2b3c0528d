#include "bvguide/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace bvguide {

namespace {

struct Blob {
    int cx, cy, rx, ry;
};

// Bounded draws and normals are built directly on the mt19937 word stream so
// phantom bytes do not depend on the standard library's distribution
// implementations.
class PinnedRng {
public:
    explicit PinnedRng(std::uint32_t seed) : gen_(seed) {}

    int uniform_int(int lo, int hi) { // inclusive bounds
        const std::uint32_t span = static_cast<std::uint32_t>(hi - lo + 1);
        return lo + static_cast<int>(gen_() % span);
    }

    double uniform01() { // [0,1), 24-bit resolution
        return (gen_() >> 8) * (1.0 / 16777216.0);
    }

    double normal() { // Box-Muller, pairs cached
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(); // (0,1]
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

void validate(const PhantomSpec& spec) {
    if (spec.width < 1 || spec.height < 1)
        throw InvalidArgument("phantom dimensions must be >= 1");
    if (spec.n_blobs > 0) {
        if (spec.radius_min < 1 || spec.radius_max < spec.radius_min)
            throw InvalidArgument("blob radius range must satisfy 1 <= min <= max");
        if (2 * spec.radius_max >= std::min(spec.width, spec.height))
            throw InvalidArgument("blob radius too large for the image");
    }
    if (spec.noise_sigma < 0.0)
        throw InvalidArgument("noise_sigma must be >= 0");
}

bool overlaps(const Blob& a, const Blob& b) {
    // Conservative: bounding circles of the two ellipses.
    const double ra = std::max(a.rx, a.ry);
    const double rb = std::max(b.rx, b.ry);
    const double dx = a.cx - b.cx;
    const double dy = a.cy - b.cy;
    return dx * dx + dy * dy < (ra + rb) * (ra + rb);
}

} // namespace

std::pair<RgbImage, BinaryMask> generate_phantom(const PhantomSpec& spec) {
    validate(spec);
    PinnedRng rng(spec.seed);

    std::vector<Blob> blobs;
    blobs.reserve(spec.n_blobs);
    for (unsigned b = 0; b < spec.n_blobs; ++b) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            Blob candidate;
            candidate.rx = rng.uniform_int(spec.radius_min, spec.radius_max);
            candidate.ry = rng.uniform_int(spec.radius_min, spec.radius_max);
            candidate.cx = rng.uniform_int(candidate.rx, spec.width - 1 - candidate.rx);
            candidate.cy = rng.uniform_int(candidate.ry, spec.height - 1 - candidate.ry);
            if (std::none_of(blobs.begin(), blobs.end(),
                             [&](const Blob& other) { return overlaps(candidate, other); })) {
                blobs.push_back(candidate);
                placed = true;
            }
        }
        if (!placed)
            throw PlacementFailure("could not place blob " + std::to_string(b) +
                                   " without overlap in 1000 attempts");
    }

    RgbImage img(spec.width, spec.height);
    BinaryMask mask(spec.width, spec.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.data[i * 3 + 0] = spec.background_color[0];
        img.data[i * 3 + 1] = spec.background_color[1];
        img.data[i * 3 + 2] = spec.background_color[2];
    }
    for (const Blob& blob : blobs) {
        for (int y = blob.cy - blob.ry; y <= blob.cy + blob.ry; ++y) {
            for (int x = blob.cx - blob.rx; x <= blob.cx + blob.rx; ++x) {
                const double nx = static_cast<double>(x - blob.cx) / blob.rx;
                const double ny = static_cast<double>(y - blob.cy) / blob.ry;
                if (nx * nx + ny * ny > 1.0)
                    continue;
                std::uint8_t* px = img.pixel(x, y);
                px[0] = spec.blob_color[0];
                px[1] = spec.blob_color[1];
                px[2] = spec.blob_color[2];
                mask.set(x, y, true);
            }
        }
    }

    if (spec.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            const double noisy = img.data[i] + rng.normal() * spec.noise_sigma;
            img.data[i] = static_cast<std::uint8_t>(std::clamp(std::round(noisy), 0.0, 255.0));
        }
    }

    return {std::move(img), std::move(mask)};
}

} // namespace bvguide
