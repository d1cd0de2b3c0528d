#include "bvguide/filters.hpp"

#include <cmath>

namespace bvguide {

namespace {

void validate(const GaussianSpec& spec) {
    if (spec.kernel_size < 1 || spec.kernel_size % 2 == 0)
        throw InvalidKernelSize("kernel_size must be odd and >= 1");
    if (spec.sigma < 0.0)
        throw InvalidArgument("sigma must be >= 0");
}

// Mirror without repeating the edge pixel: ..., 2, 1 | 0, 1, ..., n-1 | n-2, ...
int reflect101(int i, int n) {
    if (n == 1)
        return 0;
    const int period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i < n ? i : period - i;
}

} // namespace

std::vector<double> gaussian_kernel(const GaussianSpec& spec) {
    validate(spec);
    const int k = spec.kernel_size;

    if (spec.sigma == 0.0 && k == 3)
        return {0.25, 0.5, 0.25};

    double sigma = spec.sigma;
    if (sigma == 0.0)
        sigma = 0.3 * ((k - 1) / 2 - 1) + 0.8;

    const int half = (k - 1) / 2;
    std::vector<double> kernel(k);
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double g = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        kernel[i + half] = g;
        sum += g;
    }
    for (double& w : kernel)
        w /= sum;
    return kernel;
}

RgbImage gaussian_blur_rgb(const RgbImage& img, const GaussianSpec& spec) {
    const std::vector<double> kernel = gaussian_kernel(spec);
    const int k = spec.kernel_size;
    if (k == 1)
        return img;

    const int half = k / 2;
    const int w = img.width, h = img.height;

    // Horizontal pass, per channel, into float32.
    std::vector<float> mid(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int i = -half; i <= half; ++i) {
                const std::size_t src = img.offset(reflect101(x + i, w), y);
                const double wk = kernel[i + half];
                acc[0] += wk * img.data[src + 0];
                acc[1] += wk * img.data[src + 1];
                acc[2] += wk * img.data[src + 2];
            }
            const std::size_t dst = img.offset(x, y);
            mid[dst + 0] = static_cast<float>(acc[0]);
            mid[dst + 1] = static_cast<float>(acc[1]);
            mid[dst + 2] = static_cast<float>(acc[2]);
        }
    }

    // Vertical pass, rounded half away from zero back to bytes.
    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int i = -half; i <= half; ++i) {
                const std::size_t src =
                    (static_cast<std::size_t>(reflect101(y + i, h)) * w + x) * 3;
                const double wk = kernel[i + half];
                acc[0] += wk * mid[src + 0];
                acc[1] += wk * mid[src + 1];
                acc[2] += wk * mid[src + 2];
            }
            const std::size_t dst = out.offset(x, y);
            for (int c = 0; c < 3; ++c) {
                const double v = std::round(acc[c]);
                out.data[dst + c] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
            }
        }
    }
    return out;
}

} // namespace bvguide
