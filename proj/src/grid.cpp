#include "lesionseg/grid.hpp"

#include <cmath>
#include <vector>

namespace lesionseg {

GridD to_grid(const RasterImage& gray) {
    if (gray.channels != 1)
        throw ChannelMismatch("to_grid expects a single-channel image");
    GridD g(gray.height, gray.width);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            g(y, x) = gray.at(x, y);
    return g;
}

GridD gaussian_blur(const GridD& src, double sigma) {
    if (sigma <= 0.0)
        return src;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double norm = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        norm += kernel[i + radius];
    }
    for (auto& w : kernel)
        w /= norm;

    const int height = static_cast<int>(src.rows());
    const int width = static_cast<int>(src.cols());
    const auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };

    GridD tmp(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * src(y, clampi(x + i, width - 1));
            tmp(y, x) = acc;
        }
    GridD out(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp(clampi(y + i, height - 1), x);
            out(y, x) = acc;
        }
    return out;
}

} // namespace lesionseg
