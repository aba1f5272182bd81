#include "lesionseg/raster.hpp"

#include <algorithm>
#include <cmath>

namespace lesionseg {

RasterImage RasterImage::create(int width, int height, int channels,
                                std::uint8_t fill) {
    if (width < 1 || height < 1)
        throw InvalidArgument("image dimensions must be at least 1x1");
    if (channels != 1 && channels != 3)
        throw InvalidArgument("image must have 1 or 3 channels");
    RasterImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
}

RasterImage to_grayscale(const RasterImage& img) {
    if (img.channels != 3)
        throw ChannelMismatch("to_grayscale expects a 3-channel image");
    RasterImage gray = RasterImage::create(img.width, img.height, 1);
    const std::uint8_t* src = img.data.data();
    std::uint8_t* dst = gray.data.data();
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i, src += 3) {
        const double luma = 0.299 * src[0] + 0.587 * src[1] + 0.114 * src[2];
        dst[i] = static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(luma), 0, 255));
    }
    return gray;
}

IntegralImage build_integral(const RasterImage& gray) {
    if (gray.channels != 1)
        throw ChannelMismatch("build_integral expects a single-channel image");
    IntegralImage integral;
    integral.width = gray.width;
    integral.height = gray.height;
    integral.sums.resize(gray.height, gray.width);
    for (int y = 0; y < gray.height; ++y) {
        std::int64_t row_sum = 0;
        for (int x = 0; x < gray.width; ++x) {
            row_sum += gray.at(x, y);
            integral.sums(y, x) = row_sum + (y > 0 ? integral.sums(y - 1, x) : 0);
        }
    }
    return integral;
}

std::int64_t box_sum(const IntegralImage& integral, const PixelRect& rect) {
    if (rect.x0 < 0 || rect.y0 < 0 || rect.x0 > rect.x1 || rect.y0 > rect.y1 ||
        rect.x1 >= integral.width || rect.y1 >= integral.height)
        throw OutOfBounds("box_sum rectangle exceeds image bounds");
    // Fig.-1 pattern: four lookups, indices of -1 contribute 0.
    const auto lookup = [&](int x, int y) -> std::int64_t {
        return (x < 0 || y < 0) ? 0 : integral.sums(y, x);
    };
    return lookup(rect.x1, rect.y1) - lookup(rect.x0 - 1, rect.y1) -
           lookup(rect.x1, rect.y0 - 1) + lookup(rect.x0 - 1, rect.y0 - 1);
}

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int maxc = std::max({r, g, b});
    const int minc = std::min({r, g, b});
    const int delta = maxc - minc;

    HsvPixel out;
    out.v = maxc / 255.0;
    if (maxc == 0 || delta == 0)
        return out; // s == 0, canonical h == 0
    out.s = static_cast<double>(delta) / maxc;

    double h;
    if (r == maxc)
        h = 60.0 * (static_cast<double>(g) - b) / delta;
    else if (g == maxc)
        h = 60.0 * ((static_cast<double>(b) - r) / delta + 2.0);
    else
        h = 60.0 * ((static_cast<double>(r) - g) / delta + 4.0);
    if (h < 0.0)
        h += 360.0;
    out.h = h;
    return out;
}

Histogram channel_histogram(const RasterImage& img, int channel,
                            const BinaryMask* mask) {
    if (channel < 0 || channel >= img.channels)
        throw BadChannel("channel index out of range");
    if (mask && (mask->width != img.width || mask->height != img.height))
        throw DimensionMismatch("mask dimensions do not match image");
    Histogram hist;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (mask && !mask->at(x, y))
                continue;
            hist.add(img.at(x, y, channel));
        }
    return hist;
}

} // namespace lesionseg
