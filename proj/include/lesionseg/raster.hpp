#ifndef LESIONSEG_RASTER_HPP
#define LESIONSEG_RASTER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lesionseg/errors.hpp"
#include "lesionseg/mask.hpp"

namespace lesionseg {

/// 8-bit raster image, row-major, interleaved channels (1 or 3).
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    static RasterImage create(int width, int height, int channels,
                              std::uint8_t fill = 0);

    std::size_t index(int x, int y, int c = 0) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    std::uint8_t at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
    std::uint8_t& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
};

/// Inclusive cumulative-sum table over a single-channel image. Entry (x, y)
/// holds the exact integer sum of all source pixels with coordinates
/// (i <= x, j <= y). There is no zero border row/column; lookups at index -1
/// contribute 0.
struct IntegralImage {
    int width = 0;
    int height = 0;
    Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sums;

    std::int64_t total() const { return sums(height - 1, width - 1); }
};

/// Inclusive pixel rectangle: x0 <= x <= x1, y0 <= y <= y1.
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

/// Hexcone HSV pixel. h in degrees [0, 360); s, v in [0, 1].
/// Achromatic pixels (s == 0) carry the canonical hue h == 0.
struct HsvPixel {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

/// 256-bin sample histogram.
struct Histogram {
    std::array<std::uint64_t, 256> bins{};
    std::uint64_t total = 0;

    void add(int bin) {
        ++bins[static_cast<std::size_t>(bin)];
        ++total;
    }
};

/// BT.601 luma conversion, round(0.299 R + 0.587 G + 0.114 B).
/// Throws ChannelMismatch if the image is already single-channel.
RasterImage to_grayscale(const RasterImage& img);

/// Throws ChannelMismatch on multi-channel input. Exact for all images up
/// to 4096 x 4096 of 8-bit samples (64-bit accumulators).
IntegralImage build_integral(const RasterImage& gray);

/// Sum of source pixels inside `rect` using exactly four table lookups.
/// Throws OutOfBounds if the rectangle is malformed or exceeds the image.
std::int64_t box_sum(const IntegralImage& integral, const PixelRect& rect);

HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Histogram of one channel, optionally restricted to mask-true pixels.
/// Throws BadChannel for a channel index out of range and DimensionMismatch
/// if the mask does not match the image.
Histogram channel_histogram(const RasterImage& img, int channel,
                            const BinaryMask* mask = nullptr);

} // namespace lesionseg

#endif
