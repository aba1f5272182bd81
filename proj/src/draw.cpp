#include "lesionseg/draw.hpp"

#include <cmath>
#include <cstdlib>

#include "lesionseg/errors.hpp"

namespace lesionseg {

namespace {

RasterImage promote_to_rgb(const RasterImage& img) {
    if (img.channels == 3)
        return img;
    RasterImage rgb = RasterImage::create(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t v = img.at(x, y);
            rgb.at(x, y, 0) = v;
            rgb.at(x, y, 1) = v;
            rgb.at(x, y, 2) = v;
        }
    return rgb;
}

void plot_green(RasterImage& img, int x, int y) {
    if (!img.in_bounds(x, y))
        return;
    img.at(x, y, 0) = 0;
    img.at(x, y, 1) = 255;
    img.at(x, y, 2) = 0;
}

void bresenham(RasterImage& img, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        plot_green(img, x0, y0);
        if (x0 == x1 && y0 == y1)
            break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

} // namespace

RasterImage draw_contour_overlay(const RasterImage& img, const Contour& contour) {
    if (contour.points.size() < 2)
        throw DegenerateContour("overlay needs a contour with at least 2 points");
    RasterImage out = promote_to_rgb(img);
    const std::size_t n = contour.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = contour.points[i];
        const auto& b = contour.points[(i + 1) % n];
        bresenham(out, static_cast<int>(std::lround(a.x())),
                  static_cast<int>(std::lround(a.y())),
                  static_cast<int>(std::lround(b.x())),
                  static_cast<int>(std::lround(b.y())));
    }
    return out;
}

RasterImage draw_mask_boundary_overlay(const RasterImage& img,
                                       const BinaryMask& mask) {
    if (mask.width != img.width || mask.height != img.height)
        throw DimensionMismatch("mask dimensions do not match the image");
    RasterImage out = promote_to_rgb(img);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y))
                continue;
            const bool boundary = x == 0 || x == mask.width - 1 || y == 0 ||
                                  y == mask.height - 1 || !mask.at(x - 1, y) ||
                                  !mask.at(x + 1, y) || !mask.at(x, y - 1) ||
                                  !mask.at(x, y + 1);
            if (boundary)
                plot_green(out, x, y);
        }
    return out;
}

} // namespace lesionseg
