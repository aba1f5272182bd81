#include <doctest.h>

#include "lesionseg/raster.hpp"
#include "oracles.hpp"

using namespace lesionseg;

TEST_SUITE("raster") {

TEST_CASE("grayscale uses rounded BT.601 luma") {
    RasterImage img = RasterImage::create(4, 1, 3);
    const std::uint8_t colors[4][3] = {
        {255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {200, 200, 200}};
    for (int x = 0; x < 4; ++x)
        for (int c = 0; c < 3; ++c)
            img.at(x, 0, c) = colors[x][c];

    const RasterImage gray = to_grayscale(img);
    CHECK(gray.channels == 1);
    CHECK(gray.at(0, 0) == 76);  // round(0.299 * 255)
    CHECK(gray.at(1, 0) == 150); // round(0.587 * 255)
    CHECK(gray.at(2, 0) == 29);  // round(0.114 * 255)
    CHECK(gray.at(3, 0) == 200); // neutral gray passes through
}

TEST_CASE("grayscale rejects single-channel input") {
    const RasterImage gray = RasterImage::create(2, 2, 1);
    CHECK_THROWS_AS(to_grayscale(gray), ChannelMismatch);
}

TEST_CASE("image creation validates dimensions and channels") {
    CHECK_THROWS_AS(RasterImage::create(0, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(RasterImage::create(4, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(RasterImage::create(4, 4, 2), InvalidArgument);
}

TEST_CASE("integral image matches cumulative sums") {
    Rng rng(11);
    const RasterImage img = oracles::random_image(rng, 23, 17, 1);
    const IntegralImage integral = build_integral(img);
    REQUIRE(integral.width == 23);
    REQUIRE(integral.height == 17);

    std::int64_t all = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            all = 0; // recompute the inclusive prefix directly
            for (int j = 0; j <= y; ++j)
                for (int i = 0; i <= x; ++i)
                    all += img.at(i, j);
            CHECK(integral.sums(y, x) == all);
        }
    CHECK(integral.total() == oracles::naive_box_sum(img, PixelRect{0, 0, 22, 16}));
}

TEST_CASE("integral image rejects color input") {
    const RasterImage img = RasterImage::create(4, 4, 3);
    CHECK_THROWS_AS(build_integral(img), ChannelMismatch);
}

TEST_CASE("box sums equal naive summation exactly") {
    Rng rng(12);
    const RasterImage img = oracles::random_image(rng, 64, 64, 1);
    const IntegralImage integral = build_integral(img);
    for (int trial = 0; trial < 500; ++trial) {
        const int x0 = static_cast<int>(rng.bounded(64));
        const int y0 = static_cast<int>(rng.bounded(64));
        const int x1 = x0 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(64 - x0)));
        const int y1 = y0 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(64 - y0)));
        const PixelRect rect{x0, y0, x1, y1};
        CHECK(box_sum(integral, rect) == oracles::naive_box_sum(img, rect));
    }
}

TEST_CASE("box sum covers single pixels and the full image") {
    Rng rng(13);
    const RasterImage img = oracles::random_image(rng, 9, 7, 1);
    const IntegralImage integral = build_integral(img);
    CHECK(box_sum(integral, PixelRect{0, 0, 0, 0}) == img.at(0, 0));
    CHECK(box_sum(integral, PixelRect{3, 2, 3, 2}) == img.at(3, 2));
    CHECK(box_sum(integral, PixelRect{0, 0, 8, 6}) == integral.total());
}

TEST_CASE("box sum rejects bad rectangles") {
    const RasterImage img = RasterImage::create(8, 8, 1);
    const IntegralImage integral = build_integral(img);
    CHECK_THROWS_AS(box_sum(integral, PixelRect{-1, 0, 3, 3}), OutOfBounds);
    CHECK_THROWS_AS(box_sum(integral, PixelRect{0, 0, 8, 3}), OutOfBounds);
    CHECK_THROWS_AS(box_sum(integral, PixelRect{4, 0, 3, 3}), OutOfBounds);
}

TEST_CASE("hsv conversion of primary and achromatic colors") {
    const HsvPixel red = rgb_to_hsv(255, 0, 0);
    CHECK(red.h == doctest::Approx(0.0));
    CHECK(red.s == doctest::Approx(1.0));
    CHECK(red.v == doctest::Approx(1.0));

    const HsvPixel green = rgb_to_hsv(0, 255, 0);
    CHECK(green.h == doctest::Approx(120.0));

    const HsvPixel blue = rgb_to_hsv(0, 0, 255);
    CHECK(blue.h == doctest::Approx(240.0));

    const HsvPixel yellow = rgb_to_hsv(255, 255, 0);
    CHECK(yellow.h == doctest::Approx(60.0));

    const HsvPixel gray = rgb_to_hsv(128, 128, 128);
    CHECK(gray.h == 0.0);
    CHECK(gray.s == 0.0);
    CHECK(gray.v == doctest::Approx(128.0 / 255.0));

    const HsvPixel black = rgb_to_hsv(0, 0, 0);
    CHECK(black.s == 0.0);
    CHECK(black.v == 0.0);
}

TEST_CASE("hsv stays in range and is achromatic exactly when r=g=b") {
    Rng rng(14);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto r = static_cast<std::uint8_t>(rng.bounded(256));
        const auto g = static_cast<std::uint8_t>(rng.bounded(256));
        const auto b = static_cast<std::uint8_t>(rng.bounded(256));
        const HsvPixel hsv = rgb_to_hsv(r, g, b);
        CHECK(hsv.h >= 0.0);
        CHECK(hsv.h < 360.0);
        CHECK(hsv.s >= 0.0);
        CHECK(hsv.s <= 1.0);
        CHECK(hsv.v >= 0.0);
        CHECK(hsv.v <= 1.0);
        if (r == g && g == b) {
            CHECK(hsv.s == 0.0);
            CHECK(hsv.h == 0.0);
        } else {
            CHECK(hsv.s > 0.0);
        }
    }
}

TEST_CASE("channel histogram counts every pixel once") {
    Rng rng(15);
    const RasterImage img = oracles::random_image(rng, 31, 19, 3);
    for (int c = 0; c < 3; ++c) {
        const Histogram hist = channel_histogram(img, c);
        CHECK(hist.total == 31u * 19u);
        std::uint64_t direct[256] = {};
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                ++direct[img.at(x, y, c)];
        for (int v = 0; v < 256; ++v)
            CHECK(hist.bins[static_cast<std::size_t>(v)] == direct[v]);
    }
}

TEST_CASE("channel histogram honors the mask") {
    Rng rng(16);
    const RasterImage img = oracles::random_image(rng, 16, 16, 1);
    const BinaryMask mask = oracles::random_mask(rng, 16, 16);
    const Histogram hist = channel_histogram(img, 0, &mask);
    CHECK(hist.total == mask.count());
}

TEST_CASE("channel histogram validates channel and mask size") {
    const RasterImage img = RasterImage::create(8, 8, 1);
    CHECK_THROWS_AS(channel_histogram(img, 1), BadChannel);
    CHECK_THROWS_AS(channel_histogram(img, -1), BadChannel);
    const BinaryMask small = BinaryMask::create(4, 4);
    CHECK_THROWS_AS(channel_histogram(img, 0, &small), DimensionMismatch);
}

} // TEST_SUITE
