#include <doctest.h>

#include "lesionseg/otsu.hpp"
#include "oracles.hpp"

using namespace lesionseg;

namespace {

Histogram delta_peaks(const std::vector<std::pair<int, int>>& peaks) {
    Histogram hist;
    for (const auto& [value, count] : peaks)
        for (int i = 0; i < count; ++i)
            hist.add(value);
    return hist;
}

} // namespace

TEST_SUITE("otsu") {

TEST_CASE("two delta peaks split at the lower peak") {
    const ThresholdSet t = multi_otsu_thresholds(
        delta_peaks({{50, 100}, {200, 100}}), 2);
    REQUIRE(t.thresholds.size() == 1);
    CHECK(t.thresholds[0] == 50);

    // Unequal masses move nothing: any cut between the peaks separates
    // them identically and the tie keeps the smallest.
    const ThresholdSet u = multi_otsu_thresholds(
        delta_peaks({{50, 10}, {200, 990}}), 2);
    CHECK(u.thresholds[0] == 50);
}

TEST_CASE("three delta peaks split at the two lower peaks") {
    const ThresholdSet t = multi_otsu_thresholds(
        delta_peaks({{30, 50}, {120, 70}, {220, 60}}), 3);
    REQUIRE(t.thresholds.size() == 2);
    CHECK(t.thresholds[0] == 30);
    CHECK(t.thresholds[1] == 120);
}

TEST_CASE("two-class threshold matches exact-rational classic search") {
    Rng rng(61);
    int unique_cases = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const Histogram hist = oracles::random_histogram(rng, 255, 40);
        int nonempty = 0;
        for (const auto b : hist.bins)
            nonempty += b > 0;
        if (nonempty < 2)
            continue;
        const ThresholdSet t = multi_otsu_thresholds(hist, 2);
        const oracles::ExactOtsu2 oracle = oracles::exact_otsu2(hist);
        if (oracle.unique) {
            ++unique_cases;
            CHECK(t.thresholds[0] == oracle.threshold);
        }
    }
    CHECK(unique_cases > 300); // the comparison actually ran
}

TEST_CASE("k=3 and k=4 match exhaustive search on low-mass histograms") {
    Rng rng(62);
    for (int k = 3; k <= 4; ++k) {
        const int trials = k == 3 ? 60 : 25;
        for (int trial = 0; trial < trials; ++trial) {
            const Histogram hist = oracles::random_histogram(rng, 63, 25);
            int nonempty = 0;
            for (const auto b : hist.bins)
                nonempty += b > 0;
            if (nonempty < k)
                continue;
            const ThresholdSet t = multi_otsu_thresholds(hist, k);
            const oracles::NaiveOtsu oracle = oracles::naive_multi_otsu(hist, k);
            CHECK(t.between_class_variance == oracle.objective);
            REQUIRE(t.thresholds.size() == oracle.cuts.size());
            for (std::size_t i = 0; i < oracle.cuts.size(); ++i)
                CHECK(t.thresholds[static_cast<std::size_t>(i)] == oracle.cuts[i]);
        }
    }
}

TEST_CASE("ties keep the lexicographically smallest threshold tuple") {
    // With mass only at 10 and 20, every cut in [10, 19] gives identical
    // class contents, so the smallest must win.
    const ThresholdSet t = multi_otsu_thresholds(delta_peaks({{10, 5}, {20, 7}}), 2);
    CHECK(t.thresholds[0] == 10);
}

TEST_CASE("more classes never decrease the best objective") {
    Rng rng(63);
    for (int trial = 0; trial < 20; ++trial) {
        const Histogram hist = oracles::random_histogram(rng, 255, 20);
        int nonempty = 0;
        for (const auto b : hist.bins)
            nonempty += b > 0;
        if (nonempty < 4)
            continue;
        const double v2 = multi_otsu_thresholds(hist, 2).between_class_variance;
        const double v3 = multi_otsu_thresholds(hist, 3).between_class_variance;
        const double v4 = multi_otsu_thresholds(hist, 4).between_class_variance;
        CHECK(v3 >= v2);
        CHECK(v4 >= v3);
    }
}

TEST_CASE("thresholds are strictly increasing and in range") {
    Rng rng(64);
    for (int k = 2; k <= 4; ++k) {
        const Histogram hist = oracles::random_histogram(rng, 255, 10);
        const ThresholdSet t = multi_otsu_thresholds(hist, k);
        REQUIRE(t.thresholds.size() == static_cast<std::size_t>(k - 1));
        for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
            CHECK(t.thresholds[i] >= 0);
            CHECK(t.thresholds[i] <= 255);
            if (i > 0)
                CHECK(t.thresholds[i] > t.thresholds[i - 1]);
        }
        CHECK(t.k == k);
    }
}

TEST_CASE("classification counts thresholds below the value") {
    ThresholdSet t;
    t.k = 3;
    t.thresholds = {50, 120};
    CHECK(classify_value(0, t) == 0);
    CHECK(classify_value(50, t) == 0);  // boundary belongs to the lower class
    CHECK(classify_value(51, t) == 1);
    CHECK(classify_value(120, t) == 1);
    CHECK(classify_value(121, t) == 2);
    CHECK(classify_value(255, t) == 2);
}

TEST_CASE("histogram and class-count validation") {
    const Histogram flat = delta_peaks({{100, 50}});
    CHECK_THROWS_AS(multi_otsu_thresholds(flat, 2), DegenerateHistogram);
    const Histogram two = delta_peaks({{10, 5}, {200, 5}});
    CHECK_THROWS_AS(multi_otsu_thresholds(two, 3), DegenerateHistogram);
    CHECK_THROWS_AS(multi_otsu_thresholds(two, 1), InvalidArgument);
    CHECK_THROWS_AS(multi_otsu_thresholds(two, 5), InvalidArgument);
}

TEST_CASE("segmentation selects the requested class") {
    RasterImage img = RasterImage::create(30, 10, 1);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 30; ++x)
            img.at(x, y) = x < 10 ? 20 : (x < 20 ? 128 : 240);

    const BinaryMask darkest = segment_otsu(img, 3, LesionRule::darkest());
    const BinaryMask brightest = segment_otsu(img, 3, LesionRule::brightest());
    const BinaryMask middle = segment_otsu(img, 3, LesionRule::class_index(1));
    CHECK(darkest.count() == 100);
    CHECK(brightest.count() == 100);
    CHECK(middle.count() == 100);
    CHECK(darkest.at(0, 0));
    CHECK(middle.at(15, 5));
    CHECK(brightest.at(29, 9));

    CHECK_THROWS_AS(segment_otsu(img, 3, LesionRule::class_index(3)),
                    InvalidArgument);
    CHECK_THROWS_AS(segment_otsu(RasterImage::create(8, 8, 3), 2,
                                 LesionRule::darkest()),
                    ChannelMismatch);
}

TEST_CASE("region of interest restricts both histogram and labeling") {
    // Left half bimodal {10, 240}; right half a constant 100 that would
    // otherwise dominate the histogram.
    RasterImage img = RasterImage::create(40, 8, 1);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 40; ++x)
            img.at(x, y) = x < 20 ? ((x + y) % 2 ? 240 : 10) : 100;

    const PixelRect roi{0, 0, 19, 7};
    const BinaryMask mask = segment_otsu(img, 2, LesionRule::darkest(), roi);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 40; ++x) {
            if (x >= 20)
                CHECK_FALSE(mask.at(x, y)); // outside the ROI stays healthy
            else
                CHECK(mask.at(x, y) == (img.at(x, y) == 10));
        }

    CHECK_THROWS_AS(
        segment_otsu(img, 2, LesionRule::darkest(), PixelRect{0, 0, 40, 7}),
        OutOfBounds);
    CHECK_THROWS_AS(
        segment_otsu(img, 2, LesionRule::darkest(), PixelRect{5, 5, 4, 7}),
        OutOfBounds);
}

} // TEST_SUITE
