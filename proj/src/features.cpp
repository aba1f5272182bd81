#include "lesionseg/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "lesionseg/errors.hpp"

namespace lesionseg {

namespace {

constexpr int kChannels = 6; // r, g, b, h, s, v

int quantize(double value, double range) {
    const int bin = static_cast<int>(std::floor(value / range * 256.0));
    return std::clamp(bin, 0, 255);
}

RegionFeatures compute_region(const RasterImage& img, const BinaryMask& mask,
                              bool lesion) {
    RegionFeatures f;
    f.region = lesion ? Region::Lesion : Region::Healthy;

    std::array<double, kChannels> sum{};
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (mask.at(x, y) != lesion)
                continue;
            ++f.pixel_count;
            const std::uint8_t r = img.at(x, y, 0);
            const std::uint8_t g = img.at(x, y, 1);
            const std::uint8_t b = img.at(x, y, 2);
            const HsvPixel hsv = rgb_to_hsv(r, g, b);
            sum[0] += r;
            sum[1] += g;
            sum[2] += b;
            sum[3] += hsv.h;
            sum[4] += hsv.s;
            sum[5] += hsv.v;
            f.hist_r.add(r);
            f.hist_g.add(g);
            f.hist_b.add(b);
            f.hist_h.add(quantize(hsv.h, 360.0));
            f.hist_s.add(quantize(hsv.s, 1.0));
            f.hist_v.add(quantize(hsv.v, 1.0));
        }
    if (f.pixel_count == 0)
        throw EmptyRegion(lesion ? "mask selects no lesion pixels"
                                 : "mask selects no healthy pixels");

    const double n = static_cast<double>(f.pixel_count);
    std::array<double, kChannels> mean;
    for (int c = 0; c < kChannels; ++c)
        mean[static_cast<std::size_t>(c)] = sum[static_cast<std::size_t>(c)] / n;

    // Second pass keeps the variances numerically clean (no cancellation).
    std::array<double, kChannels> sq{};
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (mask.at(x, y) != lesion)
                continue;
            const std::uint8_t r = img.at(x, y, 0);
            const std::uint8_t g = img.at(x, y, 1);
            const std::uint8_t b = img.at(x, y, 2);
            const HsvPixel hsv = rgb_to_hsv(r, g, b);
            const std::array<double, kChannels> value = {
                static_cast<double>(r), static_cast<double>(g),
                static_cast<double>(b), hsv.h, hsv.s, hsv.v};
            for (int c = 0; c < kChannels; ++c) {
                const double d = value[static_cast<std::size_t>(c)] -
                                 mean[static_cast<std::size_t>(c)];
                sq[static_cast<std::size_t>(c)] += d * d;
            }
        }

    ChannelStats* stats[kChannels] = {&f.r, &f.g, &f.b, &f.h, &f.s, &f.v};
    for (int c = 0; c < kChannels; ++c) {
        stats[c]->mean = mean[static_cast<std::size_t>(c)];
        stats[c]->variance = sq[static_cast<std::size_t>(c)] / n;
    }
    return f;
}

nlohmann::ordered_json histogram_json(const Histogram& h) {
    nlohmann::ordered_json bins = nlohmann::ordered_json::array();
    for (const auto b : h.bins)
        bins.push_back(b);
    return bins;
}

nlohmann::ordered_json region_json(const RegionFeatures& f) {
    nlohmann::ordered_json j;
    j["region"] = f.region == Region::Lesion ? "lesion" : "healthy";
    j["pixel_count"] = f.pixel_count;
    const struct {
        const char* name;
        const ChannelStats* stats;
        const Histogram* hist;
    } channels[] = {
        {"r", &f.r, &f.hist_r}, {"g", &f.g, &f.hist_g}, {"b", &f.b, &f.hist_b},
        {"h", &f.h, &f.hist_h}, {"s", &f.s, &f.hist_s}, {"v", &f.v, &f.hist_v},
    };
    nlohmann::ordered_json ch;
    for (const auto& c : channels) {
        nlohmann::ordered_json entry;
        entry["mean"] = c.stats->mean;
        entry["variance"] = c.stats->variance;
        entry["histogram"] = histogram_json(*c.hist);
        ch[c.name] = std::move(entry);
    }
    j["channels"] = std::move(ch);
    return j;
}

} // namespace

FeatureReport region_stats(const RasterImage& img, const BinaryMask& mask,
                           const std::string& image_id) {
    if (img.channels != 3)
        throw ChannelMismatch("feature extraction expects a 3-channel image");
    if (mask.width != img.width || mask.height != img.height)
        throw DimensionMismatch("mask dimensions do not match the image");

    FeatureReport report;
    report.image_id = image_id;
    report.lesion = compute_region(img, mask, true);
    report.healthy = compute_region(img, mask, false);
    return report;
}

nlohmann::ordered_json feature_report_json(const FeatureReport& report) {
    nlohmann::ordered_json j;
    j["image_id"] = report.image_id;
    j["lesion"] = region_json(report.lesion);
    j["healthy"] = region_json(report.healthy);
    return j;
}

} // namespace lesionseg
