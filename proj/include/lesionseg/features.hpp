#ifndef LESIONSEG_FEATURES_HPP
#define LESIONSEG_FEATURES_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lesionseg/mask.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

enum class Region { Lesion, Healthy };

/// Population statistics (divide by n) of one channel over one region.
struct ChannelStats {
    double mean = 0.0;
    double variance = 0.0;
};

/// Per-region color statistics: RGB samples in [0, 255], hue in degrees
/// [0, 360), saturation/value in [0, 1]. Hue statistics are plain
/// arithmetic on the degree values (no circular mean). Histograms quantize
/// H over [0, 360) and S/V over [0, 1] into 256 bins.
struct RegionFeatures {
    Region region = Region::Lesion;
    std::uint64_t pixel_count = 0;
    ChannelStats r, g, b, h, s, v;
    Histogram hist_r, hist_g, hist_b, hist_h, hist_s, hist_v;
};

struct FeatureReport {
    RegionFeatures lesion;
    RegionFeatures healthy;
    std::string image_id;
};

/// Split the image by the mask and compute both regions' statistics.
/// Throws ChannelMismatch unless the image has 3 channels,
/// DimensionMismatch if the mask does not match, and EmptyRegion when
/// either region has no pixels.
FeatureReport region_stats(const RasterImage& img, const BinaryMask& mask,
                           const std::string& image_id = "");

/// Stable-field-order JSON form of the report.
nlohmann::ordered_json feature_report_json(const FeatureReport& report);

} // namespace lesionseg

#endif
