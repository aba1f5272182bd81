#ifndef LESIONSEG_INTEREST_POINTS_HPP
#define LESIONSEG_INTEREST_POINTS_HPP

#include <vector>

#include "lesionseg/grid.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

/// Scale-space detector configuration. The filter ladder starts at
/// base_filter_size and grows by 6 * 2^octave per layer, with each octave
/// starting one step into the previous one (9, 15, 21, 27 / 15, 27, 39, 51 /
/// 27, 51, 75, 99 for the defaults).
struct DetectorParams {
    int octaves = 3;
    int layers_per_octave = 4; // >= 3, non-max suppression needs a 3-layer stack
    int base_filter_size = 9;  // odd, >= 9; scale sigma = 1.2 * size / 9
    double response_threshold = 200.0;
};

/// Determinant-of-Hessian responses at one filter size, full image
/// resolution. Border pixels where the filter does not fit are exactly 0.
struct ResponseMap {
    int width = 0;
    int height = 0;
    int filter_size = 0;
    double scale = 0.0;
    GridD responses;
};

struct Keypoint {
    int x = 0;
    int y = 0;
    double scale = 0.0;
    double response = 0.0;
    double orientation = 0.0; // radians in [0, 2pi), 0 when unassigned
};

/// Box-filter approximation of the Hessian determinant at one filter size.
/// Dxx, Dyy, Dxy are computed from the integral image, each normalized by
/// filter_size^2; response = Dxx * Dyy - (0.9 * Dxy)^2.
/// Throws FilterTooLarge if the filter exceeds either image dimension and
/// InvalidArgument for an even or undersized filter.
ResponseMap hessian_response_map(const IntegralImage& integral, int filter_size);

/// Scale-space maxima of the Hessian responses across the filter ladder.
/// A keypoint is a strict maximum over its 3x3x3 neighborhood within an
/// octave with response >= response_threshold. Result is sorted by
/// descending response (ties by y, x, scale) and is deterministic.
/// Throws ImageTooSmall if the image cannot fit the base filter.
std::vector<Keypoint> detect_keypoints(const RasterImage& gray,
                                       const DetectorParams& params = {});

/// Dominant Haar-wavelet direction in a radius-6*scale disc around the
/// keypoint, Gaussian-weighted (sigma = 2.5 * scale), taken over a sliding
/// 60-degree window. Samples clamp at image borders. Ties pick the smallest
/// resulting angle.
Keypoint assign_orientation(const IntegralImage& integral, const Keypoint& kp);

} // namespace lesionseg

#endif
