#ifndef LESIONSEG_CONTOUR_HPP
#define LESIONSEG_CONTOUR_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lesionseg/interest_points.hpp"

namespace lesionseg {

/// Closed polygonal contour: ordered (x, y) points, last implicitly
/// connected to first. Invariants: >= 3 points, no two consecutive points
/// identical.
struct Contour {
    std::vector<Eigen::Vector2d> points;

    std::size_t size() const { return points.size(); }
    const Eigen::Vector2d& operator[](std::size_t i) const { return points[i]; }
    Eigen::Vector2d& operator[](std::size_t i) { return points[i]; }
};

bool operator==(const Contour& a, const Contour& b);

enum class InitStrategy { Hull, RandomSubset };

struct InitParams {
    InitStrategy strategy = InitStrategy::Hull;
    int num_points = 60;          // >= 8
    std::uint64_t rng_seed = 0;   // used only by RandomSubset
    double fallback_margin = 0.05; // fraction of image size
};

/// Total length of the closed polygon (including the closing segment).
double perimeter(const Contour& c);

/// Signed area via the shoelace formula; positive for counter-clockwise
/// order with respect to the (x, y) axes.
double signed_area(const Contour& c);

/// Build an initial contour around the detected keypoints.
///
/// Hull: convex hull of the keypoint positions, counter-clockwise.
/// RandomSubset: seeded sample of min(num_points, count) keypoints ordered
/// by polar angle around their centroid. Either polygon is dilated outward
/// from its vertex centroid by 15%, clamped to the image, and resampled to
/// num_points points. Fewer than 3 usable (non-collinear) keypoints fall
/// back to a rectangle inset by fallback_margin from the image border.
Contour seed_contour(const std::vector<Keypoint>& keypoints, int width,
                     int height, const InitParams& params = {});

/// Resample to n points equally spaced by arc length; the output starts at
/// the input's point 0. Throws DegenerateContour if the perimeter is 0 and
/// InvalidArgument for n < 8.
Contour resample_contour(const Contour& c, int n);

} // namespace lesionseg

#endif
