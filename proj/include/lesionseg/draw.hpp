#ifndef LESIONSEG_DRAW_HPP
#define LESIONSEG_DRAW_HPP

#include "lesionseg/contour.hpp"
#include "lesionseg/mask.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

/// Copy of the image with the closed contour drawn as a 1 px pure-green
/// (0, 255, 0) polyline. Single-channel inputs are promoted to RGB first.
/// No pixel off the polyline is altered.
RasterImage draw_contour_overlay(const RasterImage& img, const Contour& contour);

/// Copy of the image with the mask's boundary (lesion pixels with at least
/// one 4-neighbor outside the lesion) painted pure green.
/// Throws DimensionMismatch if the mask does not match the image.
RasterImage draw_mask_boundary_overlay(const RasterImage& img,
                                       const BinaryMask& mask);

} // namespace lesionseg

#endif
