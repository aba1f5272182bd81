#ifndef LESIONSEG_GRID_HPP
#define LESIONSEG_GRID_HPP

#include <Eigen/Core>

#include "lesionseg/raster.hpp"

namespace lesionseg {

/// Dense real-valued image grid, indexed (y, x).
using GridD = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Single-channel image to double grid. Throws ChannelMismatch on 3-channel
/// input.
GridD to_grid(const RasterImage& gray);

/// Separable Gaussian blur with replicated borders. Kernel radius is
/// ceil(3 sigma); sigma <= 0 returns the input unchanged.
GridD gaussian_blur(const GridD& src, double sigma);

} // namespace lesionseg

#endif
