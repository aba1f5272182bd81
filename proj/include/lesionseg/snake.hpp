#ifndef LESIONSEG_SNAKE_HPP
#define LESIONSEG_SNAKE_HPP

#include <vector>

#include "lesionseg/contour.hpp"
#include "lesionseg/grid.hpp"
#include "lesionseg/mask.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

struct SnakeParams {
    double alpha = 1.0;           // elastic weight, >= 0
    double beta = 0.5;            // bending weight, >= 0
    double gamma = 2.0;           // image-energy weight, >= 0
    double smoothing_sigma = 2.0; // Gaussian blur for the image term, px
    int neighborhood_radius = 2;  // search radius per point per sweep, px
    int max_iterations = 400;
    double converge_fraction = 0.02; // stop when moved fraction drops below
};

/// Energy components: total == elastic + bending + image + constraint.
/// The constraint term exists for completeness and is always 0 in this
/// fully automatic pipeline.
struct EnergyBreakdown {
    double elastic = 0.0;
    double bending = 0.0;
    double image = 0.0;
    double constraint = 0.0;
    double total = 0.0;
};

/// Normalized image energy, values in [-1, 0]; minima at strong edges.
struct EnergyField {
    int width = 0;
    int height = 0;
    GridD values;
};

/// alpha * sum over s of |v(s) - v(s-1)|^2, cyclic.
double elastic_energy(const Contour& c, double alpha);

/// beta * sum over s of |v(s-1) - 2 v(s) + v(s+1)|^2, cyclic.
double bending_energy(const Contour& c, double beta);

/// Gaussian blur, central-difference gradient, then
/// E(x, y) = -|grad|^2 / max |grad|^2. A constant image yields an all-zero
/// field. Throws ChannelMismatch on 3-channel input.
EnergyField image_energy_field(const RasterImage& gray, double smoothing_sigma);

/// Full contour energy; the image term samples the field at each point's
/// nearest pixel. Throws OutOfBounds if any point rounds outside the field.
EnergyBreakdown total_energy(const Contour& c, const EnergyField& field,
                             const SnakeParams& p);

struct EvolveResult {
    Contour contour;
    std::vector<EnergyBreakdown> trace; // one entry per sweep
};

/// Greedy point-wise descent: each sweep visits points in order and moves
/// each to the spot in its (2r+1)^2 integer-offset neighborhood that
/// minimizes the energy with all other points fixed (ties keep the current
/// position, else the first candidate in row-major order wins). Stops when
/// the fraction of moved points drops below converge_fraction or after
/// max_iterations sweeps. Deterministic; trace totals are non-increasing.
EvolveResult evolve(const Contour& c, const EnergyField& field,
                    const SnakeParams& p);

/// Even-odd scanline fill of the closed polygon; a pixel belongs to the
/// mask when its center lies inside (boundary pixels follow the top-left
/// convention). Throws DegenerateContour for fewer than 3 points or an
/// all-collinear contour.
BinaryMask contour_to_mask(const Contour& c, int width, int height);

} // namespace lesionseg

#endif
