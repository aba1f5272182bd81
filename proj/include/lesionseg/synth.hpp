#ifndef LESIONSEG_SYNTH_HPP
#define LESIONSEG_SYNTH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lesionseg/mask.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

struct DiskShape {
    double radius = 30.0;
};

struct EllipseShape {
    double a = 40.0;     // semi-axis along the rotated x direction
    double b = 25.0;     // semi-axis along the rotated y direction
    double theta = 0.0;  // rotation, radians
};

/// Boundary radius r * (1 + sum_k a_k cos(k angle + phi_k)) with seeded
/// a_k = amplitude * U(0.5, 1) / k and phi_k = U(0, 2 pi).
struct BlobShape {
    double radius = 40.0;
    double amplitude = 0.1;
    int harmonics = 3;
};

using LesionShape = std::variant<DiskShape, EllipseShape, BlobShape>;

/// Synthetic image recipe. The lesion is centered in the image and must
/// leave at least 8 px of margin; its mean color must be darker (in luma)
/// than the skin's.
struct SynthParams {
    std::uint64_t rng_seed = 0;
    int width = 256;
    int height = 256;
    LesionShape shape = DiskShape{60.0};
    std::array<double, 3> lesion_color = {110.0, 70.0, 60.0};
    double lesion_jitter = 10.0; // per-channel uniform +/- jitter
    std::array<double, 3> skin_color = {225.0, 180.0, 160.0};
    double skin_jitter = 10.0;
    double noise_sigma = 0.0;   // per-sample Gaussian noise
    double edge_softness = 0.0; // boundary blur, px
};

/// Deterministic image + exact analytic ground-truth mask. The seeded
/// generator is consumed in a fixed order: blob harmonics (when the shape
/// is a blob), lesion color jitter (3 draws), skin color jitter (3 draws),
/// then per-pixel noise in row-major order with channels innermost.
/// Throws ShapeOutOfBounds when the shape breaks the 8 px margin and
/// InvalidArgument when the lesion is not darker than the skin.
std::pair<RasterImage, BinaryMask> gen_lesion_image(const SynthParams& p);

struct SynthCase {
    std::string id;
    SynthParams params;
};

/// The fixed 20-image benchmark suite (seeds 1..20, mixed shapes, noise
/// levels, and contrasts). data/synth20.json mirrors these parameters.
std::vector<SynthCase> synth20_suite();

/// Manifest JSON describing a suite, stable field order.
nlohmann::ordered_json synth_manifest_json(const std::vector<SynthCase>& suite);

} // namespace lesionseg

#endif
