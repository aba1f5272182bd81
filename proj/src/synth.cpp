#include "lesionseg/synth.hpp"

#include <algorithm>
#include <cmath>

#include "lesionseg/errors.hpp"
#include "lesionseg/grid.hpp"
#include "lesionseg/rng.hpp"

namespace lesionseg {

namespace {

double luma(const std::array<double, 3>& rgb) {
    return 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
}

struct BlobHarmonics {
    std::vector<double> amplitude; // a_k
    std::vector<double> phase;     // phi_k
};

// Analytic inside test at a pixel center, exact by construction.
bool inside_shape(double dx, double dy, const LesionShape& shape,
                  const BlobHarmonics& harmonics) {
    if (const auto* disk = std::get_if<DiskShape>(&shape))
        return dx * dx + dy * dy <= disk->radius * disk->radius;
    if (const auto* ell = std::get_if<EllipseShape>(&shape)) {
        const double c = std::cos(ell->theta);
        const double s = std::sin(ell->theta);
        const double u = c * dx + s * dy;
        const double w = -s * dx + c * dy;
        return (u / ell->a) * (u / ell->a) + (w / ell->b) * (w / ell->b) <= 1.0;
    }
    const auto& blob = std::get<BlobShape>(shape);
    const double rho = std::hypot(dx, dy);
    const double angle = std::atan2(dy, dx);
    double radius = blob.radius;
    double wobble = 0.0;
    for (std::size_t k = 0; k < harmonics.amplitude.size(); ++k)
        wobble += harmonics.amplitude[k] *
                  std::cos(static_cast<double>(k + 1) * angle + harmonics.phase[k]);
    radius *= 1.0 + wobble;
    return rho <= radius;
}

double max_radius(const LesionShape& shape, const BlobHarmonics& harmonics) {
    if (const auto* disk = std::get_if<DiskShape>(&shape))
        return disk->radius;
    if (const auto* ell = std::get_if<EllipseShape>(&shape))
        return std::max(ell->a, ell->b);
    const auto& blob = std::get<BlobShape>(shape);
    double total = 0.0;
    for (const double a : harmonics.amplitude)
        total += a;
    return blob.radius * (1.0 + total);
}

void validate_shape(const LesionShape& shape) {
    if (const auto* disk = std::get_if<DiskShape>(&shape)) {
        if (!(disk->radius > 0.0))
            throw InvalidArgument("disk radius must be positive");
        return;
    }
    if (const auto* ell = std::get_if<EllipseShape>(&shape)) {
        if (!(ell->a > 0.0) || !(ell->b > 0.0))
            throw InvalidArgument("ellipse semi-axes must be positive");
        return;
    }
    const auto& blob = std::get<BlobShape>(shape);
    if (!(blob.radius > 0.0))
        throw InvalidArgument("blob radius must be positive");
    if (blob.amplitude < 0.0 || blob.harmonics < 0)
        throw InvalidArgument("blob perturbation must be non-negative");
    double worst = 0.0; // upper bound on sum of a_k
    for (int k = 1; k <= blob.harmonics; ++k)
        worst += blob.amplitude / k;
    if (worst >= 1.0)
        throw InvalidArgument("blob perturbation too large; boundary radius could vanish");
}

} // namespace

std::pair<RasterImage, BinaryMask> gen_lesion_image(const SynthParams& p) {
    if (p.width < 32 || p.height < 32)
        throw InvalidArgument("synthetic images must be at least 32 x 32");
    validate_shape(p.shape);
    if (!(luma(p.lesion_color) < luma(p.skin_color)))
        throw InvalidArgument("lesion mean color must be darker than the skin");
    if (p.noise_sigma < 0.0 || p.edge_softness < 0.0 || p.lesion_jitter < 0.0 ||
        p.skin_jitter < 0.0)
        throw InvalidArgument("noise, softness, and jitter must be non-negative");

    Rng rng(p.rng_seed);

    // Draw order contract: harmonics, lesion jitter, skin jitter, noise.
    BlobHarmonics harmonics;
    if (const auto* blob = std::get_if<BlobShape>(&p.shape)) {
        harmonics.amplitude.reserve(static_cast<std::size_t>(blob->harmonics));
        harmonics.phase.reserve(static_cast<std::size_t>(blob->harmonics));
        for (int k = 1; k <= blob->harmonics; ++k) {
            harmonics.amplitude.push_back(blob->amplitude * rng.uniform(0.5, 1.0) / k);
            harmonics.phase.push_back(rng.uniform(0.0, 2.0 * M_PI));
        }
    }

    const double cx = (p.width - 1) / 2.0;
    const double cy = (p.height - 1) / 2.0;
    const double extent = max_radius(p.shape, harmonics);
    if (cx - extent < 8.0 || cy - extent < 8.0 || cx + extent > p.width - 9.0 ||
        cy + extent > p.height - 9.0)
        throw ShapeOutOfBounds("lesion must keep an 8 px margin inside the image");

    std::array<double, 3> lesion = p.lesion_color;
    for (auto& c : lesion)
        c = std::clamp(c + rng.uniform(-p.lesion_jitter, p.lesion_jitter), 0.0, 255.0);
    std::array<double, 3> skin = p.skin_color;
    for (auto& c : skin)
        c = std::clamp(c + rng.uniform(-p.skin_jitter, p.skin_jitter), 0.0, 255.0);

    BinaryMask mask = BinaryMask::create(p.width, p.height);
    GridD coverage(p.height, p.width);
    for (int y = 0; y < p.height; ++y)
        for (int x = 0; x < p.width; ++x) {
            const bool inside = inside_shape(x - cx, y - cy, p.shape, harmonics);
            mask.set(x, y, inside);
            coverage(y, x) = inside ? 1.0 : 0.0;
        }

    const GridD alpha =
        p.edge_softness > 0.0 ? gaussian_blur(coverage, p.edge_softness) : coverage;

    RasterImage img = RasterImage::create(p.width, p.height, 3);
    for (int y = 0; y < p.height; ++y)
        for (int x = 0; x < p.width; ++x) {
            const double a = alpha(y, x);
            for (int c = 0; c < 3; ++c) {
                double v = a * lesion[static_cast<std::size_t>(c)] +
                           (1.0 - a) * skin[static_cast<std::size_t>(c)];
                if (p.noise_sigma > 0.0)
                    v += rng.normal(0.0, p.noise_sigma);
                img.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp<long>(std::lround(v), 0, 255));
            }
        }
    return {std::move(img), std::move(mask)};
}

std::vector<SynthCase> synth20_suite() {
    // Two contrast regimes: clearly pigmented lesions on light skin, and
    // faint lesions whose luma gap (~12-15) is comparable to the pixel
    // noise, where global threshold baselines smear into the skin.
    const std::array<double, 3> dark_lesion = {110.0, 70.0, 60.0};
    const std::array<double, 3> light_skin = {225.0, 180.0, 160.0};
    const std::array<double, 3> faint_lesion = {150.0, 120.0, 110.0};
    const std::array<double, 3> faint_skin = {162.0, 132.0, 122.0};
    const std::array<double, 3> faint_lesion2 = {148.0, 118.0, 108.0};
    const std::array<double, 3> faint_skin2 = {163.0, 133.0, 123.0};

    const auto contrasty = [&](std::uint64_t seed, LesionShape shape,
                               double noise, double softness) {
        SynthParams p;
        p.rng_seed = seed;
        p.shape = shape;
        p.lesion_color = dark_lesion;
        p.lesion_jitter = 8.0;
        p.skin_color = light_skin;
        p.skin_jitter = 8.0;
        p.noise_sigma = noise;
        p.edge_softness = softness;
        return p;
    };
    const auto faint = [&](std::uint64_t seed, LesionShape shape, double noise,
                           double softness, const std::array<double, 3>& lc,
                           const std::array<double, 3>& sc) {
        SynthParams p;
        p.rng_seed = seed;
        p.shape = shape;
        p.lesion_color = lc;
        p.lesion_jitter = 2.0;
        p.skin_color = sc;
        p.skin_jitter = 2.0;
        p.noise_sigma = noise;
        p.edge_softness = softness;
        return p;
    };

    std::vector<SynthCase> suite;
    suite.push_back({"synth01", contrasty(1, DiskShape{25.0}, 4.0, 1.0)});
    suite.push_back({"synth02", contrasty(2, BlobShape{60.0, 0.12, 3}, 5.0, 1.0)});
    suite.push_back({"synth03", contrasty(3, EllipseShape{85.0, 60.0, 0.5}, 4.0, 2.0)});
    suite.push_back({"synth04", contrasty(4, DiskShape{90.0}, 6.0, 1.0)});
    suite.push_back({"synth05", contrasty(5, BlobShape{75.0, 0.10, 4}, 5.0, 2.0)});
    suite.push_back({"synth06", contrasty(6, EllipseShape{95.0, 70.0, 2.2}, 3.0, 1.0)});
    suite.push_back({"synth07", contrasty(7, BlobShape{80.0, 0.15, 3}, 8.0, 2.0)});
    suite.push_back({"synth08", contrasty(8, DiskShape{30.0}, 5.0, 0.0)});
    suite.push_back({"synth09", contrasty(9, EllipseShape{40.0, 28.0, 1.1}, 7.0, 1.0)});
    suite.push_back({"synth10", contrasty(10, BlobShape{32.0, 0.08, 5}, 4.0, 1.0)});
    suite.push_back({"synth11", contrasty(11, DiskShape{100.0}, 6.0, 2.0)});
    suite.push_back({"synth12", contrasty(12, BlobShape{85.0, 0.12, 4}, 6.0, 1.0)});
    suite.push_back({"synth13", contrasty(13, EllipseShape{65.0, 50.0, 0.0}, 5.0, 1.0)});
    suite.push_back({"synth14", contrasty(14, DiskShape{75.0}, 10.0, 3.0)});
    suite.push_back({"synth15", faint(15, DiskShape{80.0}, 12.0, 2.0, faint_lesion,
                                      faint_skin)});
    suite.push_back({"synth16", faint(16, BlobShape{75.0, 0.10, 3}, 12.0, 2.0,
                                      faint_lesion, faint_skin)});
    suite.push_back({"synth17", faint(17, EllipseShape{90.0, 65.0, 0.9}, 12.0, 2.0,
                                      faint_lesion, faint_skin)});
    suite.push_back({"synth18", faint(18, DiskShape{65.0}, 14.0, 3.0, faint_lesion2,
                                      faint_skin2)});
    suite.push_back({"synth19", faint(19, BlobShape{85.0, 0.08, 4}, 12.0, 2.0,
                                      faint_lesion, faint_skin)});
    suite.push_back({"synth20", faint(20, EllipseShape{80.0, 60.0, 2.6}, 14.0, 2.0,
                                      faint_lesion2, faint_skin2)});
    return suite;
}

nlohmann::ordered_json synth_manifest_json(const std::vector<SynthCase>& suite) {
    nlohmann::ordered_json cases = nlohmann::ordered_json::array();
    for (const auto& c : suite) {
        nlohmann::ordered_json j;
        j["id"] = c.id;
        j["seed"] = c.params.rng_seed;
        j["width"] = c.params.width;
        j["height"] = c.params.height;
        nlohmann::ordered_json shape;
        if (const auto* disk = std::get_if<DiskShape>(&c.params.shape)) {
            shape["kind"] = "disk";
            shape["radius"] = disk->radius;
        } else if (const auto* ell = std::get_if<EllipseShape>(&c.params.shape)) {
            shape["kind"] = "ellipse";
            shape["a"] = ell->a;
            shape["b"] = ell->b;
            shape["theta"] = ell->theta;
        } else {
            const auto& blob = std::get<BlobShape>(c.params.shape);
            shape["kind"] = "blob";
            shape["radius"] = blob.radius;
            shape["amplitude"] = blob.amplitude;
            shape["harmonics"] = blob.harmonics;
        }
        j["shape"] = std::move(shape);
        j["lesion_color"] = c.params.lesion_color;
        j["lesion_jitter"] = c.params.lesion_jitter;
        j["skin_color"] = c.params.skin_color;
        j["skin_jitter"] = c.params.skin_jitter;
        j["noise_sigma"] = c.params.noise_sigma;
        j["edge_softness"] = c.params.edge_softness;
        cases.push_back(std::move(j));
    }
    nlohmann::ordered_json manifest;
    manifest["suite"] = "synth20";
    manifest["cases"] = std::move(cases);
    return manifest;
}

} // namespace lesionseg
