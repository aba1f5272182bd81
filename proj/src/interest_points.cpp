#include "lesionseg/interest_points.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace lesionseg {

namespace {

// Box sum with the rectangle clamped to the image; an empty intersection
// contributes 0. Used by the orientation sampler, which may poke outside.
std::int64_t clamped_box_sum(const IntegralImage& integral, int x0, int y0,
                             int x1, int y1) {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, integral.width - 1);
    y1 = std::min(y1, integral.height - 1);
    if (x0 > x1 || y0 > y1)
        return 0;
    return box_sum(integral, PixelRect{x0, y0, x1, y1});
}

struct HessianResponses {
    double dxx, dyy, dxy;
};

// Raw (unnormalized) box-filter responses centered at (x, y) for a filter
// with lobe size l. The caller guarantees the L x L footprint fits.
HessianResponses raw_hessian(const IntegralImage& integral, int x, int y, int l) {
    const int span = (3 * l - 1) / 2; // half-extent of the 3l-long axis
    const int thick = l - 1;          // half-extent of the (2l-1)-wide axis

    // Dxx: three vertical bands of width l, heights 2l-1, weights 1 -2 1.
    const std::int64_t xx_left =
        box_sum(integral, PixelRect{x - span, y - thick, x - span + l - 1, y + thick});
    const std::int64_t xx_mid =
        box_sum(integral, PixelRect{x - span + l, y - thick, x - span + 2 * l - 1, y + thick});
    const std::int64_t xx_right =
        box_sum(integral, PixelRect{x - span + 2 * l, y - thick, x + span, y + thick});

    // Dyy: transpose of Dxx.
    const std::int64_t yy_top =
        box_sum(integral, PixelRect{x - thick, y - span, x + thick, y - span + l - 1});
    const std::int64_t yy_mid =
        box_sum(integral, PixelRect{x - thick, y - span + l, x + thick, y - span + 2 * l - 1});
    const std::int64_t yy_bot =
        box_sum(integral, PixelRect{x - thick, y - span + 2 * l, x + thick, y + span});

    // Dxy: four l x l quadrant blocks offset one pixel from the center.
    const std::int64_t xy_tl = box_sum(integral, PixelRect{x - l, y - l, x - 1, y - 1});
    const std::int64_t xy_tr = box_sum(integral, PixelRect{x + 1, y - l, x + l, y - 1});
    const std::int64_t xy_bl = box_sum(integral, PixelRect{x - l, y + 1, x - 1, y + l});
    const std::int64_t xy_br = box_sum(integral, PixelRect{x + 1, y + 1, x + l, y + l});

    HessianResponses r;
    r.dxx = static_cast<double>(xx_left - 2 * xx_mid + xx_right);
    r.dyy = static_cast<double>(yy_top - 2 * yy_mid + yy_bot);
    r.dxy = static_cast<double>(xy_tl - xy_tr - xy_bl + xy_br);
    return r;
}

} // namespace

ResponseMap hessian_response_map(const IntegralImage& integral, int filter_size) {
    if (filter_size < 9 || filter_size % 2 == 0)
        throw InvalidArgument("filter size must be odd and >= 9");
    if (filter_size > integral.width || filter_size > integral.height)
        throw FilterTooLarge("filter does not fit inside the image");

    ResponseMap map;
    map.width = integral.width;
    map.height = integral.height;
    map.filter_size = filter_size;
    map.scale = 1.2 * filter_size / 9.0;
    map.responses = GridD::Zero(integral.height, integral.width);

    const int l = filter_size / 3;
    const int border = (filter_size - 1) / 2;
    const double inv_area = 1.0 / (static_cast<double>(filter_size) * filter_size);

    for (int y = border; y < integral.height - border; ++y)
        for (int x = border; x < integral.width - border; ++x) {
            const HessianResponses r = raw_hessian(integral, x, y, l);
            const double dxx = r.dxx * inv_area;
            const double dyy = r.dyy * inv_area;
            const double dxy = r.dxy * inv_area;
            map.responses(y, x) = dxx * dyy - (0.9 * dxy) * (0.9 * dxy);
        }
    return map;
}

std::vector<Keypoint> detect_keypoints(const RasterImage& gray,
                                       const DetectorParams& params) {
    if (params.octaves < 1 || params.layers_per_octave < 3)
        throw InvalidArgument("need octaves >= 1 and layers_per_octave >= 3");
    if (params.base_filter_size < 9 || params.base_filter_size % 2 == 0)
        throw InvalidArgument("base filter size must be odd and >= 9");
    if (gray.width < params.base_filter_size || gray.height < params.base_filter_size)
        throw ImageTooSmall("image smaller than the base filter");

    const IntegralImage integral = build_integral(gray);

    // Filter sizes repeat between octaves; compute each map once.
    std::map<int, ResponseMap> maps;
    const auto map_for = [&](int size) -> const ResponseMap* {
        if (size > gray.width || size > gray.height)
            return nullptr;
        auto it = maps.find(size);
        if (it == maps.end())
            it = maps.emplace(size, hessian_response_map(integral, size)).first;
        return &it->second;
    };

    std::vector<Keypoint> keypoints;
    std::map<std::tuple<int, int, int>, bool> seen; // (size, y, x)

    int octave_start = params.base_filter_size;
    for (int octave = 0; octave < params.octaves; ++octave) {
        const int step = 6 << octave;
        std::vector<const ResponseMap*> stack;
        for (int layer = 0; layer < params.layers_per_octave; ++layer) {
            const ResponseMap* m = map_for(octave_start + layer * step);
            if (!m)
                break; // larger sizes cannot fit either
            stack.push_back(m);
        }
        octave_start += step;
        if (stack.size() < 3)
            continue;

        for (std::size_t layer = 1; layer + 1 < stack.size(); ++layer) {
            const GridD& mid = stack[layer]->responses;
            const GridD& below = stack[layer - 1]->responses;
            const GridD& above = stack[layer + 1]->responses;
            for (int y = 1; y < gray.height - 1; ++y)
                for (int x = 1; x < gray.width - 1; ++x) {
                    const double v = mid(y, x);
                    if (v < params.response_threshold)
                        continue;
                    bool is_max = true;
                    for (int dy = -1; dy <= 1 && is_max; ++dy)
                        for (int dx = -1; dx <= 1 && is_max; ++dx) {
                            if (v <= below(y + dy, x + dx) ||
                                v <= above(y + dy, x + dx))
                                is_max = false;
                            else if ((dx != 0 || dy != 0) && v <= mid(y + dy, x + dx))
                                is_max = false;
                        }
                    if (!is_max)
                        continue;
                    auto key = std::make_tuple(stack[layer]->filter_size, y, x);
                    if (seen.emplace(key, true).second)
                        keypoints.push_back(Keypoint{x, y, stack[layer]->scale, v, 0.0});
                }
        }
    }

    std::sort(keypoints.begin(), keypoints.end(),
              [](const Keypoint& a, const Keypoint& b) {
                  if (a.response != b.response)
                      return a.response > b.response;
                  return std::tie(a.y, a.x, a.scale) < std::tie(b.y, b.x, b.scale);
              });
    return keypoints;
}

Keypoint assign_orientation(const IntegralImage& integral, const Keypoint& kp) {
    const int s = std::max(1, static_cast<int>(std::lround(kp.scale)));
    const int half = 2 * s; // Haar wavelet side is 4 * scale

    struct WeightedResponse {
        double angle, wx, wy;
    };
    std::vector<WeightedResponse> responses;
    for (int j = -5; j <= 5; ++j)
        for (int i = -5; i <= 5; ++i) {
            if (i * i + j * j >= 36)
                continue;
            const int cx = kp.x + i * s;
            const int cy = kp.y + j * s;
            const double haar_x = static_cast<double>(
                clamped_box_sum(integral, cx, cy - half, cx + half - 1, cy + half - 1) -
                clamped_box_sum(integral, cx - half, cy - half, cx - 1, cy + half - 1));
            const double haar_y = static_cast<double>(
                clamped_box_sum(integral, cx - half, cy, cx + half - 1, cy + half - 1) -
                clamped_box_sum(integral, cx - half, cy - half, cx + half - 1, cy - 1));
            // Gaussian weight at sigma_w = 2.5 * scale over offset (i*s, j*s).
            const double w = std::exp(-(i * i + j * j) / (2.0 * 2.5 * 2.5));
            if (haar_x != 0.0 || haar_y != 0.0) {
                const double wx = w * haar_x;
                const double wy = w * haar_y;
                double angle = std::atan2(wy, wx);
                if (angle < 0.0)
                    angle += 2.0 * M_PI;
                responses.push_back({angle, wx, wy});
            }
        }

    Keypoint out = kp;
    out.orientation = 0.0;
    if (responses.empty())
        return out;

    const double window = M_PI / 3.0;
    double best_mag = -1.0;
    double best_angle = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double start = k * (M_PI / 30.0);
        double sx = 0.0, sy = 0.0;
        for (const auto& r : responses) {
            double delta = r.angle - start;
            if (delta < 0.0)
                delta += 2.0 * M_PI;
            if (delta < window) {
                sx += r.wx;
                sy += r.wy;
            }
        }
        const double mag = sx * sx + sy * sy;
        if (mag <= 0.0)
            continue;
        double angle = std::atan2(sy, sx);
        if (angle < 0.0)
            angle += 2.0 * M_PI;
        if (mag > best_mag || (mag == best_mag && angle < best_angle)) {
            best_mag = mag;
            best_angle = angle;
        }
    }
    if (best_mag > 0.0)
        out.orientation = best_angle;
    return out;
}

} // namespace lesionseg
