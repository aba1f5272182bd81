#include "lesionseg/otsu.hpp"

#include <array>
#include <cstdint>

#include "lesionseg/errors.hpp"

namespace lesionseg {

namespace {

// Between-class variance of the partition encoded by `cuts` (each threshold
// is the last bin of its class), from inclusive cumulative moments. Empty
// classes contribute 0. The expression shape here is the comparison
// contract for the exhaustive-search tests, so keep it stable.
double partition_variance(const std::array<std::int64_t, 256>& cum_w,
                          const std::array<std::int64_t, 256>& cum_m,
                          const int* cuts, int k, double mu) {
    double objective = 0.0;
    int prev = -1;
    for (int c = 0; c < k; ++c) {
        const int last = c + 1 < k ? cuts[c] : 255;
        const std::int64_t w =
            cum_w[last] - (prev >= 0 ? cum_w[prev] : 0);
        const std::int64_t m =
            cum_m[last] - (prev >= 0 ? cum_m[prev] : 0);
        if (w > 0) {
            const double mu_c = static_cast<double>(m) / static_cast<double>(w);
            const double d = mu_c - mu;
            objective += static_cast<double>(w) * d * d;
        }
        prev = last;
    }
    return objective;
}

} // namespace

ThresholdSet multi_otsu_thresholds(const Histogram& hist, int k) {
    if (k < 2 || k > 4)
        throw InvalidArgument("class count must be between 2 and 4");
    int nonempty = 0;
    for (const auto b : hist.bins)
        if (b > 0)
            ++nonempty;
    if (nonempty < k)
        throw DegenerateHistogram("histogram has fewer non-empty bins than classes");

    std::array<std::int64_t, 256> cum_w{};
    std::array<std::int64_t, 256> cum_m{};
    std::int64_t w_acc = 0, m_acc = 0;
    for (int v = 0; v < 256; ++v) {
        w_acc += static_cast<std::int64_t>(hist.bins[static_cast<std::size_t>(v)]);
        m_acc += static_cast<std::int64_t>(v) *
                 static_cast<std::int64_t>(hist.bins[static_cast<std::size_t>(v)]);
        cum_w[static_cast<std::size_t>(v)] = w_acc;
        cum_m[static_cast<std::size_t>(v)] = m_acc;
    }
    const double mu = static_cast<double>(m_acc) / static_cast<double>(w_acc);

    ThresholdSet best;
    best.k = k;
    best.between_class_variance = -1.0;
    int cuts[3] = {0, 0, 0};

    // Lexicographic iteration plus strict improvement keeps the smallest
    // tuple among ties.
    if (k == 2) {
        for (cuts[0] = 0; cuts[0] < 256; ++cuts[0]) {
            const double obj = partition_variance(cum_w, cum_m, cuts, k, mu);
            if (obj > best.between_class_variance) {
                best.between_class_variance = obj;
                best.thresholds = {cuts[0]};
            }
        }
    } else if (k == 3) {
        for (cuts[0] = 0; cuts[0] < 255; ++cuts[0])
            for (cuts[1] = cuts[0] + 1; cuts[1] < 256; ++cuts[1]) {
                const double obj = partition_variance(cum_w, cum_m, cuts, k, mu);
                if (obj > best.between_class_variance) {
                    best.between_class_variance = obj;
                    best.thresholds = {cuts[0], cuts[1]};
                }
            }
    } else {
        for (cuts[0] = 0; cuts[0] < 254; ++cuts[0])
            for (cuts[1] = cuts[0] + 1; cuts[1] < 255; ++cuts[1])
                for (cuts[2] = cuts[1] + 1; cuts[2] < 256; ++cuts[2]) {
                    const double obj = partition_variance(cum_w, cum_m, cuts, k, mu);
                    if (obj > best.between_class_variance) {
                        best.between_class_variance = obj;
                        best.thresholds = {cuts[0], cuts[1], cuts[2]};
                    }
                }
    }
    return best;
}

int classify_value(int value, const ThresholdSet& t) {
    int c = 0;
    for (const int cut : t.thresholds)
        if (value > cut)
            ++c;
    return c;
}

BinaryMask segment_otsu(const RasterImage& gray, int k, const LesionRule& rule,
                        const std::optional<PixelRect>& roi) {
    if (gray.channels != 1)
        throw ChannelMismatch("thresholding expects a single-channel image");
    PixelRect region{0, 0, gray.width - 1, gray.height - 1};
    if (roi) {
        region = *roi;
        if (region.x0 < 0 || region.y0 < 0 || region.x1 < region.x0 ||
            region.y1 < region.y0 || region.x1 >= gray.width ||
            region.y1 >= gray.height)
            throw OutOfBounds("region of interest exceeds the image");
    }

    Histogram hist;
    for (int y = region.y0; y <= region.y1; ++y)
        for (int x = region.x0; x <= region.x1; ++x)
            hist.add(gray.at(x, y));

    const ThresholdSet thresholds = multi_otsu_thresholds(hist, k);

    int lesion_class = 0;
    switch (rule.kind) {
    case LesionRule::Kind::DarkestClass:
        lesion_class = 0;
        break;
    case LesionRule::Kind::BrightestClass:
        lesion_class = k - 1;
        break;
    case LesionRule::Kind::ClassIndex:
        if (rule.index < 0 || rule.index >= k)
            throw InvalidArgument("lesion class index exceeds the class count");
        lesion_class = rule.index;
        break;
    }

    BinaryMask mask = BinaryMask::create(gray.width, gray.height);
    for (int y = region.y0; y <= region.y1; ++y)
        for (int x = region.x0; x <= region.x1; ++x)
            mask.set(x, y, classify_value(gray.at(x, y), thresholds) == lesion_class);
    return mask;
}

} // namespace lesionseg
