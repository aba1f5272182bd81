#ifndef LESIONSEG_OTSU_HPP
#define LESIONSEG_OTSU_HPP

#include <optional>
#include <vector>

#include "lesionseg/mask.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

/// Result of a k-class threshold search: k-1 strictly increasing cut values
/// in [0, 255]. Class 0 holds values <= thresholds[0], class c the values in
/// (thresholds[c-1], thresholds[c]], and class k-1 the values above the
/// last threshold.
struct ThresholdSet {
    std::vector<int> thresholds;
    int k = 0;
    double between_class_variance = 0.0;
};

/// Which threshold class counts as the lesion.
struct LesionRule {
    enum class Kind { DarkestClass, BrightestClass, ClassIndex };
    Kind kind = Kind::DarkestClass;
    int index = 0; // only ClassIndex uses this

    static LesionRule darkest() { return {Kind::DarkestClass, 0}; }
    static LesionRule brightest() { return {Kind::BrightestClass, 0}; }
    static LesionRule class_index(int i) { return {Kind::ClassIndex, i}; }
};

/// Thresholds maximizing the between-class variance sum over classes of
/// w_c * (mu_c - mu)^2, searched exhaustively over all strictly increasing
/// (k-1)-tuples with cumulative-moment precomputation. Ties resolve to the
/// lexicographically smallest tuple. Requires 2 <= k <= 4; throws
/// DegenerateHistogram when the histogram has fewer than k non-empty bins.
ThresholdSet multi_otsu_thresholds(const Histogram& hist, int k);

/// Class index (0-based, darkest first) of a sample value under the
/// threshold set: the number of thresholds strictly below the value.
int classify_value(int value, const ThresholdSet& t);

/// Threshold the image into k classes and keep the class selected by the
/// rule as the lesion mask. With a region of interest, the histogram and
/// the classification are restricted to the ROI and everything outside it
/// is healthy. Throws ChannelMismatch on 3-channel input, OutOfBounds for a
/// bad ROI, and propagates DegenerateHistogram.
BinaryMask segment_otsu(const RasterImage& gray, int k, const LesionRule& rule,
                        const std::optional<PixelRect>& roi = std::nullopt);

} // namespace lesionseg

#endif
