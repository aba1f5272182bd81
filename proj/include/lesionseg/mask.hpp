#ifndef LESIONSEG_MASK_HPP
#define LESIONSEG_MASK_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lesionseg {

/// Binary lesion/healthy labeling, row-major, one flag per pixel
/// (true = lesion).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    static BinaryMask create(int width, int height, bool fill = false) {
        BinaryMask m;
        m.width = width;
        m.height = height;
        m.bits.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
        return m;
    }

    bool at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool value) {
        bits[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
    }

    /// Number of lesion pixels.
    std::uint64_t count() const {
        std::uint64_t n = 0;
        for (auto b : bits)
            n += b;
        return n;
    }

    bool operator==(const BinaryMask&) const = default;
};

} // namespace lesionseg

#endif
