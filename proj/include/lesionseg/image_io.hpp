#ifndef LESIONSEG_IMAGE_IO_HPP
#define LESIONSEG_IMAGE_IO_HPP

#include <string>

#include "lesionseg/mask.hpp"
#include "lesionseg/raster.hpp"

namespace lesionseg {

/// Decode PNG, JPEG, or PNM (P2/P3/P5/P6) by magic bytes. PNG alpha is
/// stripped, palettes expand to RGB, and 16-bit samples reduce to 8-bit;
/// PNM maxval must be at most 255. Throws IoError on unreadable or
/// undecodable files.
RasterImage read_image(const std::string& path);

/// Encode by extension: .png, .pgm (single-channel), or .ppm (3-channel).
/// Writes atomically (temp file + rename). Throws IoError.
void write_image(const std::string& path, const RasterImage& img);

/// Read a reference mask: a single-channel image whose samples are exactly
/// 0 (healthy) or 255 (lesion). Any other sample or channel layout throws
/// MalformedMask; unreadable files throw IoError.
BinaryMask read_mask(const std::string& path);

/// Write a mask as a single-channel 0/255 image (format by extension).
void write_mask(const std::string& path, const BinaryMask& mask);

} // namespace lesionseg

#endif
