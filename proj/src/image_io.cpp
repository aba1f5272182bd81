#include "lesionseg/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "lesionseg/errors.hpp"

namespace lesionseg {

namespace {

constexpr png_uint_32 kMaxDimension = 16384;

struct FileHandle {
    std::FILE* fp = nullptr;
    ~FileHandle() {
        if (fp)
            std::fclose(fp);
    }
};

// ---------------------------------------------------------------- PNG ----

RasterImage read_png_file(std::FILE* fp, const std::string& path) {
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw IoError("png: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: allocation failed");
    }

    RasterImage img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG: " + path);
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (w < 1 || h < 1 || w > kMaxDimension || h > kMaxDimension)
        png_error(png, "unreasonable image dimensions");

    if (depth == 16)
        png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3)
        png_error(png, "unsupported channel layout");

    img = RasterImage::create(static_cast<int>(w), static_cast<int>(h), channels);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = img.data.data() +
                  static_cast<std::size_t>(y) * w * static_cast<std::size_t>(channels);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png_file(std::FILE* fp, const RasterImage& img, const std::string& path) {
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw IoError("png: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: allocation failed");
    }

    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG: " + path);
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(
            img.data.data() + static_cast<std::size_t>(y) * img.width * img.channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// --------------------------------------------------------------- JPEG ----

struct JpegErrorTrap {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
};

void jpeg_error_escape(j_common_ptr cinfo) {
    std::longjmp(reinterpret_cast<JpegErrorTrap*>(cinfo->err)->jump, 1);
}

RasterImage read_jpeg_file(std::FILE* fp, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorTrap trap;
    cinfo.err = jpeg_std_error(&trap.mgr);
    trap.mgr.error_exit = jpeg_error_escape;

    RasterImage img;
    if (setjmp(trap.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("failed to decode JPEG: " + path);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space =
        cinfo.jpeg_color_space == JCS_GRAYSCALE ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const JDIMENSION w = cinfo.output_width;
    const JDIMENSION h = cinfo.output_height;
    const int channels = cinfo.output_components;
    if (w < 1 || h < 1 || w > kMaxDimension || h > kMaxDimension ||
        (channels != 1 && channels != 3))
        std::longjmp(trap.jump, 1);

    img = RasterImage::create(static_cast<int>(w), static_cast<int>(h), channels);
    while (cinfo.output_scanline < h) {
        JSAMPROW row = img.data.data() +
                       static_cast<std::size_t>(cinfo.output_scanline) * w *
                           static_cast<std::size_t>(channels);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

// ---------------------------------------------------------------- PNM ----

struct PnmParser {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;
    const std::string& path;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            const char c = static_cast<char>(bytes[pos]);
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    long next_int() {
        skip_space_and_comments();
        if (pos >= bytes.size() ||
            !std::isdigit(static_cast<unsigned char>(bytes[pos])))
            throw IoError("malformed PNM header: " + path);
        long value = 0;
        while (pos < bytes.size() &&
               std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1 << 20)
                throw IoError("malformed PNM header: " + path);
            ++pos;
        }
        return value;
    }
};

RasterImage read_pnm_bytes(const std::vector<std::uint8_t>& bytes,
                           const std::string& path) {
    if (bytes.size() < 2)
        throw IoError("truncated PNM file: " + path);
    const char kind = static_cast<char>(bytes[1]);
    const bool ascii = kind == '2' || kind == '3';
    const int channels = (kind == '3' || kind == '6') ? 3 : 1;

    PnmParser parser{bytes, 2, path};
    const long w = parser.next_int();
    const long h = parser.next_int();
    const long maxval = parser.next_int();
    if (w < 1 || h < 1 || w > kMaxDimension || h > kMaxDimension)
        throw IoError("unreasonable PNM dimensions: " + path);
    if (maxval < 1 || maxval > 255)
        throw IoError("PNM maxval out of the 8-bit range: " + path);

    RasterImage img = RasterImage::create(static_cast<int>(w),
                                          static_cast<int>(h), channels);
    const std::size_t samples = img.data.size();
    const auto rescale = [maxval](long v) {
        return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    };

    if (ascii) {
        for (std::size_t i = 0; i < samples; ++i) {
            const long v = parser.next_int();
            if (v > maxval)
                throw IoError("PNM sample exceeds maxval: " + path);
            img.data[i] = rescale(v);
        }
    } else {
        // Raw samples begin after exactly one whitespace byte.
        std::size_t data_at = parser.pos + 1;
        if (data_at + samples > bytes.size())
            throw IoError("truncated PNM data: " + path);
        for (std::size_t i = 0; i < samples; ++i) {
            const long v = bytes[data_at + i];
            if (v > maxval)
                throw IoError("PNM sample exceeds maxval: " + path);
            img.data[i] = rescale(v);
        }
    }
    return img;
}

void write_pnm_file(std::FILE* fp, const RasterImage& img, const std::string& path) {
    char header[64];
    std::snprintf(header, sizeof(header), "P%c\n%d %d\n255\n",
                  img.channels == 1 ? '5' : '6', img.width, img.height);
    if (std::fwrite(header, 1, std::strlen(header), fp) != std::strlen(header) ||
        std::fwrite(img.data.data(), 1, img.data.size(), fp) != img.data.size())
        throw IoError("failed to write PNM: " + path);
}

// ------------------------------------------------------------- helpers ----

std::vector<std::uint8_t> read_all_bytes(const std::string& path) {
    FileHandle file;
    file.fp = std::fopen(path.c_str(), "rb");
    if (!file.fp)
        throw IoError("cannot open: " + path);
    std::vector<std::uint8_t> bytes;
    std::uint8_t buf[65536];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), file.fp)) > 0)
        bytes.insert(bytes.end(), buf, buf + n);
    if (std::ferror(file.fp))
        throw IoError("read error: " + path);
    return bytes;
}

void atomic_write(const std::string& path,
                  const std::function<void(std::FILE*)>& writer) {
    const std::string tmp = path + ".tmp";
    std::FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp)
        throw IoError("cannot open for writing: " + tmp);
    try {
        writer(fp);
    } catch (...) {
        std::fclose(fp);
        std::remove(tmp.c_str());
        throw;
    }
    if (std::fclose(fp) != 0) {
        std::remove(tmp.c_str());
        throw IoError("failed to flush: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("failed to move into place: " + path);
    }
}

std::string lower_extension(const std::string& path) {
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos)
        return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

} // namespace

RasterImage read_image(const std::string& path) {
    FileHandle file;
    file.fp = std::fopen(path.c_str(), "rb");
    if (!file.fp)
        throw IoError("cannot open: " + path);

    std::uint8_t magic[8] = {};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), file.fp);
    if (std::fseek(file.fp, 0, SEEK_SET) != 0)
        throw IoError("cannot seek: " + path);

    if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0)
        return read_png_file(file.fp, path);
    if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8)
        return read_jpeg_file(file.fp, path);
    if (got >= 2 && magic[0] == 'P' &&
        (magic[1] == '2' || magic[1] == '3' || magic[1] == '5' || magic[1] == '6'))
        return read_pnm_bytes(read_all_bytes(path), path);
    throw IoError("unrecognized image format: " + path);
}

void write_image(const std::string& path, const RasterImage& img) {
    if (img.width < 1 || img.height < 1 ||
        (img.channels != 1 && img.channels != 3) ||
        img.data.size() != static_cast<std::size_t>(img.width) * img.height *
                               static_cast<std::size_t>(img.channels))
        throw InvalidArgument("malformed image buffer");

    const std::string ext = lower_extension(path);
    if (ext == "png") {
        atomic_write(path, [&](std::FILE* fp) { write_png_file(fp, img, path); });
    } else if (ext == "pgm") {
        if (img.channels != 1)
            throw InvalidArgument("PGM holds single-channel images only");
        atomic_write(path, [&](std::FILE* fp) { write_pnm_file(fp, img, path); });
    } else if (ext == "ppm") {
        if (img.channels != 3)
            throw InvalidArgument("PPM holds 3-channel images only");
        atomic_write(path, [&](std::FILE* fp) { write_pnm_file(fp, img, path); });
    } else {
        throw IoError("unsupported output format (use .png, .pgm, or .ppm): " + path);
    }
}

BinaryMask read_mask(const std::string& path) {
    const RasterImage img = read_image(path);
    if (img.channels != 1)
        throw MalformedMask("reference masks must be single-channel: " + path);
    BinaryMask mask = BinaryMask::create(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        if (img.data[i] == 255)
            mask.bits[i] = 1;
        else if (img.data[i] != 0)
            throw MalformedMask("mask samples must be exactly 0 or 255: " + path);
    }
    return mask;
}

void write_mask(const std::string& path, const BinaryMask& mask) {
    RasterImage img = RasterImage::create(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        img.data[i] = mask.bits[i] ? 255 : 0;
    write_image(path, img);
}

} // namespace lesionseg
