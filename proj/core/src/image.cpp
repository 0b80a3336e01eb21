#include "torque/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <png.h>

#include "torque/errors.hpp"

namespace torque {

namespace {

void check_dims(int width, int height)
{
    if (width < 1 || height < 1)
        throw IoError("zero-sized image");
}

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode)
{
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f)
        throw IoError("cannot open '" + path + "'");
    return f;
}

// Integer BT.601 weights; 299 + 587 + 114 = 1000, so pure white maps to
// exactly 1.0.
float luminance(unsigned r, unsigned g, unsigned b, unsigned maxval)
{
    const double num = 299.0 * r + 587.0 * g + 114.0 * b;
    const double v = num / (1000.0 * maxval);
    return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

} // namespace

FloatMap make_float_map(int width, int height, float fill)
{
    FloatMap m;
    m.width = width;
    m.height = height;
    m.samples.assign(static_cast<std::size_t>(width) * height, fill);
    return m;
}

GrayImage load_png(const std::string& path)
{
    FilePtr f = open_file(path, "rb");

    png_byte header[8];
    if (std::fread(header, 1, 8, f.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw IoError("'" + path + "' is not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng initialization failed");
    }
    std::vector<png_byte> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG '" + path + "'");
    }

    png_init_io(png, f.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // Normalize everything to 8-bit RGB.
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const std::size_t row_bytes = png_get_rowbytes(png, info);

    data.resize(row_bytes * height);
    rows.resize(height);
    for (int y = 0; y < height; ++y)
        rows[y] = data.data() + row_bytes * y;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);

    check_dims(width, height);
    GrayImage img;
    img.width = width;
    img.height = height;
    img.samples.resize(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const png_byte* row = data.data() + row_bytes * y;
        for (int x = 0; x < width; ++x)
            img.at(x, y) = luminance(row[3 * x], row[3 * x + 1], row[3 * x + 2], 255);
    }
    return img;
}

namespace {

// Reads one whitespace/comment-separated PNM header token.
std::string pnm_token(std::FILE* f)
{
    std::string tok;
    int c;
    while ((c = std::fgetc(f)) != EOF) {
        if (c == '#') {
            while ((c = std::fgetc(f)) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty())
                break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty())
        throw IoError("truncated PNM header");
    return tok;
}

int pnm_int(std::FILE* f)
{
    const std::string tok = pnm_token(f);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw IoError("malformed PNM header token '" + tok + "'");
    }
}

} // namespace

GrayImage load_pgm(const std::string& path)
{
    FilePtr f = open_file(path, "rb");
    if (pnm_token(f.get()) != "P5")
        throw IoError("'" + path + "' is not a binary PGM (P5) file");
    const int width = pnm_int(f.get());
    const int height = pnm_int(f.get());
    const int maxval = pnm_int(f.get());
    check_dims(width, height);
    if (maxval < 1 || maxval > 255)
        throw IoError("unsupported PGM maxval " + std::to_string(maxval) + " (8-bit only)");

    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<std::uint8_t> raw(n);
    if (std::fread(raw.data(), 1, n, f.get()) != n)
        throw IoError("truncated PGM raster in '" + path + "'");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        img.samples[i] = static_cast<float>(raw[i]) / static_cast<float>(maxval);
    return img;
}

GrayImage load_image(const std::string& path)
{
    FilePtr f = open_file(path, "rb");
    unsigned char magic[2] = {0, 0};
    const std::size_t got = std::fread(magic, 1, 2, f.get());
    f.reset();
    if (got == 2 && magic[0] == 0x89 && magic[1] == 'P')
        return load_png(path);
    if (got == 2 && magic[0] == 'P' && magic[1] == '5')
        return load_pgm(path);
    throw IoError("unsupported image format in '" + path + "' (expected PNG or binary PGM)");
}

GrayImage downsample(const GrayImage& img, int factor)
{
    if (factor < 1)
        throw std::invalid_argument("downsample factor must be >= 1");
    if (factor == 1)
        return img;

    GrayImage out;
    out.width = (img.width + factor - 1) / factor;
    out.height = (img.height + factor - 1) / factor;
    out.samples.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int oy = 0; oy < out.height; ++oy) {
        const int y0 = oy * factor;
        const int y1 = std::min(y0 + factor, img.height);
        for (int ox = 0; ox < out.width; ++ox) {
            const int x0 = ox * factor;
            const int x1 = std::min(x0 + factor, img.width);
            double sum = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    sum += img.at(x, y);
            out.at(ox, oy) = static_cast<float>(sum / ((y1 - y0) * (x1 - x0)));
        }
    }
    return out;
}

void save_float_map(const FloatMap& map, const std::string& path)
{
    check_dims(map.width, map.height);
    for (float v : map.samples)
        if (!std::isfinite(v))
            throw std::invalid_argument("refusing to save float map with non-finite samples");

    static_assert(std::endian::native == std::endian::little, "PFM writer assumes little-endian host");
    FilePtr f = open_file(path, "wb");
    std::ostringstream header;
    header << "Pf\n" << map.width << " " << map.height << "\n-1.0\n";
    const std::string h = header.str();
    if (std::fwrite(h.data(), 1, h.size(), f.get()) != h.size())
        throw IoError("write failed for '" + path + "'");
    // PFM scanlines run bottom-to-top.
    for (int y = map.height - 1; y >= 0; --y) {
        const float* row = map.samples.data() + static_cast<std::size_t>(y) * map.width;
        if (std::fwrite(row, sizeof(float), map.width, f.get()) != static_cast<std::size_t>(map.width))
            throw IoError("write failed for '" + path + "'");
    }
    if (std::fflush(f.get()) != 0)
        throw IoError("write failed for '" + path + "'");
}

FloatMap load_float_map(const std::string& path)
{
    FilePtr f = open_file(path, "rb");
    if (pnm_token(f.get()) != "Pf")
        throw IoError("'" + path + "' is not a grayscale PFM file");
    const int width = pnm_int(f.get());
    const int height = pnm_int(f.get());
    double scale = 0.0;
    try {
        scale = std::stod(pnm_token(f.get()));
    } catch (const std::exception&) {
        throw IoError("malformed PFM scale line in '" + path + "'");
    }
    check_dims(width, height);
    if (scale == 0.0)
        throw IoError("malformed PFM scale line in '" + path + "'");

    FloatMap map;
    map.width = width;
    map.height = height;
    map.samples.resize(static_cast<std::size_t>(width) * height);
    for (int y = height - 1; y >= 0; --y) {
        float* row = map.samples.data() + static_cast<std::size_t>(y) * width;
        if (std::fread(row, sizeof(float), width, f.get()) != static_cast<std::size_t>(width))
            throw IoError("truncated PFM raster in '" + path + "'");
    }
    if (scale > 0.0) { // big-endian file
        for (float& v : map.samples) {
            std::uint32_t bits;
            std::memcpy(&bits, &v, 4);
            bits = __builtin_bswap32(bits);
            std::memcpy(&v, &bits, 4);
        }
    }
    for (float v : map.samples)
        if (!std::isfinite(v))
            throw IoError("non-finite sample in float map '" + path + "'");
    return map;
}

namespace {

void write_pgm_bytes(const std::vector<std::uint8_t>& bytes, int width, int height,
                     const std::string& path)
{
    FilePtr f = open_file(path, "wb");
    std::ostringstream header;
    header << "P5\n" << width << " " << height << "\n255\n";
    const std::string h = header.str();
    if (std::fwrite(h.data(), 1, h.size(), f.get()) != h.size() ||
        std::fwrite(bytes.data(), 1, bytes.size(), f.get()) != bytes.size() ||
        std::fflush(f.get()) != 0)
        throw IoError("write failed for '" + path + "'");
}

} // namespace

void save_pgm(const GrayImage& img, const std::string& path)
{
    check_dims(img.width, img.height);
    std::vector<std::uint8_t> bytes(img.samples.size());
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = static_cast<std::uint8_t>(std::lround(std::clamp(img.samples[i], 0.0f, 1.0f) * 255.0f));
    write_pgm_bytes(bytes, img.width, img.height, path);
}

void save_pgm(const FloatMap& map, const std::string& path)
{
    check_dims(map.width, map.height);
    const auto [mn, mx] = std::minmax_element(map.samples.begin(), map.samples.end());
    const float lo = *mn, range = *mx - *mn;
    std::vector<std::uint8_t> bytes(map.samples.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const float v = range > 0.0f ? (map.samples[i] - lo) / range : 0.0f;
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    write_pgm_bytes(bytes, map.width, map.height, path);
}

namespace {

void write_png_rows(int width, int height, int color_type, const std::vector<png_bytep>& rows,
                    const std::string& path)
{
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to write PNG '" + path + "'");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, const_cast<png_bytep*>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

void save_png(const RgbImage& img, const std::string& path)
{
    check_dims(img.width, img.height);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.samples.data() + static_cast<std::size_t>(y) * img.width * 3);
    write_png_rows(img.width, img.height, PNG_COLOR_TYPE_RGB, rows, path);
}

void save_png(const GrayImage& img, const std::string& path)
{
    check_dims(img.width, img.height);
    std::vector<std::uint8_t> bytes(img.samples.size());
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = static_cast<std::uint8_t>(std::lround(std::clamp(img.samples[i], 0.0f, 1.0f) * 255.0f));
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * img.width;
    write_png_rows(img.width, img.height, PNG_COLOR_TYPE_GRAY, rows, path);
}

} // namespace torque
