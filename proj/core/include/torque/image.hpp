#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace torque {

// Grayscale image with luminance samples in [0,1], row-major, y downward.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> samples;

    float at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return samples.size(); }
};

// Signed real-valued map with the same geometry as its source image.
// Serialized as PFM (32-bit floats), so samples are stored as float.
struct FloatMap {
    int width = 0;
    int height = 0;
    std::vector<float> samples;

    float at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return samples.size(); }
};

// Per-pixel {0,1} mask, used by the precision/recall evaluation.
struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    bool at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x] != 0; }
};

// Interleaved 8-bit RGB, used only for rendered outputs.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples; // 3 bytes per pixel
};

FloatMap make_float_map(int width, int height, float fill = 0.0f);

// Loads a PNG or binary PGM (detected by magic bytes) as luminance.
// Color inputs are converted with fixed weights 0.299/0.587/0.114.
GrayImage load_image(const std::string& path);

GrayImage load_png(const std::string& path);
GrayImage load_pgm(const std::string& path);

// Block-mean downsampling; output dims are ceil(dims/factor) and partial
// border blocks average over the pixels they actually cover.
GrayImage downsample(const GrayImage& img, int factor);

// PFM, header "Pf", scale -1.0 (little-endian), bottom-to-top scanlines.
// Saving a map with non-finite samples is rejected.
void save_float_map(const FloatMap& map, const std::string& path);
FloatMap load_float_map(const std::string& path);

void save_pgm(const GrayImage& img, const std::string& path);
// 8-bit PGM rendering of a map: samples min-max scaled to 0..255.
void save_pgm(const FloatMap& map, const std::string& path);

void save_png(const RgbImage& img, const std::string& path);
void save_png(const GrayImage& img, const std::string& path);

} // namespace torque
