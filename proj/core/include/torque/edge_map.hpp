#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torque/geometry.hpp"
#include "torque/image.hpp"

namespace torque {

// Sobel partial derivatives in luminance-per-pixel units.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<float> gx;
    std::vector<float> gy;
    std::vector<float> magnitude;

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

// Binary oriented edges. bins[i] is 0 for no edge, otherwise the 1-based
// orientation bin whose direction is (bin-1) * pi/4; at most one bin per
// pixel by construction.
struct OrientedEdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bins;

    int bin_at(int x, int y) const { return bins[static_cast<std::size_t>(y) * width + x]; }
    std::size_t edge_count() const;
};

OrientedEdgeMap make_edge_map(int width, int height);

// 3x3 Sobel with border replication, scaled so a unit-slope ramp has
// derivative 1. Requires at least a 3x3 image.
GradientField gradient(const GrayImage& img);

// Edge direction is the gradient rotated clockwise (in the y-down frame):
// brighter side on the walker's right, darker on the left. Throws on a
// zero gradient.
Vec2 edge_direction(Vec2 grad);

// Threshold is a fraction of the max gradient magnitude. Survivors of
// non-maximum suppression along the gradient direction get the nearest of
// the 8 orientation bins, ties toward the lower index.
OrientedEdgeMap detect_edges(const GradientField& grad, double threshold);

// Thresholds an external edge-strength map (fraction of its max) and
// orients surviving pixels by the image gradient; zero-gradient survivors
// are dropped. No suppression is applied, external maps are assumed
// already thinned.
OrientedEdgeMap import_edges(const FloatMap& strength, const GradientField& grad, double threshold);

// Single PGM, pixel value = bin index (0 = no edge, 1..8).
void save_edge_map(const OrientedEdgeMap& edges, const std::string& path);
OrientedEdgeMap load_edge_map(const std::string& path);

// Stack of 8 concatenated binary PGM planes, one indicator plane per bin.
void save_edge_map_planes(const OrientedEdgeMap& edges, const std::string& path);
OrientedEdgeMap load_edge_map_planes(const std::string& path);

// Flips every edge orientation (bin -> bin + 4 mod 8), the discrete
// equivalent of inverting image contrast.
OrientedEdgeMap flip_orientations(const OrientedEdgeMap& edges);

} // namespace torque
