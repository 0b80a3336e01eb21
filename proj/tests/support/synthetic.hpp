#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "torque/edge_map.hpp"
#include "torque/image.hpp"

namespace torque::testing {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

// All sample values are multiples of 1/256 so that contrast inversion
// (1 - I) is exact in float arithmetic.
GrayImage constant_image(int width, int height, double value);
GrayImage filled_rect_image(int width, int height, int x0, int y0, int x1, int y1,
                            double inside, double outside);
GrayImage filled_disk_image(int width, int height, double cx, double cy, double radius,
                            double inside, double outside);
// Filled axis-aligned isoceles triangle: apex at (cx, top), base at bottom.
GrayImage filled_triangle_image(int width, int height, int cx, int top, int bottom,
                                double inside, double outside);

GrayImage invert(const GrayImage& img);

// Clockwise-on-screen quarter turn: (x, y) -> (height-1-y, x). Directions
// rotate by +90 degrees, orientation bins by +2.
GrayImage rotate90(const GrayImage& img);
OrientedEdgeMap rotate90(const OrientedEdgeMap& edges);

// Edge ring of a square contour with a darker interior (walk: top west,
// left south, bottom east, right north). side must be odd and >= 3.
OrientedEdgeMap square_ring_edges(int width, int height, int cx, int cy, int side);

// Edge pixels on a circle with a darker interior.
OrientedEdgeMap circle_edges(int width, int height, double cx, double cy, double radius);

// Exactly `count` random edge pixels with random orientations.
OrientedEdgeMap scattered_edges(int width, int height, std::size_t count, std::uint64_t seed);

// Ten 129x129 smooth scenes (broad Gaussians, gentle gratings, ramps,
// quadratics) for the gradient-torque equivalence checks.
std::vector<GrayImage> smooth_test_images();

} // namespace torque::testing
