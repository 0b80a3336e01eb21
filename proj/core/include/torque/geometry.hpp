#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace torque {

// Image coordinates: x grows rightward, y grows downward, origin at the
// top-left pixel center. All angles are measured in this frame, so the
// scalar cross product r x F = rx*Fy - ry*Fx is negative for edges that
// circle a darker interior.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline constexpr int kOrientationBins = 8;

// Unit direction of orientation bin b (0-based), at angle b * pi/4.
// Bin values stored in edge maps are 1-based; subtract one before lookup.
inline const std::array<Vec2, kOrientationBins>& bin_directions()
{
    static const std::array<Vec2, kOrientationBins> dirs = [] {
        const double h = std::numbers::sqrt2 / 2.0;
        return std::array<Vec2, kOrientationBins>{{
            {1.0, 0.0}, {h, h}, {0.0, 1.0}, {-h, h},
            {-1.0, 0.0}, {-h, -h}, {0.0, -1.0}, {h, -h},
        }};
    }();
    return dirs;
}

// Nearest orientation bin (0-based) for a direction vector; exact ties go
// to the lower index.
inline int nearest_bin(Vec2 dir)
{
    const auto& dirs = bin_directions();
    int best = 0;
    double best_dot = dot(dir, dirs[0]);
    for (int i = 1; i < kOrientationBins; ++i) {
        const double d = dot(dir, dirs[i]);
        if (d > best_dot) {
            best_dot = d;
            best = i;
        }
    }
    return best;
}

} // namespace torque
