#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "torque/edge_map.hpp"
#include "torque/geometry.hpp"
#include "torque/image.hpp"

namespace torque {

// Prefix-sum table over a W x H grid with one guard row/column of zeros;
// any axis-aligned rectangle sum is three additions away.
class SummedAreaTable {
public:
    SummedAreaTable() = default;

    template <class ValueAt>
    SummedAreaTable(int width, int height, ValueAt&& value_at)
        : width_(width), height_(height),
          cum_(static_cast<std::size_t>(width + 1) * (height + 1), 0.0)
    {
        const std::size_t stride = static_cast<std::size_t>(width_) + 1;
        for (int y = 0; y < height_; ++y) {
            double row_sum = 0.0;
            const double* above = cum_.data() + static_cast<std::size_t>(y) * stride;
            double* cur = cum_.data() + static_cast<std::size_t>(y + 1) * stride;
            for (int x = 0; x < width_; ++x) {
                row_sum += value_at(x, y);
                cur[x + 1] = above[x + 1] + row_sum;
            }
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }

    // Inclusive-rectangle sum, clamped to the grid; empty after clamping
    // yields zero.
    double rectangle_sum(int x0, int y0, int x1, int y1) const;

    // Unclamped variant; caller guarantees 0 <= x0 <= x1 < width etc.
    double rectangle_sum_unchecked(int x0, int y0, int x1, int y1) const
    {
        const std::size_t stride = static_cast<std::size_t>(width_) + 1;
        const double* top = cum_.data() + static_cast<std::size_t>(y0) * stride;
        const double* bot = cum_.data() + static_cast<std::size_t>(y1 + 1) * stride;
        return bot[x1 + 1] - bot[x0] - top[x1 + 1] + top[x0];
    }

    double total() const { return cum_.back(); }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> cum_;
};

// Square patch of odd side centered at an integer pixel. Patches may hang
// over the image border; operations clip them and normalize by the
// clipped area.
struct Patch {
    int cx = 0;
    int cy = 0;
    int side = 0;
};

struct PatchBounds {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

    bool empty() const { return x1 < x0 || y1 < y0; }
    long long area() const
    {
        return empty() ? 0 : static_cast<long long>(x1 - x0 + 1) * (y1 - y0 + 1);
    }
};

PatchBounds clip_patch(const Patch& patch, int width, int height);

// Per-bin summed area tables of the edge indicators and of the
// origin-referenced torque values (x sin t_i - y cos t_i) at edge pixels.
// Immutable once built; rebuild after any edge map change.
class TorquePrecompute {
public:
    explicit TorquePrecompute(const OrientedEdgeMap& edges);

    int width() const { return width_; }
    int height() const { return height_; }
    const SummedAreaTable& count_table(int bin0) const { return counts_[bin0]; }
    const SummedAreaTable& origin_torque_table(int bin0) const { return origin_torque_[bin0]; }

private:
    int width_ = 0;
    int height_ = 0;
    std::array<SummedAreaTable, kOrientationBins> counts_;
    std::array<SummedAreaTable, kOrientationBins> origin_torque_;
};

// Scalar torque of a unit force at q with direction dir, measured about p.
inline double point_torque(Vec2 p, Vec2 q, Vec2 dir)
{
    return cross(q - p, dir);
}

// Direct per-pixel summation with quantized bin directions:
// tau = sum / (2 Z), Z = |P|^(alpha/2) over the clipped patch area.
double patch_torque_naive(const OrientedEdgeMap& edges, const Patch& patch, double alpha);

// Secondary oracle using the exact (unquantized) edge directions from the
// gradient field instead of the bins.
double patch_torque_continuous(const OrientedEdgeMap& edges, const GradientField& grad,
                               const Patch& patch, double alpha);

TorquePrecompute build_precompute(const OrientedEdgeMap& edges);

// O(1) torque of the side x side patch centered at (x, y).
double torque_at(const TorquePrecompute& pre, int x, int y, int side, double alpha);

// Full torque map via 16 rectangle queries per pixel; numerically equal to
// the naive path at every pixel.
FloatMap torque_map_fast(const TorquePrecompute& pre, int side, double alpha);
// Same values before the float32 narrowing, for oracle comparisons.
std::vector<double> torque_map_fast_values(const TorquePrecompute& pre, int side, double alpha);

struct TorqueVolume {
    int width = 0;
    int height = 0;
    double alpha = 2.0;
    std::vector<int> scales;     // strictly increasing odd sides
    std::vector<FloatMap> slices;
};

// Odd sides 3 to 91 step 4 (23 scales).
std::vector<int> default_scales();

TorqueVolume torque_volume(const OrientedEdgeMap& edges, std::span<const int> scales, double alpha);

struct ValueScaleMaps {
    FloatMap value; // V: signed torque of largest magnitude over scales
    FloatMap scale; // S: sign(V) * selected scale, 0 where V is 0
};

// Scale selection: smallest scale wins ties of |tau|.
ValueScaleMaps reduce_volume(const TorqueVolume& vol);

// One PFM per scale next to a JSON manifest {scales, alpha, width, height,
// slices}.
void save_volume(const TorqueVolume& vol, const std::string& manifest_path);
TorqueVolume load_volume(const std::string& manifest_path);

} // namespace torque
