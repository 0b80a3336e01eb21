#include "torque/mst.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace torque {

namespace {

int round_to_odd(double v)
{
    const int n = static_cast<int>(std::lround(v));
    return n % 2 == 0 ? n + 1 : n;
}

void validate_config(const MstConfig& cfg)
{
    if (cfg.n_steps < 1)
        throw std::invalid_argument("MST n_steps must be at least 1");
    if (cfg.scale_factors.empty())
        throw std::invalid_argument("MST scale factor list must not be empty");
    for (double f : cfg.scale_factors)
        if (!(f > 0.0))
            throw std::invalid_argument("MST scale factors must be positive");
}

} // namespace

int align_orientation(const Patch& patch, const OrientedEdgeMap& edges)
{
    const PatchBounds b = clip_patch(patch, edges.width, edges.height);
    if (b.empty())
        throw std::invalid_argument("patch does not intersect the image");

    double sx = 0.0, sy = 0.0;
    long long count = 0;
    for (int y = b.y0; y <= b.y1; ++y) {
        for (int x = b.x0; x <= b.x1; ++x) {
            if (!edges.bin_at(x, y))
                continue;
            sx += x;
            sy += y;
            ++count;
        }
    }
    if (count == 0)
        return 0;
    const Vec2 to_centroid{sx / count - patch.cx, sy / count - patch.cy};
    if (norm(to_centroid) == 0.0)
        return 0;
    return nearest_bin(to_centroid);
}

MstDescriptor mst_descriptor(const TorquePrecompute& pre, const Patch& patch,
                             const MstConfig& cfg, int rotation_index)
{
    validate_config(cfg);
    if (rotation_index < 0 || rotation_index >= kOrientationBins)
        throw std::invalid_argument("rotation index must lie in [0,8)");

    const int w = pre.width(), h = pre.height();
    const int max_side = std::min(w, h) % 2 == 1 ? std::min(w, h) : std::min(w, h) - 1;
    const double step = static_cast<double>(patch.side) / (2.0 * cfg.n_steps);

    MstDescriptor d;
    d.patch = patch;
    d.rotation_index = rotation_index;
    d.values.reserve(cfg.descriptor_length());

    // Offsets are rounded before adding the integer center so that
    // quantization commutes with quarter-turn rotations of the content.
    auto sample = [&](double dx, double dy, int side) {
        const int x = std::clamp(patch.cx + static_cast<int>(std::lround(dx)), 0, w - 1);
        const int y = std::clamp(patch.cy + static_cast<int>(std::lround(dy)), 0, h - 1);
        const double v = torque_at(pre, x, y, side, cfg.alpha);
        return cfg.magnitudes ? std::fabs(v) : v;
    };

    for (double factor : cfg.scale_factors) {
        const int side = std::min(std::max(round_to_odd(factor * patch.side), 3), max_side);
        d.values.push_back(sample(0.0, 0.0, side));
        // Direction blocks start at the aligned direction.
        for (int k = 0; k < kOrientationBins; ++k) {
            const int dir = (k + rotation_index) % kOrientationBins;
            const Vec2 u = bin_directions()[dir];
            for (int j = 1; j <= cfg.n_steps; ++j)
                d.values.push_back(sample(j * step * u.x, j * step * u.y, side));
        }
    }
    return d;
}

MstDescriptor mst_descriptor(const TorquePrecompute& pre, const OrientedEdgeMap& edges,
                             const Patch& patch, const MstConfig& cfg)
{
    return mst_descriptor(pre, patch, cfg, align_orientation(patch, edges));
}

std::string descriptor_to_json(const MstDescriptor& d)
{
    nlohmann::json j;
    j["patch"] = {{"x", d.patch.cx}, {"y", d.patch.cy}, {"side", d.patch.side}};
    j["rotation_index"] = d.rotation_index;
    j["values"] = d.values;
    return j.dump();
}

} // namespace torque
