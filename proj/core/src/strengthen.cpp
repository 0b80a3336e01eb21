#include "torque/strengthen.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace torque {

namespace {

// Top n extrema of either polarity, ranked by |value| with the find_extrema
// tie order.
std::vector<TorqueExtremum> select_extrema(const TorqueVolume& vol, int top_n)
{
    const ExtremaResult found = find_extrema(vol, top_n);
    std::vector<TorqueExtremum> all;
    all.reserve(found.maxima.size() + found.minima.size());
    all.insert(all.end(), found.maxima.begin(), found.maxima.end());
    all.insert(all.end(), found.minima.begin(), found.minima.end());
    std::sort(all.begin(), all.end(), [](const TorqueExtremum& a, const TorqueExtremum& b) {
        const double ma = std::fabs(a.value), mb = std::fabs(b.value);
        if (ma != mb)
            return ma > mb;
        return std::tie(a.scale, a.y, a.x) < std::tie(b.scale, b.y, b.x);
    });
    if (static_cast<int>(all.size()) > top_n)
        all.resize(top_n);
    return all;
}

} // namespace

FloatMap edge_contribution(const OrientedEdgeMap& edges, const TorqueVolume& vol, int top_n,
                           bool full_sum)
{
    if (top_n < 1)
        throw std::invalid_argument("edge contribution needs at least one extremal patch");
    if (edges.width != vol.width || edges.height != vol.height)
        throw std::invalid_argument("edge map and volume dimensions do not match");

    const int w = edges.width, h = edges.height;
    std::vector<double> acc(static_cast<std::size_t>(w) * h, 0.0);

    if (full_sum) {
        // Closed form of the center sums: patches of side s containing q
        // have centers in a clipped window around q.
        for (int idx = 0; idx < static_cast<int>(vol.scales.size()); ++idx) {
            const int half = (vol.scales[idx] - 1) / 2;
            for (int y = 0; y < h; ++y) {
                const int cy0 = std::max(y - half, 0), cy1 = std::min(y + half, h - 1);
                const double ny = cy1 - cy0 + 1;
                const double sum_ry = ny * y - 0.5 * (cy0 + cy1) * ny; // sum of (y - cy)
                for (int x = 0; x < w; ++x) {
                    const int bin = edges.bin_at(x, y);
                    if (!bin)
                        continue;
                    const Vec2 d = bin_directions()[bin - 1];
                    const int cx0 = std::max(x - half, 0), cx1 = std::min(x + half, w - 1);
                    const double nx = cx1 - cx0 + 1;
                    const double sum_rx = nx * x - 0.5 * (cx0 + cx1) * nx;
                    acc[static_cast<std::size_t>(y) * w + x] += (sum_rx * ny) * d.y - (sum_ry * nx) * d.x;
                }
            }
        }
    } else {
        for (const TorqueExtremum& e : select_extrema(vol, top_n)) {
            const double sign = e.polarity == Polarity::maximum ? 1.0 : -1.0;
            const PatchBounds b = clip_patch({e.x, e.y, e.scale}, w, h);
            const Vec2 p{static_cast<double>(e.x), static_cast<double>(e.y)};
            for (int y = b.y0; y <= b.y1; ++y) {
                for (int x = b.x0; x <= b.x1; ++x) {
                    const int bin = edges.bin_at(x, y);
                    if (!bin)
                        continue;
                    acc[static_cast<std::size_t>(y) * w + x] +=
                        sign * point_torque(p, {static_cast<double>(x), static_cast<double>(y)},
                                            bin_directions()[bin - 1]);
                }
            }
        }
    }

    double max_v = 0.0;
    for (double& v : acc) {
        v = std::max(v, 0.0);
        max_v = std::max(max_v, v);
    }
    FloatMap out = make_float_map(w, h);
    if (max_v > 0.0)
        for (std::size_t i = 0; i < acc.size(); ++i)
            out.samples[i] = static_cast<float>(acc[i] / max_v);
    return out;
}

double strengthen_logistic(double d_o, double d_tau, double c0, double c1, double c2)
{
    return 1.0 / (1.0 + std::exp(-(c0 + c1 * d_o + c2 * d_tau)));
}

FloatMap strengthen_logistic(const FloatMap& d_o, const FloatMap& d_tau, double c0, double c1,
                             double c2)
{
    if (d_o.width != d_tau.width || d_o.height != d_tau.height)
        throw std::invalid_argument("strengthen input dimensions do not match");
    FloatMap out = make_float_map(d_o.width, d_o.height);
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = static_cast<float>(strengthen_logistic(d_o.samples[i], d_tau.samples[i], c0, c1, c2));
    return out;
}

double strengthen_linear(double d_o, double d_tau, double blend)
{
    if (!(blend >= 0.0 && blend <= 1.0))
        throw std::invalid_argument("linear strengthening blend must lie in [0,1]");
    return (1.0 - blend) * d_o + blend * d_tau;
}

FloatMap strengthen_linear(const FloatMap& d_o, const FloatMap& d_tau, double blend)
{
    if (d_o.width != d_tau.width || d_o.height != d_tau.height)
        throw std::invalid_argument("strengthen input dimensions do not match");
    if (!(blend >= 0.0 && blend <= 1.0))
        throw std::invalid_argument("linear strengthening blend must lie in [0,1]");
    FloatMap out = make_float_map(d_o.width, d_o.height);
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = static_cast<float>((1.0 - blend) * d_o.samples[i] + blend * d_tau.samples[i]);
    return out;
}

FloatMap strengthen(const FloatMap& d_o, const FloatMap& d_tau, const StrengthenConfig& cfg)
{
    if (cfg.mode == StrengthenConfig::Mode::logistic)
        return strengthen_logistic(d_o, d_tau, cfg.c0, cfg.c1, cfg.c2);
    return strengthen_linear(d_o, d_tau, cfg.blend);
}

} // namespace torque
