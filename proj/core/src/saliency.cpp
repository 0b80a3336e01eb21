#include "torque/saliency.hpp"

#include <algorithm>
#include <cmath>

#include "torque/detail/parallel.hpp"

namespace torque {

namespace {

FloatMap minmax_normalized(const std::vector<double>& acc, int width, int height)
{
    FloatMap out = make_float_map(width, height);
    const auto [mn, mx] = std::minmax_element(acc.begin(), acc.end());
    const double lo = *mn, range = *mx - *mn;
    if (range > 0.0) {
        for (std::size_t i = 0; i < acc.size(); ++i)
            out.samples[i] = static_cast<float>((acc[i] - lo) / range);
    } else if (*mx > 0.0) {
        std::fill(out.samples.begin(), out.samples.end(), 1.0f);
    }
    return out;
}

} // namespace

SaliencyMap saliency_from_extrema(std::span<const TorqueExtremum> extrema, double sigma,
                                  int width, int height, bool weight_by_value)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("saliency sigma must be positive");
    if (width < 1 || height < 1)
        throw std::invalid_argument("saliency dimensions must be positive");

    SaliencyMap out;
    out.sigma = sigma;
    if (extrema.empty()) {
        out.map = make_float_map(width, height);
        return out;
    }

    double max_abs = 0.0;
    for (const TorqueExtremum& e : extrema)
        max_abs = std::max(max_abs, std::fabs(e.value));

    std::vector<double> acc(static_cast<std::size_t>(width) * height, 0.0);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    detail::parallel_rows(height, [&](int y) {
        double* row = acc.data() + static_cast<std::size_t>(y) * width;
        for (const TorqueExtremum& e : extrema) {
            const double wgt = (weight_by_value && max_abs > 0.0) ? std::fabs(e.value) / max_abs : 1.0;
            const double dy = static_cast<double>(y - e.y);
            for (int x = 0; x < width; ++x) {
                const double dx = static_cast<double>(x - e.x);
                row[x] += wgt * std::exp(-(dx * dx + dy * dy) * inv2s2);
            }
        }
    });

    out.map = minmax_normalized(acc, width, height);
    return out;
}

SaliencyMap blend_saliency(const SaliencyMap& torque_saliency, const FloatMap& external, double w)
{
    const FloatMap& t = torque_saliency.map;
    if (t.width != external.width || t.height != external.height)
        throw std::invalid_argument("saliency blend dimensions do not match");
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("saliency blend weight must lie in [0,1]");

    std::vector<double> acc(t.samples.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] = w * t.samples[i] + (1.0 - w) * external.samples[i];

    SaliencyMap out;
    out.sigma = torque_saliency.sigma;
    out.map = minmax_normalized(acc, t.width, t.height);
    return out;
}

} // namespace torque
