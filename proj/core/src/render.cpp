#include "torque/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torque {

RgbImage render_signed_map(const FloatMap& map)
{
    for (float v : map.samples)
        if (!std::isfinite(v))
            throw std::invalid_argument("cannot render a map with non-finite samples");

    float max_abs = 0.0f;
    for (float v : map.samples)
        max_abs = std::max(max_abs, std::fabs(v));

    RgbImage img;
    img.width = map.width;
    img.height = map.height;
    img.samples.assign(map.samples.size() * 3, 0);
    if (max_abs == 0.0f)
        return img;

    for (std::size_t i = 0; i < map.samples.size(); ++i) {
        const float v = map.samples[i];
        const float pos = v > 0.0f ? v / max_abs : 0.0f;
        const float neg = v < 0.0f ? -v / max_abs : 0.0f;
        img.samples[3 * i] = static_cast<std::uint8_t>(std::lround(pos * 255.0f));
        img.samples[3 * i + 2] = static_cast<std::uint8_t>(std::lround(neg * 255.0f));
    }
    return img;
}

} // namespace torque
