#include "torque/extrema.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json.hpp"

#include "torque/errors.hpp"

namespace torque {

namespace {

bool ordered_before(const TorqueExtremum& a, const TorqueExtremum& b)
{
    const double ma = std::fabs(a.value), mb = std::fabs(b.value);
    if (ma != mb)
        return ma > mb;
    return std::tie(a.scale, a.y, a.x) < std::tie(b.scale, b.y, b.x);
}

} // namespace

ExtremaResult find_extrema(const TorqueVolume& vol, int k)
{
    if (k <= 0)
        throw std::invalid_argument("extrema count k must be positive");
    if (vol.slices.empty())
        throw std::invalid_argument("torque volume has no scales");

    const int w = vol.width, h = vol.height;
    const int ns = static_cast<int>(vol.slices.size());
    auto value = [&](int x, int y, int s) { return vol.slices[s].samples[static_cast<std::size_t>(y) * w + x]; };

    ExtremaResult out;
    for (int s = 0; s < ns; ++s) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const float v = value(x, y, s);
                if (v == 0.0f)
                    continue;
                bool is_max = v > 0.0f;
                bool is_min = v < 0.0f;
                for (int ds = -1; ds <= 1 && (is_max || is_min); ++ds) {
                    const int s2 = s + ds;
                    if (s2 < 0 || s2 >= ns)
                        continue;
                    for (int dy = -1; dy <= 1; ++dy) {
                        const int y2 = y + dy;
                        if (y2 < 0 || y2 >= h)
                            continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int x2 = x + dx;
                            if (x2 < 0 || x2 >= w || (dx == 0 && dy == 0 && ds == 0))
                                continue;
                            const float n = value(x2, y2, s2);
                            if (v <= n)
                                is_max = false;
                            if (v >= n)
                                is_min = false;
                        }
                    }
                }
                if (is_max)
                    out.maxima.push_back({x, y, vol.scales[s], v, Polarity::maximum});
                else if (is_min)
                    out.minima.push_back({x, y, vol.scales[s], v, Polarity::minimum});
            }
        }
    }

    std::sort(out.maxima.begin(), out.maxima.end(), ordered_before);
    std::sort(out.minima.begin(), out.minima.end(), ordered_before);
    if (static_cast<int>(out.maxima.size()) > k)
        out.maxima.resize(k);
    if (static_cast<int>(out.minima.size()) > k)
        out.minima.resize(k);
    return out;
}

std::vector<Patch> mtp_patches(const ExtremaResult& extrema, PolarityFilter filter)
{
    std::vector<Patch> patches;
    auto add = [&](const std::vector<TorqueExtremum>& list) {
        for (const TorqueExtremum& e : list)
            patches.push_back({e.x, e.y, e.scale});
    };
    if (filter != PolarityFilter::minima)
        add(extrema.maxima);
    if (filter != PolarityFilter::maxima)
        add(extrema.minima);
    return patches;
}

namespace {

nlohmann::json to_json(const TorqueExtremum& e)
{
    return {{"x", e.x}, {"y", e.y}, {"scale", e.scale}, {"value", e.value},
            {"polarity", e.polarity == Polarity::maximum ? "maximum" : "minimum"}};
}

TorqueExtremum extremum_from(const nlohmann::json& j)
{
    TorqueExtremum e;
    e.x = j.at("x").get<int>();
    e.y = j.at("y").get<int>();
    e.scale = j.at("scale").get<int>();
    e.value = j.at("value").get<double>();
    const std::string p = j.at("polarity").get<std::string>();
    if (p == "maximum")
        e.polarity = Polarity::maximum;
    else if (p == "minimum")
        e.polarity = Polarity::minimum;
    else
        throw IoError("unknown extremum polarity '" + p + "'");
    return e;
}

} // namespace

std::string extrema_to_json(const ExtremaResult& extrema)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const TorqueExtremum& e : extrema.maxima)
        arr.push_back(to_json(e));
    for (const TorqueExtremum& e : extrema.minima)
        arr.push_back(to_json(e));
    return arr.dump(2);
}

ExtremaResult extrema_from_json(const std::string& text)
{
    ExtremaResult out;
    try {
        const nlohmann::json arr = nlohmann::json::parse(text);
        for (const auto& j : arr) {
            const TorqueExtremum e = extremum_from(j);
            (e.polarity == Polarity::maximum ? out.maxima : out.minima).push_back(e);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw IoError(std::string("malformed extrema JSON: ") + ex.what());
    }
    return out;
}

} // namespace torque
