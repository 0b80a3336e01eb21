#include "torque/torque_op.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "torque/detail/parallel.hpp"
#include "torque/errors.hpp"

namespace torque {

namespace {

void validate_side(int side, int width, int height)
{
    if (side < 3 || side % 2 == 0 || side > std::min(width, height))
        throw std::invalid_argument("patch side must be odd and within [3, min(width, height)], got " +
                                    std::to_string(side));
}

double normalization(long long area, double alpha)
{
    return std::pow(static_cast<double>(area), alpha / 2.0);
}

} // namespace

double SummedAreaTable::rectangle_sum(int x0, int y0, int x1, int y1) const
{
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width_ - 1);
    y1 = std::min(y1, height_ - 1);
    if (x1 < x0 || y1 < y0)
        return 0.0;
    return rectangle_sum_unchecked(x0, y0, x1, y1);
}

PatchBounds clip_patch(const Patch& patch, int width, int height)
{
    const int h = (patch.side - 1) / 2;
    PatchBounds b;
    b.x0 = std::max(patch.cx - h, 0);
    b.y0 = std::max(patch.cy - h, 0);
    b.x1 = std::min(patch.cx + h, width - 1);
    b.y1 = std::min(patch.cy + h, height - 1);
    return b;
}

TorquePrecompute::TorquePrecompute(const OrientedEdgeMap& edges)
    : width_(edges.width), height_(edges.height)
{
    for (int b = 0; b < kOrientationBins; ++b) {
        const std::uint8_t want = static_cast<std::uint8_t>(b + 1);
        counts_[b] = SummedAreaTable(width_, height_, [&](int x, int y) {
            return edges.bins[static_cast<std::size_t>(y) * width_ + x] == want ? 1.0 : 0.0;
        });
        const Vec2 d = bin_directions()[b];
        origin_torque_[b] = SummedAreaTable(width_, height_, [&](int x, int y) {
            if (edges.bins[static_cast<std::size_t>(y) * width_ + x] != want)
                return 0.0;
            return static_cast<double>(x) * d.y - static_cast<double>(y) * d.x;
        });
    }
}

TorquePrecompute build_precompute(const OrientedEdgeMap& edges)
{
    return TorquePrecompute(edges);
}

double patch_torque_naive(const OrientedEdgeMap& edges, const Patch& patch, double alpha)
{
    validate_side(patch.side, edges.width, edges.height);
    const PatchBounds b = clip_patch(patch, edges.width, edges.height);
    if (b.empty())
        throw std::invalid_argument("patch does not intersect the image");

    const Vec2 p{static_cast<double>(patch.cx), static_cast<double>(patch.cy)};
    double sum = 0.0;
    for (int y = b.y0; y <= b.y1; ++y) {
        for (int x = b.x0; x <= b.x1; ++x) {
            const int bin = edges.bin_at(x, y);
            if (!bin)
                continue;
            sum += point_torque(p, {static_cast<double>(x), static_cast<double>(y)},
                                bin_directions()[bin - 1]);
        }
    }
    return sum / (2.0 * normalization(b.area(), alpha));
}

double patch_torque_continuous(const OrientedEdgeMap& edges, const GradientField& grad,
                               const Patch& patch, double alpha)
{
    validate_side(patch.side, edges.width, edges.height);
    if (grad.width != edges.width || grad.height != edges.height)
        throw std::invalid_argument("gradient field dimensions do not match the edge map");
    const PatchBounds b = clip_patch(patch, edges.width, edges.height);
    if (b.empty())
        throw std::invalid_argument("patch does not intersect the image");

    const Vec2 p{static_cast<double>(patch.cx), static_cast<double>(patch.cy)};
    double sum = 0.0;
    for (int y = b.y0; y <= b.y1; ++y) {
        for (int x = b.x0; x <= b.x1; ++x) {
            const std::size_t i = grad.index(x, y);
            if (!edges.bins[i])
                continue;
            const Vec2 g{grad.gx[i], grad.gy[i]};
            if (norm(g) == 0.0)
                continue;
            sum += point_torque(p, {static_cast<double>(x), static_cast<double>(y)},
                                edge_direction(g));
        }
    }
    return sum / (2.0 * normalization(b.area(), alpha));
}

double torque_at(const TorquePrecompute& pre, int x, int y, int side, double alpha)
{
    validate_side(side, pre.width(), pre.height());
    const PatchBounds b = clip_patch({x, y, side}, pre.width(), pre.height());
    if (b.empty())
        throw std::invalid_argument("patch does not intersect the image");

    double sum = 0.0;
    for (int i = 0; i < kOrientationBins; ++i) {
        const Vec2 d = bin_directions()[i];
        const double cnt = pre.count_table(i).rectangle_sum_unchecked(b.x0, b.y0, b.x1, b.y1);
        const double tor = pre.origin_torque_table(i).rectangle_sum_unchecked(b.x0, b.y0, b.x1, b.y1);
        sum += (-static_cast<double>(x) * d.y + static_cast<double>(y) * d.x) * cnt + tor;
    }
    return sum / (2.0 * normalization(b.area(), alpha));
}

std::vector<double> torque_map_fast_values(const TorquePrecompute& pre, int side, double alpha)
{
    const int w = pre.width(), h = pre.height();
    validate_side(side, w, h);
    const int half = (side - 1) / 2;

    std::vector<double> acc(static_cast<std::size_t>(w) * h, 0.0);
    std::vector<int> xlo(w), xhi(w);
    for (int x = 0; x < w; ++x) {
        xlo[x] = std::max(x - half, 0);
        xhi[x] = std::min(x + half, w - 1);
    }

    // One pass per orientation bin keeps the working set to two tables.
    for (int i = 0; i < kOrientationBins; ++i) {
        const Vec2 d = bin_directions()[i];
        const SummedAreaTable& cnt = pre.count_table(i);
        const SummedAreaTable& tor = pre.origin_torque_table(i);
        detail::parallel_rows(h, [&](int y) {
            const int y0 = std::max(y - half, 0);
            const int y1 = std::min(y + half, h - 1);
            double* row = acc.data() + static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                const double c = cnt.rectangle_sum_unchecked(xlo[x], y0, xhi[x], y1);
                const double t = tor.rectangle_sum_unchecked(xlo[x], y0, xhi[x], y1);
                row[x] += (-static_cast<double>(x) * d.y + static_cast<double>(y) * d.x) * c + t;
            }
        });
    }

    // Z factors separably: (cw * ch)^(a/2) = cw^(a/2) * ch^(a/2).
    std::vector<double> powx(w);
    for (int x = 0; x < w; ++x)
        powx[x] = std::pow(static_cast<double>(xhi[x] - xlo[x] + 1), alpha / 2.0);
    detail::parallel_rows(h, [&](int y) {
        const int ch = std::min(y + half, h - 1) - std::max(y - half, 0) + 1;
        const double powy = std::pow(static_cast<double>(ch), alpha / 2.0);
        double* row = acc.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x)
            row[x] /= 2.0 * powx[x] * powy;
    });
    return acc;
}

FloatMap torque_map_fast(const TorquePrecompute& pre, int side, double alpha)
{
    const std::vector<double> values = torque_map_fast_values(pre, side, alpha);
    FloatMap map = make_float_map(pre.width(), pre.height());
    for (std::size_t i = 0; i < values.size(); ++i)
        map.samples[i] = static_cast<float>(values[i]);
    return map;
}

std::vector<int> default_scales()
{
    std::vector<int> scales;
    for (int s = 3; s <= 91; s += 4)
        scales.push_back(s);
    return scales;
}

TorqueVolume torque_volume(const OrientedEdgeMap& edges, std::span<const int> scales, double alpha)
{
    if (scales.empty())
        throw std::invalid_argument("scale list must not be empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        validate_side(scales[i], edges.width, edges.height);
        if (i > 0 && scales[i] <= scales[i - 1])
            throw std::invalid_argument("scales must be strictly increasing");
    }

    const TorquePrecompute pre(edges);
    TorqueVolume vol;
    vol.width = edges.width;
    vol.height = edges.height;
    vol.alpha = alpha;
    vol.scales.assign(scales.begin(), scales.end());
    vol.slices.reserve(scales.size());
    for (int s : scales)
        vol.slices.push_back(torque_map_fast(pre, s, alpha));
    return vol;
}

ValueScaleMaps reduce_volume(const TorqueVolume& vol)
{
    if (vol.slices.empty())
        throw std::invalid_argument("cannot reduce an empty torque volume");

    ValueScaleMaps out;
    out.value = make_float_map(vol.width, vol.height);
    out.scale = make_float_map(vol.width, vol.height);
    const std::size_t n = out.value.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        float best = vol.slices[0].samples[i];
        int best_scale = vol.scales[0];
        for (std::size_t s = 1; s < vol.slices.size(); ++s) {
            const float v = vol.slices[s].samples[i];
            if (std::fabs(v) > std::fabs(best)) {
                best = v;
                best_scale = vol.scales[s];
            }
        }
        out.value.samples[i] = best;
        out.scale.samples[i] = best > 0.0f ? static_cast<float>(best_scale)
                             : best < 0.0f ? -static_cast<float>(best_scale)
                                           : 0.0f;
    }
    return out;
}

void save_volume(const TorqueVolume& vol, const std::string& manifest_path)
{
    namespace fs = std::filesystem;
    const fs::path manifest(manifest_path);
    const fs::path dir = manifest.parent_path();
    const std::string stem = manifest.stem().string();

    nlohmann::json j;
    j["width"] = vol.width;
    j["height"] = vol.height;
    j["alpha"] = vol.alpha;
    j["scales"] = vol.scales;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vol.scales.size(); ++i) {
        const std::string name = stem + "_s" + std::to_string(vol.scales[i]) + ".pfm";
        save_float_map(vol.slices[i], (dir / name).string());
        names.push_back(name);
    }
    j["slices"] = names;

    std::ofstream out(manifest_path);
    if (!out)
        throw IoError("cannot open '" + manifest_path + "'");
    out << j.dump(2) << "\n";
    if (!out)
        throw IoError("write failed for '" + manifest_path + "'");
}

TorqueVolume load_volume(const std::string& manifest_path)
{
    namespace fs = std::filesystem;
    std::ifstream in(manifest_path);
    if (!in)
        throw IoError("cannot open '" + manifest_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed volume manifest '" + manifest_path + "': " + e.what());
    }

    TorqueVolume vol;
    try {
        vol.width = j.at("width").get<int>();
        vol.height = j.at("height").get<int>();
        vol.alpha = j.at("alpha").get<double>();
        vol.scales = j.at("scales").get<std::vector<int>>();
        const auto names = j.at("slices").get<std::vector<std::string>>();
        if (names.size() != vol.scales.size())
            throw IoError("volume manifest scale/slice count mismatch");
        const fs::path dir = fs::path(manifest_path).parent_path();
        for (const std::string& name : names) {
            FloatMap slice = load_float_map((dir / name).string());
            if (slice.width != vol.width || slice.height != vol.height)
                throw IoError("volume slice '" + name + "' has mismatched dimensions");
            vol.slices.push_back(std::move(slice));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed volume manifest '" + manifest_path + "': " + e.what());
    }
    return vol;
}

} // namespace torque
