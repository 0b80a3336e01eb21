#include "torque/edge_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "torque/errors.hpp"

namespace torque {

std::size_t OrientedEdgeMap::edge_count() const
{
    return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(),
                                                  [](std::uint8_t b) { return b != 0; }));
}

OrientedEdgeMap make_edge_map(int width, int height)
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("edge map dimensions must be positive");
    OrientedEdgeMap m;
    m.width = width;
    m.height = height;
    m.bins.assign(static_cast<std::size_t>(width) * height, 0);
    return m;
}

GradientField gradient(const GrayImage& img)
{
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("gradient requires an image of at least 3x3");

    GradientField g;
    g.width = img.width;
    g.height = img.height;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    g.gx.resize(n);
    g.gy.resize(n);
    g.magnitude.resize(n);

    auto sample = [&](int x, int y) -> double {
        x = std::clamp(x, 0, img.width - 1);
        y = std::clamp(y, 0, img.height - 1);
        return img.at(x, y);
    };

    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double tl = sample(x - 1, y - 1), tc = sample(x, y - 1), tr = sample(x + 1, y - 1);
            const double ml = sample(x - 1, y), mr = sample(x + 1, y);
            const double bl = sample(x - 1, y + 1), bc = sample(x, y + 1), br = sample(x + 1, y + 1);
            // Sobel / 8 approximates the partial derivative per pixel.
            const double dx = ((tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)) / 8.0;
            const double dy = ((bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)) / 8.0;
            const std::size_t i = g.index(x, y);
            g.gx[i] = static_cast<float>(dx);
            g.gy[i] = static_cast<float>(dy);
            g.magnitude[i] = static_cast<float>(std::hypot(dx, dy));
        }
    }
    return g;
}

Vec2 edge_direction(Vec2 grad)
{
    const double m = norm(grad);
    if (m == 0.0)
        throw std::invalid_argument("edge direction undefined for zero gradient");
    return {grad.y / m, -grad.x / m};
}

OrientedEdgeMap detect_edges(const GradientField& grad, double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("edge threshold must lie in (0,1)");

    const float max_mag = *std::max_element(grad.magnitude.begin(), grad.magnitude.end());
    OrientedEdgeMap edges = make_edge_map(grad.width, grad.height);
    if (max_mag <= 0.0f)
        return edges;
    const float cut = static_cast<float>(threshold) * max_mag;

    auto mag_at = [&](int x, int y) -> float {
        if (x < 0 || y < 0 || x >= grad.width || y >= grad.height)
            return 0.0f;
        return grad.magnitude[grad.index(x, y)];
    };

    for (int y = 0; y < grad.height; ++y) {
        for (int x = 0; x < grad.width; ++x) {
            const std::size_t i = grad.index(x, y);
            const float m = grad.magnitude[i];
            if (m < cut || m == 0.0f)
                continue;
            // Suppress along the gradient, quantized to the 8-neighborhood.
            const int gb = nearest_bin({grad.gx[i], grad.gy[i]});
            const Vec2 d = bin_directions()[gb];
            const int sx = static_cast<int>(std::lround(d.x));
            const int sy = static_cast<int>(std::lround(d.y));
            // >= ahead, > behind: a two-pixel plateau keeps exactly one.
            if (m >= mag_at(x + sx, y + sy) && m > mag_at(x - sx, y - sy))
                edges.bins[i] = static_cast<std::uint8_t>(
                    1 + nearest_bin(edge_direction({grad.gx[i], grad.gy[i]})));
        }
    }
    return edges;
}

OrientedEdgeMap import_edges(const FloatMap& strength, const GradientField& grad, double threshold)
{
    if (strength.width != grad.width || strength.height != grad.height)
        throw std::invalid_argument("edge strength map dimensions do not match the gradient field");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("edge threshold must lie in (0,1)");

    const float max_s = *std::max_element(strength.samples.begin(), strength.samples.end());
    OrientedEdgeMap edges = make_edge_map(strength.width, strength.height);
    if (max_s <= 0.0f)
        return edges;
    const float cut = static_cast<float>(threshold) * max_s;

    for (std::size_t i = 0; i < strength.samples.size(); ++i) {
        if (strength.samples[i] < cut)
            continue;
        const Vec2 g{grad.gx[i], grad.gy[i]};
        if (norm(g) == 0.0)
            continue;
        edges.bins[i] = static_cast<std::uint8_t>(1 + nearest_bin(edge_direction(g)));
    }
    return edges;
}

namespace {

struct PgmData {
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::vector<std::uint8_t> bytes;
};

PgmData read_pgm_raw(std::FILE* f, const std::string& path)
{
    char magic[3] = {0, 0, 0};
    if (std::fscanf(f, "%2s", magic) != 1 || std::string(magic) != "P5")
        throw IoError("'" + path + "' is not a binary PGM (P5) file");
    PgmData d;
    if (std::fscanf(f, "%d %d %d", &d.width, &d.height, &d.maxval) != 3)
        throw IoError("malformed PGM header in '" + path + "'");
    std::fgetc(f); // single whitespace after maxval
    if (d.width < 1 || d.height < 1 || d.maxval < 1 || d.maxval > 255)
        throw IoError("unsupported PGM geometry in '" + path + "'");
    const std::size_t n = static_cast<std::size_t>(d.width) * d.height;
    d.bytes.resize(n);
    if (std::fread(d.bytes.data(), 1, n, f) != n)
        throw IoError("truncated PGM raster in '" + path + "'");
    return d;
}

void write_pgm_raw(std::FILE* f, const std::vector<std::uint8_t>& bytes, int width, int height,
                   int maxval, const std::string& path)
{
    std::ostringstream header;
    header << "P5\n" << width << " " << height << "\n" << maxval << "\n";
    const std::string h = header.str();
    if (std::fwrite(h.data(), 1, h.size(), f) != h.size() ||
        std::fwrite(bytes.data(), 1, bytes.size(), f) != bytes.size())
        throw IoError("write failed for '" + path + "'");
}

} // namespace

void save_edge_map(const OrientedEdgeMap& edges, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw IoError("cannot open '" + path + "'");
    write_pgm_raw(f, edges.bins, edges.width, edges.height, 8, path);
    std::fclose(f);
}

OrientedEdgeMap load_edge_map(const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw IoError("cannot open '" + path + "'");
    PgmData d;
    try {
        d = read_pgm_raw(f, path);
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
    for (std::uint8_t b : d.bytes)
        if (b > 8)
            throw IoError("edge map '" + path + "' holds bin values above 8");
    OrientedEdgeMap edges = make_edge_map(d.width, d.height);
    edges.bins = std::move(d.bytes);
    return edges;
}

void save_edge_map_planes(const OrientedEdgeMap& edges, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw IoError("cannot open '" + path + "'");
    std::vector<std::uint8_t> plane(edges.bins.size());
    for (int b = 1; b <= kOrientationBins; ++b) {
        for (std::size_t i = 0; i < plane.size(); ++i)
            plane[i] = edges.bins[i] == b ? 255 : 0;
        try {
            write_pgm_raw(f, plane, edges.width, edges.height, 255, path);
        } catch (...) {
            std::fclose(f);
            throw;
        }
    }
    std::fclose(f);
}

OrientedEdgeMap load_edge_map_planes(const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw IoError("cannot open '" + path + "'");
    OrientedEdgeMap edges;
    try {
        for (int b = 1; b <= kOrientationBins; ++b) {
            const PgmData d = read_pgm_raw(f, path);
            if (b == 1)
                edges = make_edge_map(d.width, d.height);
            else if (d.width != edges.width || d.height != edges.height)
                throw IoError("edge plane dimensions differ in '" + path + "'");
            for (std::size_t i = 0; i < d.bytes.size(); ++i) {
                if (!d.bytes[i])
                    continue;
                if (edges.bins[i])
                    throw IoError("edge planes overlap in '" + path + "'");
                edges.bins[i] = static_cast<std::uint8_t>(b);
            }
        }
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
    return edges;
}

OrientedEdgeMap flip_orientations(const OrientedEdgeMap& edges)
{
    OrientedEdgeMap out = edges;
    for (std::uint8_t& b : out.bins)
        if (b)
            b = static_cast<std::uint8_t>((b - 1 + 4) % kOrientationBins + 1);
    return out;
}

} // namespace torque
