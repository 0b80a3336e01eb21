#include "torque/gradient_torque.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torque {

namespace {

void validate_disk(const GrayImage& img, const DiskPatch& disk)
{
    if (!(disk.radius >= 4.0))
        throw std::invalid_argument("disk radius must be at least 4 pixels");
    if (disk.cx - disk.radius < 0.0 || disk.cy - disk.radius < 0.0 ||
        disk.cx + disk.radius > img.width - 1.0 || disk.cy + disk.radius > img.height - 1.0)
        throw std::invalid_argument("disk exceeds the image domain");
}

double bilinear(const GrayImage& img, double x, double y)
{
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    const int x0 = std::min(static_cast<int>(x), img.width - 2);
    const int y0 = std::min(static_cast<int>(y), img.height - 2);
    const double fx = x - x0, fy = y - y0;
    const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x0 + 1, y0);
    const double bot = (1.0 - fx) * img.at(x0, y0 + 1) + fx * img.at(x0 + 1, y0 + 1);
    return (1.0 - fy) * top + fy * bot;
}

} // namespace

double gradient_torque_direct(const GrayImage& img, const DiskPatch& disk)
{
    validate_disk(img, disk);

    auto sample = [&](int x, int y) -> double {
        return img.at(std::clamp(x, 0, img.width - 1), std::clamp(y, 0, img.height - 1));
    };

    const double r2 = disk.radius * disk.radius;
    const int x0 = static_cast<int>(std::ceil(disk.cx - disk.radius));
    const int x1 = static_cast<int>(std::floor(disk.cx + disk.radius));
    const int y0 = static_cast<int>(std::ceil(disk.cy - disk.radius));
    const int y1 = static_cast<int>(std::floor(disk.cy + disk.radius));

    double sum = 0.0;
    for (int y = y0; y <= y1; ++y) {
        const double ry = y - disk.cy;
        for (int x = x0; x <= x1; ++x) {
            const double rx = x - disk.cx;
            if (rx * rx + ry * ry > r2)
                continue;
            const double ix = (sample(x + 1, y) - sample(x - 1, y)) / 2.0;
            const double iy = (sample(x, y + 1) - sample(x, y - 1)) / 2.0;
            // r x (Iy, -Ix)
            sum += rx * (-ix) - ry * iy;
        }
    }
    return sum / (2.0 * std::numbers::pi * r2);
}

double gradient_torque_intensity(const GrayImage& img, const DiskPatch& disk)
{
    validate_disk(img, disk);

    const int n_r = std::max(32, static_cast<int>(std::lround(4.0 * disk.radius)));
    const int n_t = std::max(64, static_cast<int>(std::lround(8.0 * disk.radius)));

    std::vector<double> cos_t(n_t), sin_t(n_t);
    for (int j = 0; j < n_t; ++j) {
        const double theta = -std::numbers::pi + (j + 0.5) * 2.0 * std::numbers::pi / n_t;
        cos_t[j] = std::cos(theta);
        sin_t[j] = std::sin(theta);
    }

    // Interior mean under the r dr dtheta measure: midpoint radii weighted
    // by r.
    double weighted = 0.0, weight = 0.0;
    for (int k = 0; k < n_r; ++k) {
        const double r = (k + 0.5) * disk.radius / n_r;
        double ring = 0.0;
        for (int j = 0; j < n_t; ++j)
            ring += bilinear(img, disk.cx + r * cos_t[j], disk.cy + r * sin_t[j]);
        weighted += r * ring;
        weight += r * n_t;
    }
    const double interior_mean = weighted / weight;

    double boundary = 0.0;
    for (int j = 0; j < n_t; ++j)
        boundary += bilinear(img, disk.cx + disk.radius * cos_t[j], disk.cy + disk.radius * sin_t[j]);
    const double boundary_mean = boundary / n_t;

    return interior_mean - boundary_mean;
}

} // namespace torque
