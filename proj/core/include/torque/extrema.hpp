#pragma once

#include <span>
#include <string>
#include <vector>

#include "torque/torque_op.hpp"

namespace torque {

enum class Polarity { maximum, minimum };

// Space-scale local extremum of the torque volume; the MTP primitive.
struct TorqueExtremum {
    int x = 0;
    int y = 0;
    int scale = 0;     // patch side in pixels
    double value = 0.0;
    Polarity polarity = Polarity::maximum;
};

struct ExtremaResult {
    std::vector<TorqueExtremum> maxima;
    std::vector<TorqueExtremum> minima;
};

// 26-connected strict extrema over the 3x3x3 space-scale neighborhood
// (boundary voxels compare only in-bounds neighbors); maxima require a
// positive value, minima a negative one. Each list is sorted by |value|
// descending, ties by (scale, y, x) ascending, and truncated to k.
ExtremaResult find_extrema(const TorqueVolume& vol, int k);

enum class PolarityFilter { maxima, minima, both };

// Squares centered at the extrema with side = scale; `both` keeps maxima
// first, input order preserved.
std::vector<Patch> mtp_patches(const ExtremaResult& extrema, PolarityFilter filter);

std::string extrema_to_json(const ExtremaResult& extrema);
ExtremaResult extrema_from_json(const std::string& text);

} // namespace torque
