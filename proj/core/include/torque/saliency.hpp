#pragma once

#include <span>

#include "torque/extrema.hpp"
#include "torque/image.hpp"

namespace torque {

// Mixture-of-Gaussians map in [0,1] with max exactly 1 whenever any
// extremum exists.
struct SaliencyMap {
    FloatMap map;
    double sigma = 25.0;
};

// Unit-peak isotropic Gaussians at the extrema, weighted by
// |value| / max|value| (or unweighted), summed and min-max normalized.
SaliencyMap saliency_from_extrema(std::span<const TorqueExtremum> extrema, double sigma,
                                  int width, int height, bool weight_by_value = true);

// w * torque + (1 - w) * external, re-normalized to [0,1]. The external
// map is expected pre-normalized to [0,1].
SaliencyMap blend_saliency(const SaliencyMap& torque_saliency, const FloatMap& external, double w);

} // namespace torque
