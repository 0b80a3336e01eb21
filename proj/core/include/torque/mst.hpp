#pragma once

#include <string>
#include <vector>

#include "torque/edge_map.hpp"
#include "torque/torque_op.hpp"

namespace torque {

struct MstConfig {
    int n_steps = 3;                              // samples per direction
    std::vector<double> scale_factors{0.5, 1.0, 2.0};
    double alpha = 2.0;
    bool magnitudes = false;                      // store |tau| instead of signed values

    int descriptor_length() const
    {
        return static_cast<int>((8 * n_steps + 1) * scale_factors.size());
    }
};

// Fixed-length multi-scale torque samples around an MTP patch, direction
// blocks circular-shifted by the orientation alignment.
struct MstDescriptor {
    std::vector<double> values;
    Patch patch;
    int rotation_index = 0;
};

// Index (0..7) of the canonical direction nearest the vector from the
// patch center to the centroid of the edges inside the patch; 0 when the
// patch holds no edges or the centroid coincides with the center.
int align_orientation(const Patch& patch, const OrientedEdgeMap& edges);

// Samples torque at the patch center and along 8 rays per scale factor,
// window side round-to-odd(factor * patch.side) clamped to >= 3, step
// patch.side / (2 * n_steps). Blocks are ordered (scale, direction, step)
// with the center sample first per scale; direction blocks are then
// shifted so the aligned direction comes first.
MstDescriptor mst_descriptor(const TorquePrecompute& pre, const Patch& patch,
                             const MstConfig& cfg, int rotation_index);
MstDescriptor mst_descriptor(const TorquePrecompute& pre, const OrientedEdgeMap& edges,
                             const Patch& patch, const MstConfig& cfg);

std::string descriptor_to_json(const MstDescriptor& d);

} // namespace torque
