#pragma once

#include "torque/image.hpp"

namespace torque {

// Disk patch in real-valued image coordinates; the closed disk must lie
// inside the image domain [0, w-1] x [0, h-1].
struct DiskPatch {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

// Sums r x (dI/dy, -dI/dx) over the grid pixels inside the disk with
// central-difference gradients, divided by 2 pi R^2.
double gradient_torque_direct(const GrayImage& img, const DiskPatch& disk);

// Interior area mean (polar quadrature under the r dr dtheta measure,
// bilinear samples) minus the boundary circle mean. Provably equal to the
// direct form in the continuum.
double gradient_torque_intensity(const GrayImage& img, const DiskPatch& disk);

} // namespace torque
