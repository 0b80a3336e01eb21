#pragma once

#include "torque/image.hpp"

namespace torque {

// Signed-map rendering: red channel for positive values, blue for
// negative, each scaled by the map's max |value|; an all-zero map renders
// black.
RgbImage render_signed_map(const FloatMap& map);

} // namespace torque
