#pragma once

#include "torque/edge_map.hpp"
#include "torque/extrema.hpp"
#include "torque/image.hpp"
#include "torque/torque_op.hpp"

namespace torque {

struct StrengthenConfig {
    enum class Mode { logistic, linear };

    Mode mode = Mode::logistic;
    // Logistic coefficients learned in the source experiments.
    double c0 = -2.54;
    double c1 = 1.86;
    double c2 = 2.69;
    double blend = 0.5;     // linear-mode weight on the contribution term
    int num_extrema = 5000; // extremal patches feeding the contribution map
};

// Per-edge-point contribution to the top_n extremal patches, signed by
// extremum polarity so supporting edges score positive; negatives clamp to
// zero and the result is min-max normalized to [0,1]. With full_sum the
// sum runs over every patch of every scale containing the point instead
// (no polarity weighting).
FloatMap edge_contribution(const OrientedEdgeMap& edges, const TorqueVolume& vol, int top_n,
                           bool full_sum = false);

double strengthen_logistic(double d_o, double d_tau, double c0 = -2.54, double c1 = 1.86,
                           double c2 = 2.69);
FloatMap strengthen_logistic(const FloatMap& d_o, const FloatMap& d_tau, double c0 = -2.54,
                             double c1 = 1.86, double c2 = 2.69);

double strengthen_linear(double d_o, double d_tau, double blend);
FloatMap strengthen_linear(const FloatMap& d_o, const FloatMap& d_tau, double blend);

FloatMap strengthen(const FloatMap& d_o, const FloatMap& d_tau, const StrengthenConfig& cfg);

} // namespace torque
