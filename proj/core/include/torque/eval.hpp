#pragma once

#include <span>
#include <string>
#include <vector>

#include "torque/image.hpp"

namespace torque {

struct EvalCounts {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
};

// P = 1 when TP+FP = 0; F = 0 when P+R = 0.
double precision(const EvalCounts& c);
double recall(const EvalCounts& c);
double f_measure(const EvalCounts& c);

EvalCounts pr_counts(const BinaryMap& pred, const BinaryMap& truth);

// Positive where the sample is >= threshold.
BinaryMap binarize(const FloatMap& map, double threshold);

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
    EvalCounts counts;
};

// Thresholds equally spaced over [0,1] inclusive; num_thresholds >= 2.
std::vector<PrPoint> pr_curve(const FloatMap& pred, const BinaryMap& truth, int num_thresholds);

double max_f(std::span<const PrPoint> curve);

// CSV rows "threshold,precision,recall,f" with a header line.
std::string curve_to_csv(std::span<const PrPoint> curve);

} // namespace torque
