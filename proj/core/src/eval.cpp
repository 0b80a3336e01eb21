#include "torque/eval.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace torque {

double precision(const EvalCounts& c)
{
    return c.tp + c.fp == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const EvalCounts& c)
{
    return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f_measure(const EvalCounts& c)
{
    const double p = precision(c), r = recall(c);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalCounts pr_counts(const BinaryMap& pred, const BinaryMap& truth)
{
    if (pred.width != truth.width || pred.height != truth.height)
        throw std::invalid_argument("prediction and ground truth dimensions do not match");
    EvalCounts c;
    for (std::size_t i = 0; i < pred.samples.size(); ++i) {
        const bool p = pred.samples[i] != 0;
        const bool t = truth.samples[i] != 0;
        c.tp += p && t;
        c.fp += p && !t;
        c.fn += !p && t;
    }
    return c;
}

BinaryMap binarize(const FloatMap& map, double threshold)
{
    BinaryMap out;
    out.width = map.width;
    out.height = map.height;
    out.samples.resize(map.samples.size());
    for (std::size_t i = 0; i < map.samples.size(); ++i)
        out.samples[i] = map.samples[i] >= threshold ? 1 : 0;
    return out;
}

std::vector<PrPoint> pr_curve(const FloatMap& pred, const BinaryMap& truth, int num_thresholds)
{
    if (num_thresholds < 2)
        throw std::invalid_argument("pr_curve needs at least two thresholds");
    if (pred.width != truth.width || pred.height != truth.height)
        throw std::invalid_argument("prediction and ground truth dimensions do not match");

    std::vector<PrPoint> curve(num_thresholds);
    for (int i = 0; i < num_thresholds; ++i) {
        PrPoint& pt = curve[i];
        pt.threshold = static_cast<double>(i) / (num_thresholds - 1);
        pt.counts = pr_counts(binarize(pred, pt.threshold), truth);
        pt.precision = precision(pt.counts);
        pt.recall = recall(pt.counts);
        pt.f = f_measure(pt.counts);
    }
    return curve;
}

double max_f(std::span<const PrPoint> curve)
{
    double best = 0.0;
    for (const PrPoint& pt : curve)
        best = std::max(best, pt.f);
    return best;
}

std::string curve_to_csv(std::span<const PrPoint> curve)
{
    std::ostringstream out;
    out << "threshold,precision,recall,f\n";
    for (const PrPoint& pt : curve)
        out << pt.threshold << "," << pt.precision << "," << pt.recall << "," << pt.f << "\n";
    return out.str();
}

} // namespace torque
