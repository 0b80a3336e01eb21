#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torque/edge_map.hpp"

namespace torque {

struct BenchConfig {
    std::vector<int> sizes;     // patch sides to time, at least two
    int repeats = 5;            // >= 3, median reported
    int width = 512;
    int height = 512;
    std::uint64_t seed = 1;
    double density = 0.1;       // edge fraction of the random map
    double alpha = 2.0;
    double max_ratio = 1.3;     // bound on max/min per-pixel time
    bool include_naive = false; // time the naive path as a contrast column
    int naive_samples = 256;    // pixels sampled per size for the naive path
};

struct BenchEntry {
    int side = 0;
    double median_ms = 0.0;          // full fast map
    double ns_per_pixel = 0.0;
    double naive_ns_per_pixel = 0.0; // 0 when not measured
};

struct BenchReport {
    int width = 0;
    int height = 0;
    int repeats = 0;
    std::uint64_t seed = 0;
    double sat_build_ms = 0.0;
    std::vector<BenchEntry> entries;
    double ratio = 0.0;      // max/min fast ns_per_pixel across sizes
    double max_ratio = 0.0;
    bool within_bound = false;
};

// Reproducible edge map: `density` of the pixels get a uniformly random
// orientation bin.
OrientedEdgeMap random_edge_map(int width, int height, double density, std::uint64_t seed);

// Times the fast path per patch size on one seeded edge map. Throws
// ComputeError when runs are too short for the timer (use a larger image).
BenchReport run_bench(const BenchConfig& cfg);

std::string bench_report_to_json(const BenchReport& report);

} // namespace torque
