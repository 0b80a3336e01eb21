#include "torque/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "json.hpp"

#include "torque/errors.hpp"
#include "torque/torque_op.hpp"

namespace torque {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point a, Clock::time_point b)
{
    return std::chrono::duration<double, std::milli>(b - a).count();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

OrientedEdgeMap random_edge_map(int width, int height, double density, std::uint64_t seed)
{
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("edge density must lie in (0,1]");
    OrientedEdgeMap edges = make_edge_map(width, height);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> bin(1, kOrientationBins);
    for (std::uint8_t& b : edges.bins)
        if (coin(rng) < density)
            b = static_cast<std::uint8_t>(bin(rng));
    return edges;
}

BenchReport run_bench(const BenchConfig& cfg)
{
    if (cfg.sizes.size() < 2)
        throw std::invalid_argument("bench needs at least two patch sizes");
    if (cfg.repeats < 3)
        throw std::invalid_argument("bench needs at least three repeats");

    const OrientedEdgeMap edges = random_edge_map(cfg.width, cfg.height, cfg.density, cfg.seed);

    const auto t0 = Clock::now();
    const TorquePrecompute pre(edges);
    const auto t1 = Clock::now();

    BenchReport report;
    report.width = cfg.width;
    report.height = cfg.height;
    report.repeats = cfg.repeats;
    report.seed = cfg.seed;
    report.sat_build_ms = elapsed_ms(t0, t1);
    report.max_ratio = cfg.max_ratio;

    const double pixels = static_cast<double>(cfg.width) * cfg.height;
    volatile double sink = 0.0; // keeps the timed maps from being elided

    // Warm up once per size, then interleave the repeats round-robin so
    // machine-load drift lands on every size equally.
    std::vector<std::vector<double>> times(cfg.sizes.size());
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i)
        sink = sink + torque_map_fast_values(pre, cfg.sizes[i], cfg.alpha)[0];
    for (int r = 0; r < cfg.repeats; ++r) {
        for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
            const auto a = Clock::now();
            const std::vector<double> values = torque_map_fast_values(pre, cfg.sizes[i], cfg.alpha);
            const auto b = Clock::now();
            sink = sink + values[values.size() / 2];
            times[i].push_back(elapsed_ms(a, b));
        }
    }

    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        const int side = cfg.sizes[i];
        BenchEntry entry;
        entry.side = side;
        entry.median_ms = median(times[i]);
        if (entry.median_ms < 0.1)
            throw ComputeError("timer resolution insufficient for side " + std::to_string(side) +
                               "; use a larger image");
        entry.ns_per_pixel = entry.median_ms * 1.0e6 / pixels;

        if (cfg.include_naive) {
            // Sample a deterministic pixel grid instead of the full map;
            // the naive path is O(side^2) per pixel.
            const int samples = std::max(1, cfg.naive_samples);
            std::vector<double> naive_times;
            naive_times.reserve(cfg.repeats);
            for (int r = 0; r < cfg.repeats; ++r) {
                const auto a = Clock::now();
                double acc = 0.0;
                for (int s = 0; s < samples; ++s) {
                    const std::size_t i = (static_cast<std::size_t>(s) * edges.bins.size()) / samples;
                    const int x = static_cast<int>(i % cfg.width);
                    const int y = static_cast<int>(i / cfg.width);
                    acc += patch_torque_naive(edges, {x, y, side}, cfg.alpha);
                }
                const auto b = Clock::now();
                sink = sink + acc;
                naive_times.push_back(elapsed_ms(a, b));
            }
            entry.naive_ns_per_pixel = median(naive_times) * 1.0e6 / samples;
        }
        report.entries.push_back(entry);
    }

    const auto [mn, mx] = std::minmax_element(
        report.entries.begin(), report.entries.end(),
        [](const BenchEntry& a, const BenchEntry& b) { return a.ns_per_pixel < b.ns_per_pixel; });
    report.ratio = mx->ns_per_pixel / mn->ns_per_pixel;
    report.within_bound = report.ratio <= cfg.max_ratio;
    return report;
}

std::string bench_report_to_json(const BenchReport& report)
{
    nlohmann::json j;
    j["width"] = report.width;
    j["height"] = report.height;
    j["repeats"] = report.repeats;
    j["seed"] = report.seed;
    j["sat_build_ms"] = report.sat_build_ms;
    j["ratio"] = report.ratio;
    j["max_ratio"] = report.max_ratio;
    j["within_bound"] = report.within_bound;
    j["entries"] = nlohmann::json::array();
    for (const BenchEntry& e : report.entries) {
        nlohmann::json je = {{"side", e.side},
                             {"median_ms", e.median_ms},
                             {"ns_per_pixel", e.ns_per_pixel}};
        if (e.naive_ns_per_pixel > 0.0)
            je["naive_ns_per_pixel"] = e.naive_ns_per_pixel;
        j["entries"].push_back(je);
    }
    return j.dump(2);
}

} // namespace torque
