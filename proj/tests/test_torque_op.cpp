#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "synthetic.hpp"
#include "torque/bench.hpp"
#include "torque/errors.hpp"
#include "torque/torque_op.hpp"

using namespace torque;

namespace {

// Test-local oracle: raw double loop over the whole image with its own
// clipping and cross-product arithmetic.
double oracle_patch_torque(const OrientedEdgeMap& edges, int cx, int cy, int side, double alpha)
{
    const int h = (side - 1) / 2;
    double sum = 0.0;
    long long area = 0;
    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (std::abs(x - cx) > h || std::abs(y - cy) > h)
                continue;
            ++area;
            const int b = edges.bin_at(x, y);
            if (!b)
                continue;
            const double theta = (b - 1) * std::numbers::pi / 4.0;
            const double fx = std::cos(theta), fy = std::sin(theta);
            sum += (x - cx) * fy - (y - cy) * fx;
        }
    }
    return sum / (2.0 * std::pow(static_cast<double>(area), alpha / 2.0));
}

double oracle_rect_sum(const OrientedEdgeMap& edges, int bin1, int x0, int y0, int x1, int y1)
{
    double sum = 0.0;
    for (int y = std::max(y0, 0); y <= std::min(y1, edges.height - 1); ++y)
        for (int x = std::max(x0, 0); x <= std::min(x1, edges.width - 1); ++x)
            sum += edges.bin_at(x, y) == bin1 ? 1.0 : 0.0;
    return sum;
}

TorqueVolume volume_from_slices(std::vector<int> scales, std::vector<FloatMap> slices, double alpha = 2.0)
{
    TorqueVolume vol;
    vol.width = slices.front().width;
    vol.height = slices.front().height;
    vol.alpha = alpha;
    vol.scales = std::move(scales);
    vol.slices = std::move(slices);
    return vol;
}

} // namespace

TEST_CASE("point torque cross products")
{
    CHECK(point_torque({0, 0}, {1, 0}, {0, 1}) == doctest::Approx(1.0));
    CHECK(point_torque({0, 0}, {3, 4}, {0.6, 0.8}) == doctest::Approx(0.0)); // F parallel to r
    CHECK(point_torque({1, 1}, {1, 3}, {-1, 0}) == doctest::Approx(2.0));    // |r|=2, F perpendicular
    CHECK(point_torque({5, 5}, {5, 5}, {1, 0}) == doctest::Approx(0.0));     // p == q allowed
}

TEST_CASE("summed area table against naive sums")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 5 + static_cast<int>(rng() % 28);
        const int h = 5 + static_cast<int>(rng() % 28);
        const OrientedEdgeMap edges = random_edge_map(w, h, 0.3, rng());
        const TorquePrecompute pre(edges);
        for (int q = 0; q < 10; ++q) {
            int x0 = static_cast<int>(rng() % w), x1 = static_cast<int>(rng() % w);
            int y0 = static_cast<int>(rng() % h), y1 = static_cast<int>(rng() % h);
            if (x0 > x1) std::swap(x0, x1);
            if (y0 > y1) std::swap(y0, y1);
            const int b = 1 + static_cast<int>(rng() % 8);
            CHECK(pre.count_table(b - 1).rectangle_sum(x0, y0, x1, y1) ==
                  doctest::Approx(oracle_rect_sum(edges, b, x0, y0, x1, y1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("summed area table edge behavior")
{
    SummedAreaTable table(4, 3, [](int x, int y) { return static_cast<double>(x + 10 * y); });
    CHECK(table.rectangle_sum(0, 0, 3, 2) == doctest::Approx(6.0 * 3 + 30.0 * 4));
    CHECK(table.rectangle_sum(-5, -5, 10, 10) == table.total()); // clamped
    CHECK(table.rectangle_sum(3, 2, 1, 1) == 0.0);               // empty
    CHECK(table.rectangle_sum(2, 1, 2, 1) == doctest::Approx(12.0));

    // Monotone along rows/columns for nonnegative values.
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 3; ++y)
            CHECK(table.rectangle_sum(0, 0, x, y) >= table.rectangle_sum(0, 0, std::max(x - 1, 0), y) - 1e-12);
}

TEST_CASE("precompute holds origin torques")
{
    OrientedEdgeMap empty = make_edge_map(12, 12);
    const TorquePrecompute pe(empty);
    for (int b = 0; b < 8; ++b) {
        CHECK(pe.count_table(b).total() == 0.0);
        CHECK(pe.origin_torque_table(b).total() == 0.0);
    }

    // Single edge at (3,2) in bin 1 (theta 0): tau_o = x sin0 - y cos0 = -2.
    OrientedEdgeMap one = make_edge_map(8, 8);
    one.bins[2 * 8 + 3] = 1;
    const TorquePrecompute p1(one);
    CHECK(p1.origin_torque_table(0).total() == doctest::Approx(-2.0));
    CHECK(p1.count_table(0).total() == doctest::Approx(1.0));
}

TEST_CASE("patch torque on synthetic square contours")
{
    // Dark-interior square contour: tau is negative and proportional to the
    // enclosed area fraction.
    struct Pair { int s, n; };
    for (const Pair c : {Pair{41, 45}, Pair{21, 25}, Pair{31, 35}, Pair{21, 45}, Pair{61, 65}}) {
        const int img = c.n + 20 + (c.n % 2 ? 1 : 0);
        const int center = img / 2;
        const OrientedEdgeMap edges = testing::square_ring_edges(img, img, center, center, c.s);
        const double tau = patch_torque_naive(edges, {center, center, c.n}, 2.0);
        const double expected = -std::pow(static_cast<double>(c.s) / c.n, 2.0);
        CHECK(std::fabs(tau - expected) <= 0.08);
        CHECK(tau == doctest::Approx(oracle_patch_torque(edges, center, center, c.n, 2.0)).epsilon(1e-12));

        const double flipped = patch_torque_naive(flip_orientations(edges), {center, center, c.n}, 2.0);
        CHECK(flipped == doctest::Approx(-tau).epsilon(1e-12));
    }

    const OrientedEdgeMap none = make_edge_map(31, 31);
    CHECK(patch_torque_naive(none, {15, 15, 15}, 2.0) == 0.0);
    CHECK_THROWS_AS(patch_torque_naive(none, {15, 15, 4}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(patch_torque_naive(none, {-200, 15, 15}, 2.0), std::invalid_argument);
}

TEST_CASE("fast path equals the naive oracle")
{
    std::mt19937_64 rng(123);
    const int scales[] = {3, 9, 21, 45};
    for (int trial = 0; trial < 10; ++trial) {
        const OrientedEdgeMap edges = random_edge_map(64, 64, 0.15, rng());
        const TorquePrecompute pre(edges);
        for (double alpha : {1.0, 2.0}) {
            for (int side : scales) {
                const std::vector<double> fast = torque_map_fast_values(pre, side, alpha);
                const FloatMap map = torque_map_fast(pre, side, alpha);
                double max_diff = 0.0;
                bool narrowed_ok = true;
                for (int y = 0; y < 64; ++y) {
                    for (int x = 0; x < 64; ++x) {
                        const double naive = patch_torque_naive(edges, {x, y, side}, alpha);
                        const double f = fast[static_cast<std::size_t>(y) * 64 + x];
                        max_diff = std::max(max_diff, std::fabs(f - naive));
                        narrowed_ok = narrowed_ok && map.at(x, y) == static_cast<float>(f);
                    }
                }
                CAPTURE(side);
                CAPTURE(alpha);
                CHECK(max_diff <= 1e-6);
                CHECK(narrowed_ok);
            }
        }
    }
}

TEST_CASE("torque_at matches the full map")
{
    std::mt19937_64 rng(5);
    const OrientedEdgeMap edges = random_edge_map(48, 40, 0.2, 99);
    const TorquePrecompute pre(edges);
    const std::vector<double> map = torque_map_fast_values(pre, 13, 1.5);
    for (int i = 0; i < 200; ++i) {
        const int x = static_cast<int>(rng() % 48), y = static_cast<int>(rng() % 40);
        CHECK(torque_at(pre, x, y, 13, 1.5) ==
              doctest::Approx(map[static_cast<std::size_t>(y) * 48 + x]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(torque_at(pre, 0, 0, 41, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(torque_at(pre, 0, 0, 12, 2.0), std::invalid_argument);
}

TEST_CASE("translation equivariance away from borders")
{
    const OrientedEdgeMap base = testing::square_ring_edges(96, 96, 40, 38, 17);
    OrientedEdgeMap shifted = make_edge_map(96, 96);
    const int dx = 9, dy = 6;
    for (int y = 0; y < 96; ++y)
        for (int x = 0; x < 96; ++x)
            if (base.bin_at(x, y))
                shifted.bins[static_cast<std::size_t>(y + dy) * 96 + (x + dx)] = base.bins[static_cast<std::size_t>(y) * 96 + x];

    const FloatMap a = torque_map_fast(TorquePrecompute(base), 21, 2.0);
    const FloatMap b = torque_map_fast(TorquePrecompute(shifted), 21, 2.0);
    for (int y = 20; y < 70; ++y)
        for (int x = 20; x < 70; ++x)
            CHECK(b.at(x + dx, y + dy) == doctest::Approx(a.at(x, y)).epsilon(1e-9));
}

TEST_CASE("empty edge map yields a zero torque map")
{
    const TorquePrecompute pre(make_edge_map(32, 32));
    for (float v : torque_map_fast(pre, 9, 2.0).samples)
        CHECK(v == 0.0f);
}

TEST_CASE("continuous-direction oracle stays close to the quantized path")
{
    const GrayImage img = testing::filled_disk_image(96, 96, 47.0, 47.0, 28.0, 0.0, 1.0);
    const GradientField grad = gradient(img);
    const OrientedEdgeMap edges = detect_edges(grad, 0.1);
    const double quantized = patch_torque_naive(edges, {47, 47, 65}, 2.0);
    const double continuous = patch_torque_continuous(edges, grad, {47, 47, 65}, 2.0);
    CHECK(quantized < -0.2);
    // Eight-direction quantization perturbs each force by at most pi/8.
    CHECK(std::fabs(quantized - continuous) <= std::fabs(continuous) * 0.15);
}

TEST_CASE("default scales and volume construction")
{
    const std::vector<int> scales = default_scales();
    REQUIRE(scales.size() == 23);
    CHECK(scales.front() == 3);
    CHECK(scales.back() == 91);
    // Largest default patch covers about 21% of a 161x241 image.
    CHECK(91.0 * 91.0 / (161.0 * 241.0) == doctest::Approx(0.21).epsilon(0.02));

    const OrientedEdgeMap edges = testing::square_ring_edges(64, 64, 31, 31, 21);
    const int single[] = {21};
    const TorqueVolume vol = torque_volume(edges, single, 2.0);
    REQUIRE(vol.slices.size() == 1);
    const FloatMap direct = torque_map_fast(TorquePrecompute(edges), 21, 2.0);
    CHECK(vol.slices[0].samples == direct.samples);

    const int bad_even[] = {4};
    CHECK_THROWS_AS(torque_volume(edges, bad_even, 2.0), std::invalid_argument);
    const int bad_order[] = {9, 9};
    CHECK_THROWS_AS(torque_volume(edges, bad_order, 2.0), std::invalid_argument);
    const int bad_big[] = {65};
    CHECK_THROWS_AS(torque_volume(edges, bad_big, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(torque_volume(edges, std::span<const int>{}, 2.0), std::invalid_argument);
}

TEST_CASE("volume antisymmetry under orientation flips")
{
    const OrientedEdgeMap edges = testing::circle_edges(72, 72, 35.0, 35.0, 20.0);
    const int scales[] = {9, 21, 45};
    const TorqueVolume vol = torque_volume(edges, scales, 2.0);
    const TorqueVolume neg = torque_volume(flip_orientations(edges), scales, 2.0);
    for (std::size_t s = 0; s < vol.slices.size(); ++s)
        for (std::size_t i = 0; i < vol.slices[s].samples.size(); ++i)
            CHECK(neg.slices[s].samples[i] == doctest::Approx(-vol.slices[s].samples[i]).epsilon(1e-9));

    const ValueScaleMaps vs = reduce_volume(vol);
    const ValueScaleMaps nvs = reduce_volume(neg);
    for (std::size_t i = 0; i < vs.value.samples.size(); ++i) {
        CHECK(nvs.value.samples[i] == doctest::Approx(-vs.value.samples[i]).epsilon(1e-9));
        CHECK(nvs.scale.samples[i] == doctest::Approx(-vs.scale.samples[i]).epsilon(1e-9));
    }
}

TEST_CASE("reduce_volume selects the extremal scale")
{
    // Hand volume with per-pixel slice values [0.1, -0.5, 0.3].
    FloatMap s1 = make_float_map(2, 2, 0.1f);
    FloatMap s2 = make_float_map(2, 2, -0.5f);
    FloatMap s3 = make_float_map(2, 2, 0.3f);
    const TorqueVolume vol = volume_from_slices({5, 21, 45}, {s1, s2, s3});
    const ValueScaleMaps vs = reduce_volume(vol);
    for (int i = 0; i < 4; ++i) {
        CHECK(vs.value.samples[i] == -0.5f);
        CHECK(vs.scale.samples[i] == -21.0f);
    }

    // Single-scale volume: V is the slice, S is +-scale.
    FloatMap only = make_float_map(2, 1);
    only.samples = {0.75f, -0.25f};
    const ValueScaleMaps single = reduce_volume(volume_from_slices({9}, {only}));
    CHECK(single.value.samples[0] == 0.75f);
    CHECK(single.scale.samples[0] == 9.0f);
    CHECK(single.scale.samples[1] == -9.0f);

    // All-zero volume: V = 0, S = 0 everywhere.
    const ValueScaleMaps zero = reduce_volume(volume_from_slices({3, 7}, {make_float_map(3, 3), make_float_map(3, 3)}));
    for (int i = 0; i < 9; ++i) {
        CHECK(zero.value.samples[i] == 0.0f);
        CHECK(zero.scale.samples[i] == 0.0f);
    }

    // Ties keep the smallest scale.
    FloatMap t1 = make_float_map(1, 1, -0.4f);
    FloatMap t2 = make_float_map(1, 1, 0.4f);
    const ValueScaleMaps tie = reduce_volume(volume_from_slices({5, 11}, {t1, t2}));
    CHECK(tie.value.samples[0] == -0.4f);
    CHECK(tie.scale.samples[0] == -5.0f);

    CHECK_THROWS_AS(reduce_volume(TorqueVolume{}), std::invalid_argument);
}

TEST_CASE("reduce_volume invariants on random volumes")
{
    std::mt19937_64 rng(31);
    const OrientedEdgeMap edges = random_edge_map(40, 32, 0.2, 8);
    const int scales[] = {5, 13, 27};
    const TorqueVolume vol = torque_volume(edges, scales, 2.0);
    const ValueScaleMaps vs = reduce_volume(vol);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 40; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * 40 + x;
            float best = 0.0f;
            for (const FloatMap& s : vol.slices)
                best = std::max(best, std::fabs(s.samples[i]));
            CHECK(std::fabs(vs.value.samples[i]) == best);
            const float S = vs.scale.samples[i];
            const float V = vs.value.samples[i];
            if (V > 0.0f) CHECK(S > 0.0f);
            if (V < 0.0f) CHECK(S < 0.0f);
            if (V == 0.0f) CHECK(S == 0.0f);
            if (V != 0.0f) {
                const int chosen = static_cast<int>(std::fabs(S));
                const auto it = std::find(vol.scales.begin(), vol.scales.end(), chosen);
                REQUIRE(it != vol.scales.end());
                CHECK(vol.slices[it - vol.scales.begin()].samples[i] == V);
            }
        }
    }
}

TEST_CASE("texture edges score lower than closed contours")
{
    std::mt19937_64 rng(77);
    const int scales[] = {3, 7, 11, 15, 19, 23, 27, 31, 35, 39, 43, 47, 51, 55, 59, 63};
    double contour_mean = 0.0, texture_mean = 0.0;
    const int trials = 5;
    for (int t = 0; t < trials; ++t) {
        const double radius = 10.0 + (t * 3) % 14;
        const OrientedEdgeMap contour = testing::circle_edges(64, 64, 31.5, 31.5, radius);
        const OrientedEdgeMap texture = testing::scattered_edges(64, 64, contour.edge_count(), rng());
        const TorquePrecompute pc(contour), pt(texture);
        double best_c = 0.0, best_t = 0.0;
        for (int s : scales) {
            best_c = std::max(best_c, std::fabs(torque_at(pc, 31, 31, s, 2.0)));
            best_t = std::max(best_t, std::fabs(torque_at(pt, 31, 31, s, 2.0)));
        }
        contour_mean += best_c / trials;
        texture_mean += best_t / trials;
    }
    CHECK(contour_mean >= 1.5 * texture_mean);
}

TEST_CASE("smaller alpha favors larger scales")
{
    // Nested dark squares: mean |S| over object pixels must not increase
    // with alpha.
    OrientedEdgeMap edges = make_edge_map(128, 128);
    for (int side : {21, 45, 69}) {
        const OrientedEdgeMap ring = testing::square_ring_edges(128, 128, 63, 63, side);
        for (std::size_t i = 0; i < edges.bins.size(); ++i)
            if (ring.bins[i])
                edges.bins[i] = ring.bins[i];
    }
    const std::vector<int> scales = default_scales();
    double prev_mean = std::numeric_limits<double>::max();
    for (double alpha : {1.0, 1.5, 2.0}) {
        const ValueScaleMaps vs = reduce_volume(torque_volume(edges, scales, alpha));
        double sum = 0.0;
        long long count = 0;
        for (int y = 63 - 34; y <= 63 + 34; ++y) {
            for (int x = 63 - 34; x <= 63 + 34; ++x) {
                sum += std::fabs(vs.scale.at(x, y));
                ++count;
            }
        }
        const double mean = sum / count;
        CHECK(mean <= prev_mean + 1e-9);
        prev_mean = mean;
    }
}

TEST_CASE("volume serialization round trip")
{
    testing::TempDir tmp;
    const OrientedEdgeMap edges = testing::square_ring_edges(48, 40, 23, 19, 15);
    const int scales[] = {7, 15, 23};
    const TorqueVolume vol = torque_volume(edges, scales, 1.5);
    save_volume(vol, tmp.path("vol.json"));

    const TorqueVolume back = load_volume(tmp.path("vol.json"));
    CHECK(back.width == vol.width);
    CHECK(back.height == vol.height);
    CHECK(back.alpha == vol.alpha);
    CHECK(back.scales == vol.scales);
    REQUIRE(back.slices.size() == vol.slices.size());
    for (std::size_t s = 0; s < vol.slices.size(); ++s)
        CHECK(back.slices[s].samples == vol.slices[s].samples);

    CHECK_THROWS_AS(load_volume(tmp.path("missing.json")), IoError);

    // Manifest whose slice list disagrees with its scale list.
    std::FILE* f = std::fopen(tmp.path("bad.json").c_str(), "w");
    std::fputs("{\"width\":4,\"height\":4,\"alpha\":2.0,\"scales\":[3,7],\"slices\":[\"vol_s7.pfm\"]}", f);
    std::fclose(f);
    CHECK_THROWS_AS(load_volume(tmp.path("bad.json")), IoError);

    f = std::fopen(tmp.path("garbage.json").c_str(), "w");
    std::fputs("{not json", f);
    std::fclose(f);
    CHECK_THROWS_AS(load_volume(tmp.path("garbage.json")), IoError);
}
