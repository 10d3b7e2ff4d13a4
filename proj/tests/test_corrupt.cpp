#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "punch/corrupt.hpp"

using namespace punch;

namespace {

Kymograph smooth_kymo(double L = 0.08, double T = 3.0, int ns = 64, double fps = 15.0) {
    Kymograph k;
    k.grid = build_grid(L, T, ns, fps);
    k.intensity.assign(k.grid.nt(), std::vector<double>(ns));
    for (int t = 0; t < k.grid.nt(); ++t)
        for (int j = 0; j < ns; ++j) {
            const double a = k.grid.t_coords[t] / T, b = k.grid.s_coords[j] / L;
            k.intensity[t][j] = 0.5 + 0.5 * std::sin(6.0 * a) * std::cos(4.0 * b);
        }
    return normalize_intensity(k);
}

double mean_sq_dev(const Kymograph& a, const Kymograph& b) {
    double acc = 0.0;
    size_t n = 0;
    for (size_t t = 0; t < b.intensity.size(); ++t)
        for (size_t j = 0; j < b.intensity[t].size(); ++j) {
            // b may be temporally downsampled; a is indexed at matching times
            const double d = a.intensity[t][j] - b.intensity[t][j];
            acc += d * d;
            ++n;
        }
    return acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("zero noise factor is the identity", "[corrupt]") {
    auto k = smooth_kymo();
    CorruptionConfig cfg;
    cfg.noise_factor = 0.0;
    cfg.target_fps = k.grid.fps;
    cfg.seed = 99;
    auto out = corrupt(k, cfg);
    REQUIRE(out.intensity.size() == k.intensity.size());
    for (size_t t = 0; t < k.intensity.size(); ++t)
        CHECK(out.intensity[t] == k.intensity[t]);
}

TEST_CASE("corruption is deterministic under a fixed seed", "[corrupt]") {
    auto k = smooth_kymo();
    CorruptionConfig cfg;
    cfg.noise_factor = 1.5;
    cfg.seed = 1234;
    auto a = corrupt(k, cfg);
    auto b = corrupt(k, cfg);
    REQUIRE(a.intensity.size() == b.intensity.size());
    for (size_t t = 0; t < a.intensity.size(); ++t) CHECK(a.intensity[t] == b.intensity[t]);
    cfg.seed = 1235;
    auto c = corrupt(k, cfg);
    CHECK(mean_sq_dev(k, a) != mean_sq_dev(k, c));
}

TEST_CASE("corruption severity increases with the noise factor", "[corrupt][oracle]") {
    auto k = smooth_kymo();
    auto avg_msd = [&](double eta) {
        double acc = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            CorruptionConfig cfg;
            cfg.noise_factor = eta;
            cfg.seed = seed;
            acc += mean_sq_dev(k, corrupt(k, cfg));
        }
        return acc / 50.0;
    };
    const double m05 = avg_msd(0.5), m15 = avg_msd(1.5), m30 = avg_msd(3.0);
    INFO("msd: " << m05 << " " << m15 << " " << m30);
    CHECK(m05 < m15);
    CHECK(m15 < m30);
}

TEST_CASE("corrupted intensities stay in the unit interval", "[corrupt][property]") {
    auto k = smooth_kymo();
    for (double eta : {0.5, 1.0, 2.0, 3.0}) {
        CorruptionConfig cfg;
        cfg.noise_factor = eta;
        cfg.seed = static_cast<std::uint64_t>(eta * 100);
        auto out = corrupt(k, cfg);
        CHECK(out.grid.s_coords == k.grid.s_coords);
        for (const auto& row : out.intensity)
            for (double v : row) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
    }
}

TEST_CASE("temporal downsampling keeps every r-th frame", "[corrupt]") {
    auto k = smooth_kymo(0.08, 3.0, 64, 15.0);
    REQUIRE(k.grid.nt() == 46);
    auto d = downsample_fps(k, 7.5);
    CHECK(d.grid.nt() == 23);
    CHECK(d.grid.fps == 7.5);
    for (int t = 0; t < d.grid.nt(); ++t) {
        CHECK(d.intensity[t] == k.intensity[2 * t]);
        CHECK(d.grid.t_coords[t] == k.grid.t_coords[2 * t]);
    }
    // identity case
    auto same = downsample_fps(k, 15.0);
    CHECK(same.grid.nt() == k.grid.nt());
    // non-integer ratio
    CHECK_THROWS_AS(downsample_fps(k, 10.0), InvalidArgument);
    CHECK_THROWS_AS(downsample_fps(k, 30.0), InvalidArgument);
}

TEST_CASE("target fps above source is rejected", "[corrupt]") {
    auto k = smooth_kymo();
    CorruptionConfig cfg;
    cfg.noise_factor = 1.0;
    cfg.target_fps = 30.0;
    CHECK_THROWS_AS(corrupt(k, cfg), InvalidArgument);
}
