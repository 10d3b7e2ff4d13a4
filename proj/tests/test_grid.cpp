#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "punch/grid.hpp"

using namespace punch;

TEST_CASE("build_grid time sample counts", "[grid]") {
    auto g = build_grid(0.08, 4.0, 128, 10.0);
    CHECK(g.nt() == 41);
    CHECK(g.ns() == 128);
    CHECK(g.ds() == Catch::Approx(0.08 / 127.0).epsilon(1e-15));
    CHECK(g.s_coords.front() == 0.0);
    CHECK(g.s_coords.back() == 0.08);

    CHECK(build_grid(0.10, 3.0, 64, 15.0).nt() == 46);
    CHECK(build_grid(0.06, 6.0, 256, 7.5).nt() == 46);
}

TEST_CASE("build_grid rejects bad arguments", "[grid]") {
    CHECK_THROWS_AS(build_grid(0.0, 4.0, 128, 10.0), InvalidArgument);
    CHECK_THROWS_AS(build_grid(0.08, -1.0, 128, 10.0), InvalidArgument);
    CHECK_THROWS_AS(build_grid(0.08, 4.0, 8, 10.0), InvalidArgument);
    CHECK_THROWS_AS(build_grid(0.08, 4.0, 128, 0.0), InvalidArgument);
}

TEST_CASE("grid duration bracket property", "[grid][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> Ld(0.06, 0.10), Td(3.0, 6.0), fd(5.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double L = Ld(rng), T = Td(rng), fps = fd(rng);
        auto g = build_grid(L, T, 64, fps);
        const int nt = g.nt();
        CHECK((nt - 1) / fps <= T);
        CHECK(T < nt / fps);
        CHECK(g.t_coords[1] - g.t_coords[0] == Catch::Approx(1.0 / fps).epsilon(1e-14));
    }
}

static Kymograph make_kymo(std::vector<std::vector<double>> rows) {
    Kymograph k;
    const int ns = static_cast<int>(rows.front().size());
    // 1 fps with T = rows-1 seconds gives exactly rows time samples
    k.grid = build_grid(0.08, static_cast<double>(rows.size() - 1) + 0.5, std::max(16, ns), 1.0);
    // shrink the spatial axis to the requested width by rebuilding coords
    k.grid.s_coords.resize(ns);
    for (auto& row : rows) row.resize(ns);
    k.intensity = std::move(rows);
    return k;
}

TEST_CASE("normalize_intensity affine map", "[grid]") {
    auto k = make_kymo({{2, 4, 6, 2, 4, 6, 2, 4, 6, 2, 4, 6, 2, 4, 6, 6}});
    auto n = normalize_intensity(k);
    CHECK(n.intensity[0][0] == 0.0);
    CHECK(n.intensity[0][1] == 0.5);
    CHECK(n.intensity[0][2] == 1.0);

    auto m = make_kymo({{-1, 0, 3, -1, 0, 3, -1, 0, 3, -1, 0, 3, -1, 0, 3, 3}});
    auto nm = normalize_intensity(m);
    CHECK(nm.intensity[0][0] == 0.0);
    CHECK(nm.intensity[0][1] == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(nm.intensity[0][2] == 1.0);
}

TEST_CASE("normalize_intensity is idempotent", "[grid][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(-3.0, 5.0);
    for (int rep = 0; rep < 50; ++rep) {
        Kymograph k;
        k.grid = build_grid(0.08, 2.0, 16, 4.0);
        k.intensity.assign(k.grid.nt(), std::vector<double>(16));
        for (auto& row : k.intensity)
            for (double& v : row) v = val(rng);
        auto n1 = normalize_intensity(k);
        auto n2 = normalize_intensity(n1);
        for (int t = 0; t < k.grid.nt(); ++t)
            for (int j = 0; j < 16; ++j) {
                CHECK(n1.intensity[t][j] >= 0.0);
                CHECK(n1.intensity[t][j] <= 1.0);
                CHECK(n2.intensity[t][j] == n1.intensity[t][j]);
            }
    }
}

TEST_CASE("normalize_intensity rejects constant fields", "[grid]") {
    Kymograph k;
    k.grid = build_grid(0.08, 2.0, 16, 4.0);
    k.intensity.assign(k.grid.nt(), std::vector<double>(16, 0.7));
    CHECK_THROWS_AS(normalize_intensity(k), InvalidArgument);
}

TEST_CASE("peclet number", "[grid]") {
    CHECK(peclet(0.04, 0.1, 1e-6) == Catch::Approx(4000.0).epsilon(1e-12));
    CHECK(peclet(1, 1, 1) == 1.0);
    CHECK(peclet(0.2, 0.08, 2e-6) == Catch::Approx(8000.0).epsilon(1e-12));
    CHECK_THROWS_AS(peclet(0.04, 0.1, 0.0), InvalidArgument);
}

TEST_CASE("peclet scale invariance", "[grid][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ud(0.01, 1.0), cd(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double u = ud(rng), L = ud(rng), D = ud(rng) * 1e-5, c = cd(rng);
        CHECK(peclet(c * u, L, c * D) == Catch::Approx(peclet(u, L, D)).epsilon(1e-12));
    }
}
