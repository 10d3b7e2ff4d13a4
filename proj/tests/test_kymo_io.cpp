#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "punch/kymo_io.hpp"

using namespace punch;

namespace {

Kymograph random_kymo(std::uint64_t seed, double L = 0.073, double T = 3.7, int ns = 24,
                      double fps = 12.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    Kymograph k;
    k.grid = build_grid(L, T, ns, fps);
    k.intensity.assign(k.grid.nt(), std::vector<double>(ns));
    for (auto& row : k.intensity)
        for (double& v : row) v = val(rng);
    return k;
}

bool identical(const Kymograph& a, const Kymograph& b) {
    if (a.grid.L != b.grid.L || a.grid.T != b.grid.T || a.grid.fps != b.grid.fps) return false;
    if (a.intensity.size() != b.intensity.size()) return false;
    for (size_t t = 0; t < a.intensity.size(); ++t)
        if (a.intensity[t] != b.intensity[t]) return false;
    return true;
}

}  // namespace

TEST_CASE("text round-trip is bit-exact", "[io][property]") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        auto k = random_kymo(seed);
        auto back = kymo_from_text(kymo_to_text(k));
        REQUIRE(identical(k, back));
        // a second trip reproduces the exact same bytes
        CHECK(kymo_to_text(back) == kymo_to_text(k));
    }
}

TEST_CASE("json round-trip is bit-exact", "[io][property]") {
    for (std::uint64_t seed : {10ull, 11ull, 12ull}) {
        auto k = random_kymo(seed);
        auto back = kymo_from_json(nlohmann::json::parse(kymo_to_json(k).dump()));
        REQUIRE(identical(k, back));
    }
}

TEST_CASE("text and json encodings agree", "[io]") {
    auto k = random_kymo(42);
    auto via_json = kymo_from_json(kymo_to_json(k));
    CHECK(kymo_to_text(via_json) == kymo_to_text(k));
}

TEST_CASE("save/load selects encoding by extension", "[io]") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "punch_io_test";
    fs::create_directories(dir);
    auto k = random_kymo(77);

    const auto txt = dir / "a.kymo";
    const auto jsn = dir / "a.json";
    save_kymograph(k, txt.string());
    save_kymograph(k, jsn.string());
    CHECK(identical(load_kymograph(txt.string()), k));
    CHECK(identical(load_kymograph(jsn.string()), k));
    fs::remove_all(dir);
}

TEST_CASE("malformed inputs are rejected with the offending detail", "[io]") {
    CHECK_THROWS_AS(kymo_from_text("garbage header\n1 2 3\n"), DataError);
    auto k = random_kymo(5, 0.08, 1.0, 16, 2.0);  // 3 rows of 16
    auto text = kymo_to_text(k);
    text.erase(text.rfind('\n', text.size() - 2));  // drop the last row
    CHECK_THROWS_AS(kymo_from_text(text), DataError);
    CHECK_THROWS_AS(load_kymograph("/nonexistent/path.kymo"), IoError);
}
