#include "doctest.h"

#include "dw/errors.hpp"
#include "dw/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

using namespace dw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "dw-test-io";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("seventeen digits round-trip every double") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t b = bits(rng);
        double x;
        std::memcpy(&x, &b, sizeof x);
        if (!std::isfinite(x)) continue;
        const std::string text = io::format_double(x);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == x);
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("grid CSV has the fixed header and round-trips") {
    PhaseGrid g;
    g.B_axis = {0.0, 0.1, 1.0 / 3.0};
    g.T_axis = {0.005, 0.7};
    g.meta.delta = 1e-4;
    g.meta.kind = AverageKind::Annealed;
    for (int i = 0; i < 6; ++i) g.values.emplace_back(-1.0 - 0.1 * i / 7.0, -std::sqrt(2.0) * 1e-5 * i, g.meta.kind);
    const std::string text = io::grid_csv(g);
    CHECK(text.substr(0, text.find('\n')) == "B,T,J,delta,average,engine,W_signed,W,entangled");
    const auto rows = io::parse_grid_csv(text);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(rows[i].W == g.values[i].magnitude());
        CHECK(rows[i].W_signed == g.values[i].signed_value());
        CHECK(rows[i].entangled == (rows[i].W > 1.0));
        CHECK(rows[i].B == g.B_axis[i % 3]);
        CHECK(rows[i].T == g.T_axis[i / 3]);
        CHECK(rows[i].average == "annealed");
        CHECK(rows[i].engine == "perturbative");
    }
    CHECK_THROWS_AS(io::parse_grid_csv("B,T\n1,2\n"), IoError);
    CHECK_THROWS_AS(io::parse_grid_csv(std::string(io::kGridHeader) + "\n1,2,3\n"), IoError);
}

TEST_CASE("boundary CSV numbers segments from zero") {
    const std::vector<numerics::Segment> segs{{0.1, 0.2, 0.3, 0.4, 0, 0}, {0.5, 0.6, 0.7, 0.8, 1, 0}};
    CHECK(io::boundary_csv(segs) ==
          "segment_id,B0,T0,B1,T1\n0,0.10000000000000001,0.20000000000000001,0.29999999999999999,"
          "0.40000000000000002\n1,0.5,0.59999999999999998,0.69999999999999996,0.80000000000000004\n");
    CHECK(io::boundary_csv({}) == "segment_id,B0,T0,B1,T1\n");
}

TEST_CASE("SHA-256 known answers") {
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("atomic writes leave no temporary behind") {
    const fs::path p = scratch("atomic.txt");
    io::write_atomic(p, "first");
    io::write_atomic(p, "second");
    CHECK(io::read_file(p) == "second");
    fs::path tmp = p;
    tmp += ".tmp";
    CHECK_FALSE(fs::exists(tmp));
    CHECK_THROWS_AS(io::write_atomic("/nonexistent-dir/x.csv", "data"), IoError);
    CHECK_THROWS_AS(io::read_file("/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("manifest JSON round-trips") {
    io::RunManifest m;
    m.command = "scan";
    m.argv = {"scan", "--res", "8", "--out", "x"};
    m.parameters = {{"J", "1"}, {"delta", "0.0001"}};
    m.seed = 18446744073709551615ull;
    m.outputs = {{"x_grid.csv", io::sha256_hex("a")}};
    m.timestamp = io::utc_timestamp();
    CHECK(m.timestamp.size() == 20);
    CHECK(m.timestamp.back() == 'Z');
    const auto back = io::RunManifest::from_json(m.to_json());
    CHECK(back.command == m.command);
    CHECK(back.argv == m.argv);
    CHECK(back.parameters == m.parameters);
    CHECK(back.seed == m.seed);
    CHECK(back.outputs[0].sha256 == m.outputs[0].sha256);
    CHECK(m.to_json().find("\"schema_version\": 1") != std::string::npos);
    CHECK_THROWS_AS(io::RunManifest::from_json("{\"schema_version\": 2}"), IoError);
    CHECK_THROWS_AS(io::RunManifest::from_json("not json"), IoError);
}
