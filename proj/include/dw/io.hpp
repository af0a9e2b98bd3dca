#pragma once

#include "dw/phase_scan.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dw::io {

/// Shortest round-trip is not needed; 17 significant digits always round-trips.
std::string format_double(double x);

inline constexpr const char* kGridHeader = "B,T,J,delta,average,engine,W_signed,W,entangled";
inline constexpr const char* kBoundaryHeader = "segment_id,B0,T0,B1,T1";

std::string grid_csv(const PhaseGrid& g);
std::string boundary_csv(const std::vector<numerics::Segment>& segments);

struct GridRow {
    double B = 0.0;
    double T = 0.0;
    double J = 0.0;
    double delta = 0.0;
    std::string average;
    std::string engine;
    double W_signed = 0.0;
    double W = 0.0;
    bool entangled = false;
};

/// Parses text produced by grid_csv. Throws IoError on a malformed header or row.
std::vector<GridRow> parse_grid_csv(const std::string& text);

/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);
std::string utc_timestamp();

struct OutputDigest {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    static constexpr int kSchemaVersion = 1;
    std::string command;
    std::vector<std::string> argv;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t seed = 0;
    std::vector<OutputDigest> outputs;
    std::string timestamp;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

} // namespace dw::io
