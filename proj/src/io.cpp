#include "dw/io.hpp"

#include "dw/errors.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

namespace dw::io {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string grid_csv(const PhaseGrid& g) {
    std::string out = kGridHeader;
    out += '\n';
    const std::string J = format_double(g.meta.J), delta = format_double(g.meta.delta);
    const std::string average(to_string(g.meta.kind)), engine(to_string(g.meta.engine));
    for (std::size_t iT = 0; iT < g.T_axis.size(); ++iT) {
        for (std::size_t iB = 0; iB < g.B_axis.size(); ++iB) {
            const WitnessResult& w = g.at(iB, iT);
            out += format_double(g.B_axis[iB]) + ',' + format_double(g.T_axis[iT]) + ',' + J + ',' + delta + ',' +
                   average + ',' + engine + ',' + format_double(w.signed_value()) + ',' +
                   format_double(w.magnitude()) + ',' + (w.entangled() ? "true" : "false") + '\n';
        }
    }
    return out;
}

std::string boundary_csv(const std::vector<numerics::Segment>& segments) {
    std::string out = kBoundaryHeader;
    out += '\n';
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        out += std::to_string(i) + ',' + format_double(s.x0) + ',' + format_double(s.y0) + ',' +
               format_double(s.x1) + ',' + format_double(s.y1) + '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
    return v;
}

} // namespace

std::vector<GridRow> parse_grid_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kGridHeader) throw IoError("grid CSV header mismatch");
    std::vector<GridRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw IoError("line " + std::to_string(line_no) + ": expected 9 fields");
        GridRow r;
        r.B = parse_number(f[0], line_no);
        r.T = parse_number(f[1], line_no);
        r.J = parse_number(f[2], line_no);
        r.delta = parse_number(f[3], line_no);
        r.average = f[4];
        r.engine = f[5];
        r.W_signed = parse_number(f[6], line_no);
        r.W = parse_number(f[7], line_no);
        if (f[8] == "true") r.entangled = true;
        else if (f[8] == "false") r.entangled = false;
        else throw IoError("line " + std::to_string(line_no) + ": bad entangled flag '" + f[8] + "'");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into '" + path.string() + "'");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(2 * len, '0');
    for (unsigned i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["argv"] = argv;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    j["parameters"] = params;
    j["seed"] = seed;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}});
    j["outputs"] = outs;
    j["timestamp"] = timestamp;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion) throw IoError("unsupported manifest schema version");
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        for (const auto& [k, v] : j.at("parameters").items()) m.parameters.emplace_back(k, v.get<std::string>());
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& o : j.at("outputs"))
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>()});
        m.timestamp = j.value("timestamp", "");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

} // namespace dw::io
