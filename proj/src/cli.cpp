#include "dw/cli.hpp"

#include "dw/clean_thermo.hpp"
#include "dw/errors.hpp"
#include "dw/io.hpp"
#include "dw/oracle.hpp"
#include "dw/perturbative.hpp"
#include "dw/phase_scan.hpp"
#include "dw/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace dw::cli {

namespace {

namespace fs = std::filesystem;
using io::format_double;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::atomic<std::ostream*> warning_stream{nullptr};

void stream_warning(const std::string& msg) {
    if (std::ostream* os = warning_stream.load()) *os << "warning: " << msg << '\n';
}

struct PhysicsFlags {
    double J = 1.0;
    double delta = 0.0;
    std::string channel = "coupling";
    std::string average = "quenched";
    std::string engine = "perturbative";
    std::size_t sites = 64;
    std::size_t samples = 200;
    std::optional<std::uint64_t> seed;
    std::size_t grid = 0;
    double tol_eps = numerics::kDefaultTolEps;
    std::string annealed_sign = "negative";
};

void add_physics_flags(CLI::App* app, PhysicsFlags& f, bool with_engine, bool with_average = true) {
    app->add_option("--J", f.J, "nearest-neighbour coupling")->capture_default_str();
    app->add_option("--delta", f.delta, "disorder variance")->capture_default_str()->check(CLI::NonNegativeNumber);
    app->add_option("--channel", f.channel, "disordered parameter")
        ->capture_default_str()
        ->check(CLI::IsMember({"coupling", "field"}));
    if (with_average)
        app->add_option("--average", f.average, "disorder average")
            ->capture_default_str()
            ->check(CLI::IsMember({"quenched", "annealed"}));
    if (with_engine)
        app->add_option("--engine", f.engine)->capture_default_str()->check(CLI::IsMember({"perturbative", "oracle"}));
    app->add_option("--sites", f.sites, "oracle chain length")->capture_default_str();
    app->add_option("--samples", f.samples, "oracle realizations")->capture_default_str();
    app->add_option("--seed", f.seed, "oracle seed (required for oracle runs)");
    app->add_option("--grid", f.grid, "quadrature points (0: automatic)")->capture_default_str();
    app->add_option("--tol-eps", f.tol_eps, "removable-singularity band")->capture_default_str();
    app->add_option("--annealed-sign", f.annealed_sign, "sign of the annealed extra term")
        ->capture_default_str()
        ->check(CLI::IsMember({"negative", "positive"}));
}

PerturbativeOptions perturbative_options(const PhysicsFlags& f) {
    PerturbativeOptions o;
    o.grid = f.grid;
    o.tol_eps = f.tol_eps;
    o.annealed_sign = f.annealed_sign == "positive" ? ExtraTermSign::Positive : ExtraTermSign::Negative;
    return o;
}

std::uint64_t require_seed(const PhysicsFlags& f) {
    if (!f.seed) throw UsageError("--seed is required for oracle runs");
    return *f.seed;
}

void common_parameters(io::RunManifest& m, const PhysicsFlags& f, bool oracle) {
    m.parameters.emplace_back("J", format_double(f.J));
    m.parameters.emplace_back("delta", format_double(f.delta));
    m.parameters.emplace_back("channel", f.channel);
    m.parameters.emplace_back("average", f.average);
    m.parameters.emplace_back("engine", f.engine);
    if (oracle) {
        m.parameters.emplace_back("N", std::to_string(f.sites));
        m.parameters.emplace_back("samples", std::to_string(f.samples));
    } else {
        m.parameters.emplace_back("grid", std::to_string(f.grid));
        m.parameters.emplace_back("tol_eps", format_double(f.tol_eps));
        m.parameters.emplace_back("annealed_sign", f.annealed_sign);
    }
    m.parameters.emplace_back("T_min", format_double(kMinTemperature));
}

void write_manifest(const std::string& path, io::RunManifest m) {
    m.timestamp = io::utc_timestamp();
    io::write_atomic(path, m.to_json());
}

// ---- witness ---------------------------------------------------------------

struct WitnessFlags {
    PhysicsFlags phys;
    double B = 0.0;
    double T = 0.0;
    bool json = false;
    std::string manifest;
};

int cmd_witness(const WitnessFlags& f, const std::vector<std::string>& argv, std::ostream& out) {
    const ChainParams p(f.phys.J, f.B, f.T);
    const DisorderSpec spec(parse_channel(f.phys.channel), f.phys.delta);
    const AverageKind kind = parse_average(f.phys.average);
    const bool oracle = parse_engine(f.phys.engine) == Engine::Oracle;

    std::optional<WitnessResult> result;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    if (oracle) {
        seed = require_seed(f.phys);
        if (f.phys.samples == 0) throw UsageError("--samples must be positive");
        const OracleOptions opts;
        const double clean = realization_witness(Realization::clean(f.phys.sites), p, opts).w_signed;
        const double cv = spec.channel() == Channel::Coupling ? spec.variance() : 0.0;
        const double fv = spec.channel() == Channel::Field ? spec.variance() : 0.0;
        const bool paired = f.phys.samples % 2 == 0;
        const auto obs = sample_observables(p, cv, fv, f.phys.sites, f.phys.samples, seed,
                                            paired ? Sampling::Antithetic : Sampling::Independent, opts);
        OracleEstimate est;
        if (obs.size() == 1) {
            est.signed_mean = obs[0].w_signed;
            est.samples = 1;
            est.effective_samples = 1.0;
        } else {
            est = reduce_observables(obs, kind, paired ? 2 : 1);
        }
        // Momentum-space sign convention, shared with the perturbative engine.
        result.emplace(-clean, clean - est.signed_mean, kind);
        extra["std_err"] = est.std_err;
        extra["samples"] = est.samples;
        extra["effective_samples"] = est.effective_samples;
    } else {
        result = perturbative_witness(p, spec, kind, perturbative_options(f.phys));
    }

    std::string text;
    if (f.json) {
        nlohmann::ordered_json j;
        j["signed"] = result->signed_value();
        j["magnitude"] = result->magnitude();
        j["clean_part"] = result->clean_part();
        j["correction_part"] = result->correction_part();
        j["entangled"] = result->entangled();
        j["average"] = f.phys.average;
        j["engine"] = f.phys.engine;
        for (auto& [k, v] : extra.items()) j[k] = v;
        text = j.dump() + "\n";
    } else {
        text += "signed          " + format_double(result->signed_value()) + "\n";
        text += "magnitude       " + format_double(result->magnitude()) + "\n";
        text += "clean_part      " + format_double(result->clean_part()) + "\n";
        text += "correction_part " + format_double(result->correction_part()) + "\n";
        text += std::string("entangled       ") + (result->entangled() ? "true" : "false") + "\n";
        if (oracle) {
            text += "std_err         " + format_double(extra["std_err"].get<double>()) + "\n";
            text += "samples         " + std::to_string(extra["samples"].get<std::size_t>()) + "\n";
        }
    }
    out << text;

    if (!f.manifest.empty()) {
        io::RunManifest m;
        m.command = "witness";
        m.argv = argv;
        m.parameters.emplace_back("B", format_double(f.B));
        m.parameters.emplace_back("T", format_double(f.T));
        common_parameters(m, f.phys, oracle);
        m.seed = seed;
        m.outputs.push_back({"<stdout>", io::sha256_hex(text)});
        write_manifest(f.manifest, m);
    }
    return kOk;
}

// ---- scan ------------------------------------------------------------------

struct ScanFlags {
    PhysicsFlags phys;
    double B_min = 0.0, B_max = 1.2;
    double T_min = kMinTemperature, T_max = 1.5;
    std::size_t res = 64;
    std::string out;
};

int cmd_scan(const ScanFlags& f, const std::vector<std::string>& argv, std::ostream& out) {
    ScanRequest req;
    req.B = {f.B_min, f.B_max};
    req.T = {f.T_min, f.T_max};
    req.resolution_B = req.resolution_T = f.res;
    req.J = f.phys.J;
    req.disorder = DisorderSpec(parse_channel(f.phys.channel), f.phys.delta);
    req.kind = parse_average(f.phys.average);
    req.engine = parse_engine(f.phys.engine);
    req.perturbative = perturbative_options(f.phys);
    const bool oracle = req.engine == Engine::Oracle;
    if (oracle) {
        req.seed = require_seed(f.phys);
        req.sites = f.phys.sites;
        req.samples = f.phys.samples;
    }

    const PhaseGrid grid = scan(req);
    const auto segments = grid.boundary();
    const std::string grid_text = io::grid_csv(grid);
    const std::string boundary_text = io::boundary_csv(segments);

    const std::string grid_path = f.out + "_grid.csv";
    const std::string boundary_path = f.out + "_boundary.csv";
    const std::string manifest_path = f.out + "_manifest.json";
    std::vector<std::string> written;
    try {
        io::write_atomic(grid_path, grid_text);
        written.push_back(grid_path);
        io::write_atomic(boundary_path, boundary_text);
        written.push_back(boundary_path);

        io::RunManifest m;
        m.command = "scan";
        m.argv = argv;
        m.parameters.emplace_back("B_range", format_double(f.B_min) + ":" + format_double(f.B_max));
        m.parameters.emplace_back("T_range", format_double(f.T_min) + ":" + format_double(f.T_max));
        m.parameters.emplace_back("resolution", std::to_string(f.res));
        common_parameters(m, f.phys, oracle);
        m.seed = oracle ? req.seed : 0;
        m.outputs.push_back({grid_path, io::sha256_hex(grid_text)});
        m.outputs.push_back({boundary_path, io::sha256_hex(boundary_text)});
        write_manifest(manifest_path, m);
    } catch (...) {
        std::error_code ec;
        for (const auto& w : written) fs::remove(w, ec);
        throw;
    }

    std::size_t entangled = 0;
    for (const auto& v : grid.values) entangled += v.entangled() ? 1 : 0;
    out << "wrote " << grid_path << " (" << grid.values.size() << " cells, " << entangled << " entangled)\n";
    out << "wrote " << boundary_path << " (" << segments.size() << " segments)\n";
    out << "wrote " << manifest_path << "\n";
    out << "entangled area " << format_double(region_area(grid)) << "\n";
    return kOk;
}

// ---- validate --------------------------------------------------------------

int cmd_validate(bool quick, bool corrupt_hopping, std::ostream& out) {
    validation::ValidationOptions opts;
    opts.quick = quick;
    if (corrupt_hopping) opts.oracle.hopping_sign = 1.0;
    const auto checks = validation::run_checks(opts);
    out << validation::format_report(checks);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    out << (ok ? "all checks passed\n" : "validation FAILED\n");
    return ok ? kOk : kCheckFailed;
}

// ---- slope -----------------------------------------------------------------

struct SlopeFlags {
    PhysicsFlags phys;
    double B = 0.0;
    double T = 0.0;
    std::vector<double> deltas;
    std::string average = "both";
    std::string sampling = "antithetic";
    std::string manifest;
};

struct Agreement {
    bool passed;
    double rel_dev;
    double sigmas;
};

Agreement agree(double measured, double err, double predicted) {
    const double dev = std::fabs(measured - predicted);
    const double rel = predicted != 0.0 ? dev / std::fabs(predicted) : INFINITY;
    const double sig = err > 0.0 ? dev / err : (dev == 0.0 ? 0.0 : INFINITY);
    return {rel <= 0.15 || sig <= 3.0, rel, sig};
}

int cmd_slope(const SlopeFlags& f, const std::vector<std::string>& argv, std::ostream& out) {
    std::vector<double> deltas;
    for (double d : f.deltas) {
        if (d < 0.0) throw UsageError("deltas must be nonnegative");
        if (d > 0.0) deltas.push_back(d);
    }
    if (deltas.empty()) throw UsageError("need at least one nonzero delta");
    if (parse_channel(f.phys.channel) != Channel::Coupling)
        throw FieldChannelUnsupported("slope comparison supports coupling disorder only");

    const ChainParams p(f.phys.J, f.B, f.T);
    SlopeOptions so;
    so.sites = f.phys.sites;
    so.samples = f.phys.samples;
    so.seed = require_seed(f.phys);
    so.sampling = f.sampling == "independent" ? Sampling::Independent : Sampling::Antithetic;
    const CorrectionSlopes pred = correction_slopes(p, perturbative_options(f.phys));
    const OracleSlopes meas = oracle_slopes(p, deltas, so);

    const bool do_q = f.average != "annealed", do_a = f.average != "quenched";
    std::ostringstream s;
    char buf[512];
    std::snprintf(buf, sizeof buf, "J=%.6g B=%.6g T=%.6g N=%zu M=%zu seed=%llu sampling=%s\n", p.J(), p.B(), p.T(),
                  so.sites, so.samples, static_cast<unsigned long long>(so.seed), f.sampling.c_str());
    s << buf;
    std::snprintf(buf, sizeof buf, "clean witness: quadrature %.10f, chain %.10f\n", pred.clean, -meas.clean_signed);
    s << buf;
    std::snprintf(buf, sizeof buf, "predicted slope: quenched %.6f, annealed %.6f\n", pred.quenched, pred.annealed);
    s << buf;

    bool ok = true;
    for (const auto& pt : meas.points) {
        // Oracle slopes flipped into the momentum-space sign convention.
        const double q = -pt.quenched, a = -pt.annealed;
        if (do_q) {
            const auto g = agree(q, pt.quenched_err, pred.quenched);
            ok = ok && g.passed;
            std::snprintf(buf, sizeof buf,
                          "delta=%.3g quenched: measured %.6f +- %.6f (unpaired +- %.6f) predicted %.6f "
                          "rel_dev %.3f sigmas %.2f %s\n",
                          pt.delta, q, pt.quenched_err, pt.quenched_err_unpaired, pred.quenched, g.rel_dev, g.sigmas,
                          g.passed ? "PASS" : "FAIL");
            s << buf;
        }
        if (do_a) {
            const auto g = agree(a, pt.annealed_err, pred.annealed);
            ok = ok && g.passed;
            std::snprintf(buf, sizeof buf,
                          "delta=%.3g annealed: measured %.6f +- %.6f predicted %.6f rel_dev %.3f sigmas %.2f "
                          "ess %.1f %s\n",
                          pt.delta, a, pt.annealed_err, pred.annealed, g.rel_dev, g.sigmas, pt.effective_samples,
                          g.passed ? "PASS" : "FAIL");
            s << buf;
        }
        if (do_q && do_a) {
            const double gap = std::fabs(a - q);
            const double comb = std::hypot(pt.annealed_err, pt.quenched_err);
            const bool distinct = gap > comb;
            ok = ok && distinct;
            std::snprintf(buf, sizeof buf, "delta=%.3g annealed-quenched gap %.6f combined error %.6f %s\n",
                          pt.delta, gap, comb, distinct ? "DISTINCT" : "NOT DISTINCT");
            s << buf;
        }
    }
    s << "verdict " << (ok ? "PASS" : "FAIL") << "\n";
    const std::string text = s.str();
    out << text;

    if (!f.manifest.empty()) {
        io::RunManifest m;
        m.command = "slope";
        m.argv = argv;
        m.parameters.emplace_back("B", format_double(f.B));
        m.parameters.emplace_back("T", format_double(f.T));
        std::string ds;
        for (double d : deltas) ds += (ds.empty() ? "" : ",") + format_double(d);
        m.parameters.emplace_back("deltas", ds);
        common_parameters(m, f.phys, true);
        m.seed = so.seed;
        m.outputs.push_back({"<stdout>", io::sha256_hex(text)});
        write_manifest(f.manifest, m);
    }
    return ok ? kOk : kCheckFailed;
}

// ---- replay ----------------------------------------------------------------

// Replaces the value of `flag` in an argument list; returns false if absent.
bool rewrite_flag(std::vector<std::string>& args, const std::string& flag, const std::string& value) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == flag && i + 1 < args.size()) {
            args[i + 1] = value;
            return true;
        }
        if (args[i].rfind(flag + "=", 0) == 0) {
            args[i] = flag + "=" + value;
            return true;
        }
    }
    return false;
}

int cmd_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    const io::RunManifest m = io::RunManifest::from_json(io::read_file(manifest_path));
    std::vector<std::string> args = m.argv;
    if (args.empty() || args.front() != m.command) throw IoError("manifest argv does not start with its command");

    const fs::path dir = fs::temp_directory_path() / ("dw-replay-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    struct Cleanup {
        fs::path dir;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{dir};

    const std::string prefix = (dir / "replay").string();
    std::vector<std::string> regenerated;
    if (m.command == "scan") {
        if (!rewrite_flag(args, "--out", prefix)) throw IoError("scan manifest lacks --out");
        regenerated = {prefix + "_grid.csv", prefix + "_boundary.csv"};
    } else {
        rewrite_flag(args, "--manifest", (dir / "manifest.json").string());
    }

    std::ostringstream captured;
    const int code = run(args, captured, err);
    if (code != kOk && code != kCheckFailed) return code;

    bool ok = m.outputs.size() == std::max<std::size_t>(regenerated.size(), 1);
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        std::string digest;
        if (m.outputs[i].path == "<stdout>") digest = io::sha256_hex(captured.str());
        else if (i < regenerated.size()) digest = io::sha256_hex(io::read_file(regenerated[i]));
        const bool match = digest == m.outputs[i].sha256;
        ok = ok && match;
        out << (match ? "MATCH    " : "MISMATCH ") << m.outputs[i].path << "\n";
    }
    out << (ok ? "replay reproduced every output\n" : "replay FAILED\n");
    return ok ? kOk : kCheckFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Disorder-averaged thermodynamic entanglement witness of the XX chain", "dwitness"};
    app.require_subcommand(1);

    WitnessFlags wf;
    auto* witness = app.add_subcommand("witness", "witness at one (B, T) point");
    add_physics_flags(witness, wf.phys, true);
    witness->add_option("--B", wf.B, "magnetic field")->required();
    witness->add_option("--T", wf.T, "temperature")->required();
    witness->add_flag("--json", wf.json, "print a single JSON object");
    witness->add_option("--manifest", wf.manifest, "write a run manifest here");

    ScanFlags sf;
    sf.phys.sites = 128;
    sf.phys.samples = 100;
    auto* scan_cmd = app.add_subcommand("scan", "witness on a (B, T) grid plus the W = 1 boundary");
    add_physics_flags(scan_cmd, sf.phys, true);
    scan_cmd->add_option("--B-min", sf.B_min)->capture_default_str();
    scan_cmd->add_option("--B-max", sf.B_max)->capture_default_str();
    scan_cmd->add_option("--T-min", sf.T_min)->capture_default_str();
    scan_cmd->add_option("--T-max", sf.T_max)->capture_default_str();
    scan_cmd->add_option("--res", sf.res, "points per axis")->capture_default_str();
    scan_cmd->add_option("--out", sf.out, "output prefix")->required();

    bool quick = false, corrupt = false;
    auto* validate = app.add_subcommand("validate", "run the self-check suite");
    validate->add_flag("--quick", quick, "smaller chains and fewer realizations");
    validate->add_flag("--corrupt-hopping-sign", corrupt)->group("");

    SlopeFlags lf;
    lf.phys.sites = 512;
    lf.phys.samples = 2000;
    auto* slope = app.add_subcommand("slope", "oracle disorder slope against the first-order prediction");
    add_physics_flags(slope, lf.phys, false, false);
    slope->add_option("--B", lf.B)->required();
    slope->add_option("--T", lf.T)->required();
    slope->add_option("--deltas", lf.deltas, "variances, comma separated")->required()->delimiter(',');
    slope->add_option("--average", lf.average)->capture_default_str()->check(
        CLI::IsMember({"quenched", "annealed", "both"}));
    slope->add_option("--sampling", lf.sampling)->capture_default_str()->check(
        CLI::IsMember({"antithetic", "independent"}));
    slope->add_option("--manifest", lf.manifest, "write a run manifest here");

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay->add_option("manifest", manifest_path)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n";
        return kUsage;
    }

    std::ostream* saved = warning_stream.exchange(&err);
    set_warning_sink(stream_warning);
    struct Restore {
        std::ostream* saved;
        ~Restore() {
            warning_stream.store(saved);
            if (!saved) set_warning_sink(nullptr);
        }
    } restore{saved};

    try {
        if (*witness) return cmd_witness(wf, args, out);
        if (*scan_cmd) return cmd_scan(sf, args, out);
        if (*validate) return cmd_validate(quick, corrupt, out);
        if (*slope) return cmd_slope(lf, args, out);
        if (*replay) return cmd_replay(manifest_path, out, err);
    } catch (const UsageError& e) {
        err << "error: usage: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}

} // namespace dw::cli
