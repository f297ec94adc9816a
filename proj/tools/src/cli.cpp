// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "cteaoa/config.hpp"
#include "cteaoa/errors.hpp"
#include "cteaoa/estimator.hpp"
#include "cteaoa/io.hpp"
#include "cteaoa/locator.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/simulator.hpp"
#include "cteaoa/sweep.hpp"

namespace fs = std::filesystem;

namespace cteaoa::cli {

namespace {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SharedFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::optional<double> grid_step;
    std::optional<std::string> method;
    std::optional<std::string> strategy;
    bool compat_arithmetic_mean = false;
};

KeyValues flag_overrides(const SharedFlags& f) {
    KeyValues kv;
    if (f.seed) {
        kv.emplace_back("noise.seed", fmt::format("{}", *f.seed));
    }
    if (f.grid_step) {
        kv.emplace_back("estimator.grid_step_deg", fmt::format("{}", *f.grid_step));
    }
    if (f.method) {
        kv.emplace_back("estimator.method", *f.method);
    }
    if (f.strategy) {
        kv.emplace_back("estimator.strategy", *f.strategy);
    }
    if (f.compat_arithmetic_mean) {
        kv.emplace_back("estimator.mean", "arithmetic");
    }
    return kv;
}

RunConfig resolve_config(const SharedFlags& f) {
    RunConfig base = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
    return apply_key_values(base, flag_overrides(f));
}

std::ofstream open_output(const fs::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    return out;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    return in;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

bool is_dump(const fs::path& path) {
    auto in = open_input(path);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') {
        first.pop_back();
    }
    return first == kDumpMagic;
}

PacketDump load_dump(const fs::path& path, std::ostream& err) {
    auto in = open_input(path);
    auto result = read_dump(in, ReadOptions{true});
    for (const auto& d : result.diagnostics) {
        err << path.string() << ": " << d << '\n';
    }
    return std::move(result.dump);
}

/// Dump layout (geometry, carrier, sampling) from the manifest, estimator
/// settings from the command line.
RunConfig config_for_dump(const PacketDump& dump, const RunConfig& run) {
    RunConfig cfg = dump.config();
    cfg.estimator = run.estimator;
    cfg.locator = run.locator;
    cfg.beacons = run.beacons;
    return cfg;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::vector<double> aoas;
    std::vector<double> sweep;  // start stop step
    std::vector<double> sigmas;
    int packets = 100;
    std::string transmitter = "1";
};

int cmd_simulate(const SharedFlags& flags, const SimulateArgs& args, std::ostream& out) {
    const RunConfig run = resolve_config(flags);

    std::vector<double> aoas = args.aoas;
    if (!args.sweep.empty()) {
        const double start = args.sweep[0];
        const double stop = args.sweep[1];
        const double step = args.sweep[2];
        if (!(step > 0.0) || stop < start) {
            throw ConfigError("simulate: --aoa-sweep needs START <= STOP and STEP > 0");
        }
        for (long i = 0;; ++i) {
            const double a = start + static_cast<double>(i) * step;
            if (a > stop + 1e-9) {
                break;
            }
            aoas.push_back(a);
        }
    }
    if (aoas.empty()) {
        throw ConfigError("simulate: give --aoa or --aoa-sweep");
    }
    if (args.packets < 0) {
        throw ConfigError("simulate: --packets must be >= 0");
    }
    std::vector<double> sigmas = args.sigmas;
    if (sigmas.empty()) {
        sigmas.push_back(run.noise.sigma_deg);
    }

    std::uint64_t cell = 0;
    for (double sigma : sigmas) {
        for (double aoa : aoas) {
            RunConfig cfg = run;
            cfg.noise.sigma_deg = sigma;
            cfg.noise.seed = derive_seed(run.noise.seed, cell++);
            cfg.validate();

            PacketDump dump;
            dump.manifest = dump_manifest(cfg, {{"dump.transmitter", args.transmitter},
                                                {"dump.aoa_deg", fmt::format("{}", aoa)},
                                                {"dump.base_seed", fmt::format("{}", run.noise.seed)}});
            dump.packets = simulate_packets(cfg.geometry, cfg.carrier, cfg.sampling, aoa, cfg.noise,
                                            args.packets, args.transmitter);

            const fs::path path = fs::path(flags.out_dir) /
                                  fmt::format("sim_tx{}_aoa{:05.1f}_sigma{}.csv", args.transmitter,
                                              aoa, sigma);
            auto f = open_output(path);
            write_dump(f, dump);
            finish(f, path);
            out << path.string() << '\n';
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- process

struct ProcessArgs {
    std::vector<std::string> inputs;
    bool normalize = false;
};

int cmd_process(const SharedFlags& flags, const ProcessArgs& args, std::ostream& out,
                std::ostream& err) {
    const RunConfig run = resolve_config(flags);
    for (const auto& input : args.inputs) {
        const PacketDump dump = load_dump(input, err);
        const RunConfig cfg = config_for_dump(dump, run);
        const int n = cfg.geometry.antenna_count();

        std::vector<DiffProfile> raw;
        std::vector<DiffProfile> folded;
        for (const auto& pkt : dump.packets) {
            auto processed = process_packet(pkt, cfg.sampling, n, cfg.estimator.mean);
            raw.push_back(std::move(processed.raw));
            folded.push_back(std::move(processed.folded));
        }

        const std::string stem = fs::path(input).stem().string();
        for (const bool is_raw : {true, false}) {
            const auto& profiles = is_raw ? raw : folded;
            std::optional<DiffProfile> mean;
            if (!profiles.empty()) {
                mean = average_profiles(profiles, cfg.estimator.mean);
                if (args.normalize) {
                    mean = normalize_profile(*mean);
                }
            }
            KeyValues manifest{{"table.kind", is_raw ? "raw" : "folded"},
                               {"table.source", fs::path(input).filename().string()},
                               {"table.mean", cfg.estimator.mean == MeanKind::circular ? "circular"
                                                                                        : "arithmetic"},
                               {"table.mean_normalized", args.normalize ? "true" : "false"},
                               {"config_hash", config_hash(cfg)}};
            const auto table = make_profile_table(profiles, mean ? &*mean : nullptr, manifest);
            const fs::path path =
                fs::path(flags.out_dir) / fmt::format("{}_{}.csv", stem, is_raw ? "raw" : "folded");
            auto f = open_output(path);
            write_profile_table(f, table);
            finish(f, path);
            out << path.string() << '\n';
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::vector<std::string> inputs;
};

std::vector<DiffProfile> folded_profiles_from_table(const ProfileTable& table, const RunConfig& cfg) {
    const int n = cfg.geometry.antenna_count();
    const bool folded = table.index.size() == static_cast<std::size_t>(n);
    auto tp = profiles_from_table(table, folded ? ProfileKind::folded : ProfileKind::raw, n);
    std::vector<DiffProfile> profiles = std::move(tp.packets);
    if (profiles.empty() && tp.mean) {
        profiles.push_back(std::move(*tp.mean));
    }
    if (!folded) {
        for (auto& p : profiles) {
            p = fold_rotations(p, n, cfg.estimator.mean);
        }
    }
    return profiles;
}

int cmd_estimate(const SharedFlags& flags, const EstimateArgs& args, std::ostream& out,
                 std::ostream& err) {
    const RunConfig run = resolve_config(flags);
    for (const auto& input : args.inputs) {
        RunConfig cfg = run;
        std::vector<DiffProfile> folded;
        if (is_dump(input)) {
            const PacketDump dump = load_dump(input, err);
            cfg = config_for_dump(dump, run);
            for (const auto& pkt : dump.packets) {
                folded.push_back(
                    process_packet(pkt, cfg.sampling, cfg.geometry.antenna_count(), cfg.estimator.mean)
                        .folded);
            }
        } else {
            auto in = open_input(input);
            folded = folded_profiles_from_table(read_profile_table(in), cfg);
        }
        if (folded.empty()) {
            throw DegenerateError("estimate: '" + input + "' holds no packets");
        }
        const auto est = estimate_from_profiles(folded, cfg.geometry, cfg.carrier, cfg.estimator);

        const fs::path path =
            fs::path(flags.out_dir) / fmt::format("{}_estimate.csv", fs::path(input).stem().string());
        auto f = open_output(path);
        f << "# estimate.source=" << fs::path(input).filename().string() << '\n'
          << "# estimate.strategy=" << to_string(cfg.estimator.strategy) << '\n'
          << "# config_hash=" << config_hash(cfg) << '\n'
          << "angle,residual,method,packets,dispersion\n"
          << format_fixed6(est.angle_deg) << ',' << format_fixed6(est.residual_deg) << ','
          << to_string(est.method) << ',' << est.packets << ',' << format_fixed6(est.dispersion_deg)
          << '\n';
        finish(f, path);
        out << path.string() << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- locate

struct LocateArgs {
    std::vector<std::string> estimates;  // ID=PATH
    std::vector<std::string> bearings;   // ID=DEG
    std::optional<double> heading;
};

std::pair<std::string, std::string> split_binding(const std::string& s, const char* flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
        throw ConfigError(fmt::format("locate: {} expects ID=VALUE, got '{}'", flag, s));
    }
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double read_estimate_angle(const fs::path& path) {
    auto in = open_input(path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.rfind("#", 0) == 0) {
            continue;
        }
        if (line.rfind("angle,", 0) != 0) {
            throw FormatError("estimate file '" + path.string() + "': missing header");
        }
        if (!std::getline(in, line)) {
            break;
        }
        const auto comma = line.find(',');
        try {
            std::size_t used = 0;
            const std::string field = line.substr(0, comma);
            const double angle = std::stod(field, &used);
            if (used != field.size()) {
                break;
            }
            return angle;
        } catch (const std::logic_error&) {
            break;
        }
    }
    throw FormatError("estimate file '" + path.string() + "': no estimate record");
}

int cmd_locate(const SharedFlags& flags, const LocateArgs& args, std::ostream& out) {
    RunConfig cfg = resolve_config(flags);
    if (args.heading) {
        cfg.locator.heading_deg = *args.heading;
    }

    Bearings bearings;
    for (const auto& b : args.estimates) {
        const auto [id, path] = split_binding(b, "--estimate");
        bearings[id] = aoa_to_bearing(read_estimate_angle(path), cfg.locator.convention);
    }
    for (const auto& b : args.bearings) {
        const auto [id, value] = split_binding(b, "--bearing");
        try {
            bearings[id] = std::stod(value);
        } catch (const std::logic_error&) {
            throw ConfigError("locate: bad bearing '" + value + "'");
        }
    }

    const auto pos = locate(cfg.beacons, bearings, cfg.locator.heading_deg,
                            LocateOptions{cfg.locator.grid_step_m});

    const fs::path path = fs::path(flags.out_dir) / "position.csv";
    auto f = open_output(path);
    std::string used;
    for (const auto& id : pos.beacons_used) {
        used += (used.empty() ? "" : ";") + id;
    }
    f << "# locate.heading_deg=" << fmt::format("{}", cfg.locator.heading_deg) << '\n'
      << "# config_hash=" << config_hash(cfg) << '\n'
      << "x,y,residual,beacons\n"
      << format_fixed6(pos.position.x) << ',' << format_fixed6(pos.position.y) << ','
      << format_fixed6(pos.residual_deg) << ',' << used << '\n';
    finish(f, path);
    out << path.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------- sweep-noise

struct SweepArgs {
    std::vector<double> sigmas{0.0, 45.0, 55.0, 65.0};
    int trials = 1000;
    double aoa = 30.0;
};

int cmd_sweep_noise(const SharedFlags& flags, const SweepArgs& args, std::ostream& out) {
    const RunConfig cfg = resolve_config(flags);
    for (double s : args.sigmas) {
        if (!(s >= 0.0)) {
            throw ConfigError("sweep-noise: sigmas must be >= 0");
        }
    }
    const auto rows = sweep_noise(cfg.geometry, cfg.carrier, cfg.sampling, cfg.noise, args.sigmas,
                                  args.trials, args.aoa, cfg.estimator.mean);

    const std::string hash = config_hash(cfg);
    const fs::path summary = fs::path(flags.out_dir) / "noise_sweep.csv";
    {
        auto f = open_output(summary);
        f << "# sweep.aoa_deg=" << fmt::format("{}", args.aoa) << '\n'
          << "# config_hash=" << hash << '\n'
          << "sigma,trials,degenerate,mean_rms_deviation,std_rms_deviation\n";
        for (const auto& r : rows) {
            f << fmt::format("{}", r.sigma_deg) << ',' << r.trials << ',' << r.degenerate << ','
              << format_fixed6(r.mean_rms_deg)
              << ',' << format_fixed6(r.std_rms_deg) << '\n';
        }
        finish(f, summary);
    }

    // one example profile per sigma: d, e0, e45, ...
    const fs::path profiles = fs::path(flags.out_dir) / "effect_of_noise.csv";
    {
        ProfileTable t;
        t.manifest = {{"sweep.aoa_deg", fmt::format("{}", args.aoa)}, {"config_hash", hash}};
        for (const auto& r : rows) {
            t.names.push_back(fmt::format("e{}", r.sigma_deg));
            t.columns.push_back(r.first_profile);
        }
        for (int i = 0; i < cfg.geometry.antenna_count(); ++i) {
            t.index.push_back(i);
        }
        auto f = open_output(profiles);
        write_profile_table(f, t);
        finish(f, profiles);
    }
    out << summary.string() << '\n' << profiles.string() << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"BLE constant-tone-extension phase toolkit for circular antenna arrays", "cteaoa"};
    app.require_subcommand(1);
    app.fallthrough();

    SharedFlags flags;
    app.add_option("--config", flags.config_path, "INI-style config file")->check(CLI::ExistingFile);
    app.add_option("--seed", flags.seed, "RNG seed");
    app.add_option("--out", flags.out_dir, "Output directory");
    app.add_option("--grid-step", flags.grid_step, "Estimator grid step in degrees");
    app.add_option("--method", flags.method, "Estimator: grid or harmonic")
        ->check(CLI::IsMember({"grid", "harmonic"}));
    app.add_option("--strategy", flags.strategy, "Multi-packet strategy: avg-fit or fit-avg")
        ->check(CLI::IsMember({"avg-fit", "fit-avg"}));
    app.add_flag("--compat-arithmetic-mean", flags.compat_arithmetic_mean,
                 "Average with the arithmetic mean instead of the circular mean");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic packet dumps");
    simulate->add_option("--aoa", sim.aoas, "Angle(s) of arrival in degrees");
    simulate->add_option("--aoa-sweep", sim.sweep, "START STOP STEP in degrees")->expected(3);
    simulate->add_option("--sigma", sim.sigmas, "Gaussian phase noise sigma(s) in degrees");
    simulate->add_option("--packets", sim.packets, "Packets per dump");
    simulate->add_option("--transmitter", sim.transmitter, "Transmitter id");

    ProcessArgs proc;
    auto* process = app.add_subcommand("process", "Packet dump -> raw and folded profile tables");
    process->add_option("input", proc.inputs, "Packet dump(s)")->required()->check(CLI::ExistingFile);
    process->add_flag("--normalize", proc.normalize, "Normalize the mean column");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Packet dump or profile table -> AoA estimate");
    estimate->add_option("input", est.inputs, "Dump(s) or profile table(s)")
        ->required()
        ->check(CLI::ExistingFile);

    LocateArgs loc;
    auto* locate_cmd = app.add_subcommand("locate", "Bearings to known beacons -> receiver position");
    locate_cmd->add_option("--estimate", loc.estimates, "ID=PATH of an estimate CSV");
    locate_cmd->add_option("--bearing", loc.bearings, "ID=DEG receiver-frame bearing (ccw)");
    locate_cmd->add_option("--heading", loc.heading, "Receiver heading in degrees");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep-noise", "Profile degradation versus phase noise");
    sweep->add_option("--sigmas", sw.sigmas, "Noise sigmas in degrees")->delimiter(',');
    sweep->add_option("--trials", sw.trials, "Monte-Carlo trials per sigma")->check(CLI::PositiveNumber);
    sweep->add_option("--aoa", sw.aoa, "Angle of arrival in degrees");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "cteaoa: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(flags, sim, out);
        }
        if (process->parsed()) {
            return cmd_process(flags, proc, out, err);
        }
        if (estimate->parsed()) {
            return cmd_estimate(flags, est, out, err);
        }
        if (locate_cmd->parsed()) {
            return cmd_locate(flags, loc, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep_noise(flags, sw, out);
        }
    } catch (const ConfigError& e) {
        err << "cteaoa: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const FormatError& e) {
        err << "cteaoa: format error: " << e.what() << '\n';
        return kFormatError;
    } catch (const DegenerateError& e) {
        err << "cteaoa: degenerate: " << e.what() << '\n';
        return kDegenerate;
    } catch (const IoError& e) {
        err << "cteaoa: " << e.what() << '\n';
        return kIoError;
    }
    return kConfigError;
}

}  // namespace cteaoa::cli
