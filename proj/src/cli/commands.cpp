#include "kljn/cli/commands.hpp"

#include "kljn/cli/manifest.hpp"
#include "kljn/cli/verify.hpp"
#include "kljn/csv.hpp"
#include "kljn/error.hpp"
#include "kljn/exchange.hpp"
#include "kljn/identity.hpp"
#include "kljn/noise.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

namespace kljn::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Common {
    double rh = 100e3;
    double rl = 10e3;
    double teff = 1e18;
    double bandwidth = 500.0;
    std::size_t ensemble = 10;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    unsigned jobs = 1;
};

struct Options {
    Common common;
    // noise
    std::size_t samples = std::size_t{1} << 20;
    std::size_t psd_segment = 4096;
    // exchange / keygen / did
    std::size_t beps = 10'000;
    std::size_t bep_samples = 1000;
    std::string force_choices;
    std::size_t length = 256;
    std::size_t max_beps = 0;
    std::string alias;
    std::string network;
    std::string key_hex;
    // verify
    bool quick = false;
    bool inject_fault = false;
    // replay
    std::string manifest_path;
};

void add_common(CLI::App& cmd, Common& c, bool with_out_dir = true) {
    cmd.add_option("--rh", c.rh, "High resistor, ohm")->envname("KLJN_RH")->capture_default_str();
    cmd.add_option("--rl", c.rl, "Low resistor, ohm")->envname("KLJN_RL")->capture_default_str();
    cmd.add_option("--teff", c.teff, "Effective noise temperature, K")
        ->envname("KLJN_TEFF")
        ->capture_default_str();
    cmd.add_option("--bandwidth", c.bandwidth, "Noise bandwidth, Hz")
        ->envname("KLJN_BANDWIDTH")
        ->capture_default_str();
    cmd.add_option("--ensemble", c.ensemble, "Raw series averaged per generator")
        ->envname("KLJN_ENSEMBLE")
        ->capture_default_str();
    cmd.add_option("--seed", c.seed, "Root seed")->envname("KLJN_SEED")->capture_default_str();
    cmd.add_option("--jobs", c.jobs, "Worker threads for BEPs (output is independent of this)")
        ->envname("KLJN_JOBS")
        ->check(CLI::Range(1U, 256U))
        ->capture_default_str();
    if (with_out_dir)
        cmd.add_option("--out-dir", c.out_dir, "Output directory")
            ->envname("KLJN_OUT_DIR")
            ->capture_default_str();
}

ordered_json common_json(const Common& c) {
    ordered_json j;
    j["rh"] = c.rh;
    j["rl"] = c.rl;
    j["teff"] = c.teff;
    j["bandwidth"] = c.bandwidth;
    j["ensemble"] = c.ensemble;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    return j;
}

exchange::BepConfig bep_config(const Options& o) {
    exchange::BepConfig cfg;
    cfg.pair = {o.common.rh, o.common.rl};
    cfg.temperature_k = o.common.teff;
    cfg.bandwidth_hz = o.common.bandwidth;
    cfg.samples_per_bep = o.bep_samples;
    cfg.ensemble_count = o.common.ensemble;
    cfg.seed = o.common.seed;
    if (!o.force_choices.empty())
        cfg.forced_schedule = exchange::parse_schedule(o.force_choices);
    exchange::validate(cfg);
    return cfg;
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
    return fs::path(dir);
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
    write_json(dir / "manifest.json", to_json(manifest, utc_timestamp()));
}

std::string fixed(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

int cmd_noise(const Options& o, std::ostream& out) {
    noise::NoiseConfig nc;
    nc.n_samples = o.samples;
    nc.ensemble_count = o.common.ensemble;
    nc.bandwidth_hz = o.common.bandwidth;
    nc.seed = o.common.seed;
    noise::validate(nc);
    exchange::BepConfig bep;
    bep.pair = {o.common.rh, o.common.rl};
    bep.temperature_k = o.common.teff;
    bep.bandwidth_hz = o.common.bandwidth;
    bep.ensemble_count = o.common.ensemble;
    bep.seed = o.common.seed;
    // Generator traces over 100 ms at the Nyquist step.
    bep.samples_per_bep = std::max<std::size_t>(
        16, static_cast<std::size_t>(std::llround(0.1 * 2.0 * o.common.bandwidth)));
    exchange::validate(bep);

    const fs::path dir = prepare_out_dir(o.common.out_dir);
    const auto gblwn = noise::antialias(noise::generate_raw_gaussian(nc));
    const auto segment = std::min(o.psd_segment, gblwn.size());
    const auto psd = noise::psd_report(gblwn, segment);
    const auto normality = noise::normality_report(noise::at_nyquist_step(gblwn).samples);

    csv::write_series(dir / "noise.csv", gblwn);
    csv::write_psd(dir / "psd.csv", psd);

    ordered_json nj;
    nj["skewness"] = normality.skewness;
    nj["excess_kurtosis"] = normality.excess_kurtosis;
    nj["max_probability_plot_deviation"] = normality.max_probability_plot_deviation;
    write_json(dir / "normality.json", nj);

    using circuit::Choice;
    const auto u_ha = exchange::synthesize_party_noise(bep, 0, 0, Choice::High);
    const auto u_la = exchange::synthesize_party_noise(bep, 0, 0, Choice::Low);
    const auto u_hb = exchange::synthesize_party_noise(bep, 0, 1, Choice::High);
    const auto u_lb = exchange::synthesize_party_noise(bep, 0, 1, Choice::Low);
    csv::write_time_columns(dir / "realization.csv", u_ha.series.sample_period_s,
                            {"u_h_a_v", "u_l_a_v", "u_h_b_v", "u_l_b_v"},
                            {u_ha.series.samples, u_la.series.samples, u_hb.series.samples,
                             u_lb.series.samples});

    RunManifest manifest;
    manifest.command = "noise";
    manifest.config = common_json(o.common);
    manifest.config["samples"] = o.samples;
    manifest.config["psd-segment"] = o.psd_segment;
    manifest.outputs = {"noise.csv", "psd.csv", "normality.json", "realization.csv"};
    write_manifest(dir, manifest);

    out << "noise: " << gblwn.size() << " samples at " << gblwn.sample_period_s << " s\n"
        << "  skewness " << fixed(normality.skewness) << ", excess kurtosis "
        << fixed(normality.excess_kurtosis) << ", max probability-plot deviation "
        << fixed(normality.max_probability_plot_deviation) << '\n'
        << "  in-band flatness " << fixed(psd.in_band_flatness) << " over " << psd.segments
        << " segments, out-of-band power " << psd.out_of_band_power << '\n'
        << "  wrote " << dir.string() << '\n';
    return kExitOk;
}

int cmd_exchange(const Options& o, std::ostream& out) {
    const auto cfg = bep_config(o);
    const fs::path dir = prepare_out_dir(o.common.out_dir);
    const auto results = exchange::run_beps(cfg, 0, o.beps, o.common.jobs);
    const auto report = exchange::exchange_report(results);
    const auto levels = circuit::theoretical_levels(cfg.pair, cfg.temperature_k, cfg.bandwidth_hz);

    {
        const auto path = dir / "exchange_log.jsonl";
        std::ofstream log(path, std::ios::binary | std::ios::trunc);
        if (!log)
            throw Error(ErrorKind::Io, "cannot open " + path.string());
        for (const auto& r : results)
            log << exchange::to_json(r).dump() << '\n';
        if (!log)
            throw Error(ErrorKind::Io, "write failed for " + path.string());
    }

    ordered_json summary = exchange::to_json(report);
    auto level_entry = [](double theoretical, double empirical) {
        ordered_json j;
        j["theoretical_ms"] = theoretical;
        j["empirical_ms"] = empirical;
        return j;
    };
    summary["levels"]["LL"] = level_entry(levels.ll, report.mean_ms_ll);
    summary["levels"]["Secure"] = level_entry(levels.mid, report.mean_ms_secure);
    summary["levels"]["HH"] = level_entry(levels.hh, report.mean_ms_hh);
    summary["thresholds"] = {levels.lower_threshold, levels.upper_threshold};
    summary["eve_constant_guess_accuracy"] =
        report.secure_bits ? ordered_json(exchange::eve_constant_guess_accuracy(results))
                           : ordered_json();
    write_json(dir / "summary.json", summary);

    csv::write_wire(dir / "wire_bep0.csv",
                    exchange::realize_wire(cfg, 0, exchange::draw_choices(cfg, 0)));

    RunManifest manifest;
    manifest.command = "exchange";
    manifest.config = common_json(o.common);
    manifest.config["beps"] = o.beps;
    manifest.config["bep-samples"] = o.bep_samples;
    manifest.config["force-choices"] = o.force_choices.empty() ? ordered_json() : ordered_json(o.force_choices);
    manifest.outputs = {"exchange_log.jsonl", "summary.json", "wire_bep0.csv"};
    write_manifest(dir, manifest);

    out << "exchange: " << report.beps << " BEPs, " << report.secure_bits << " secure bits\n"
        << "  discard rate " << fixed(report.discard_rate) << ", bit balance "
        << fixed(report.bit_balance) << ", BER " << fixed(report.ber) << ", HL/LH gap "
        << fixed(report.hl_lh_ms_gap) << '\n'
        << "  level      theoretical V^2   empirical V^2\n"
        << "  LL         " << std::setw(15) << fixed(levels.ll) << "   " << fixed(report.mean_ms_ll) << '\n'
        << "  Secure     " << std::setw(15) << fixed(levels.mid) << "   " << fixed(report.mean_ms_secure) << '\n'
        << "  HH         " << std::setw(15) << fixed(levels.hh) << "   " << fixed(report.mean_ms_hh) << '\n'
        << "  wrote " << dir.string() << '\n';
    return kExitOk;
}

exchange::AccumulateOptions accumulate_options(const Options& o, std::uint64_t first = 0) {
    exchange::AccumulateOptions opts;
    opts.first_bep_index = first;
    opts.jobs = o.common.jobs;
    if (o.max_beps > 0)
        opts.max_beps = o.max_beps;
    return opts;
}

int cmd_keygen(const Options& o, std::ostream& out) {
    const auto cfg = bep_config(o);
    if (o.length < 4 || o.length % 4 != 0)
        throw Error(ErrorKind::LengthNotMultipleOfFour, "--length must be a positive multiple of 4");
    const fs::path dir = prepare_out_dir(o.common.out_dir);
    const auto key = exchange::accumulate_key(cfg, o.length, accumulate_options(o));
    write_json(dir / "key.json", exchange::to_json(key));

    RunManifest manifest;
    manifest.command = "keygen";
    manifest.config = common_json(o.common);
    manifest.config["length"] = o.length;
    manifest.config["bep-samples"] = o.bep_samples;
    manifest.config["max-beps"] = o.max_beps;
    manifest.config["force-choices"] = o.force_choices.empty() ? ordered_json() : ordered_json(o.force_choices);
    manifest.outputs = {"key.json"};
    write_manifest(dir, manifest);

    out << "keygen: " << key.bits.size() << " bits from " << key.beps_consumed << " BEPs ("
        << key.discarded << " discarded, " << key.error_count << " errors)\n"
        << "  hex " << key.hex << '\n';
    return kExitOk;
}

int cmd_did(const Options& o, std::ostream& out) {
    const fs::path dir = prepare_out_dir(o.common.out_dir);
    std::vector<std::string> outputs;
    std::optional<identity::PrivateKey> priv;

    if (!o.key_hex.empty()) {
        const auto bits = keycodec::hex_to_binary(o.key_hex);
        if (bits.size() != 256)
            throw Error(ErrorKind::InvalidConfig, "--key-hex must be 64 hex characters");
        priv = identity::derive_private_key(bits);
    } else {
        const auto cfg = bep_config(o);
        std::uint64_t next = 0;
        constexpr int kMaxAttempts = 8;
        for (int attempt = 0; attempt < kMaxAttempts && !priv; ++attempt) {
            const auto key = exchange::accumulate_key(cfg, 256, accumulate_options(o, next));
            next += key.beps_consumed;
            try {
                priv = identity::derive_private_key(key);
                write_json(dir / "key.json", exchange::to_json(key));
                outputs.push_back("key.json");
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::KeyOutOfRange)
                    throw;
            }
        }
        if (!priv)
            throw Error(ErrorKind::KeyOutOfRange, "no in-range key after repeated exchanges");
    }

    const auto pub = identity::public_from_private(*priv);
    const auto doc = identity::build_did_document(
        pub, o.alias, o.network.empty() ? std::nullopt : std::optional<std::string>(o.network));
    write_json(dir / "did.json", identity::to_json(doc));
    outputs.push_back("did.json");

    RunManifest manifest;
    manifest.command = "did";
    manifest.config = common_json(o.common);
    manifest.config["bep-samples"] = o.bep_samples;
    manifest.config["max-beps"] = o.max_beps;
    manifest.config["alias"] = o.alias;
    manifest.config["network"] = o.network.empty() ? ordered_json() : ordered_json(o.network);
    manifest.config["key-hex"] = o.key_hex.empty() ? ordered_json() : ordered_json(o.key_hex);
    manifest.outputs = outputs;
    write_manifest(dir, manifest);

    out << "did: " << doc.did << '\n' << "  wrote " << (dir / "did.json").string() << '\n';
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    VerifyOptions vo;
    vo.quick = o.quick;
    vo.seed = o.common.seed == 0 ? 1 : o.common.seed;
    vo.inject_broken_threshold = o.inject_fault;
    vo.jobs = o.common.jobs;
    const auto results = run_verification(vo);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(26) << r.name
            << std::right << std::setw(8) << std::fixed << std::setprecision(2) << r.seconds
            << "s  " << std::defaultfloat << r.detail << '\n';
    }
    out << (all ? "all checks passed" : "verification FAILED") << '\n';
    return all ? kExitOk : kExitVerification;
}


int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
    const auto manifest = manifest_from_json(read_json(o.manifest_path));
    if (manifest.command == "replay")
        throw Error(ErrorKind::InvalidConfig, "manifest cannot name replay");
    auto args = replay_arguments(manifest);
    args.push_back("--out-dir");
    args.push_back(o.common.out_dir);
    return run(args, out, err);
}

int dispatch(const std::string& name, const Options& o, std::ostream& out, std::ostream& err) {
    if (name == "noise")
        return cmd_noise(o, out);
    if (name == "exchange")
        return cmd_exchange(o, out);
    if (name == "keygen")
        return cmd_keygen(o, out);
    if (name == "did")
        return cmd_did(o, out);
    if (name == "verify")
        return cmd_verify(o, out);
    if (name == "replay")
        return cmd_replay(o, out, err);
    err << "unknown command " << name << '\n';
    return kExitUsage;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"KLJN key exchange simulator and key/identity toolkit.\n"
                 "Every option can also be set through an environment variable named\n"
                 "KLJN_<OPTION> (upper case, dashes as underscores), e.g. KLJN_SEED."};
    app.require_subcommand(1);

    auto* noise_cmd = app.add_subcommand("noise", "Synthesize band-limited Gaussian noise; write series, PSD, "
                                                   "normality and generator-trace files");
    add_common(*noise_cmd, o.common);
    noise_cmd->add_option("--samples", o.samples, "Raw samples per series (power of two)")
        ->envname("KLJN_SAMPLES")
        ->capture_default_str();
    noise_cmd->add_option("--psd-segment", o.psd_segment, "Periodogram segment length")
        ->envname("KLJN_PSD_SEGMENT")
        ->capture_default_str();

    auto add_bep_options = [&](CLI::App& cmd) {
        cmd.add_option("--bep-samples", o.bep_samples, "Nyquist-step samples per BEP")
            ->envname("KLJN_BEP_SAMPLES")
            ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24))
            ->capture_default_str();
        cmd.add_option("--force-choices", o.force_choices,
                       "Forced (Alice,Bob) schedule, e.g. HL or LH,HL (cycled)")
            ->envname("KLJN_FORCE_CHOICES");
    };

    auto* exchange_cmd = app.add_subcommand("exchange", "Run bit exchange periods");
    add_common(*exchange_cmd, o.common);
    add_bep_options(*exchange_cmd);
    exchange_cmd->add_option("--beps", o.beps, "Number of BEPs")
        ->envname("KLJN_BEPS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* keygen_cmd = app.add_subcommand("keygen", "Accumulate an L-bit key");
    add_common(*keygen_cmd, o.common);
    add_bep_options(*keygen_cmd);
    keygen_cmd->add_option("--length", o.length, "Key length L in bits (multiple of 4)")
        ->envname("KLJN_LENGTH")
        ->capture_default_str();
    keygen_cmd->add_option("--max-beps", o.max_beps, "BEP budget (0 = unlimited)")
        ->envname("KLJN_MAX_BEPS")
        ->capture_default_str();

    auto* did_cmd = app.add_subcommand("did", "Create a did:ethr identity document");
    add_common(*did_cmd, o.common);
    add_bep_options(*did_cmd);
    did_cmd->add_option("--alias", o.alias, "Identifier alias")->envname("KLJN_ALIAS");
    did_cmd->add_option("--network", o.network, "Network name, e.g. goerli")->envname("KLJN_NETWORK");
    did_cmd->add_option("--key-hex", o.key_hex, "Use this 64-digit hex key instead of an exchange")
        ->envname("KLJN_KEY_HEX");
    did_cmd->add_option("--max-beps", o.max_beps, "BEP budget per attempt (0 = unlimited)")
        ->envname("KLJN_MAX_BEPS")
        ->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant checks");
    add_common(*verify_cmd, o.common, false);
    verify_cmd->add_flag("--quick", o.quick, "Reduced sample counts");
    verify_cmd->add_flag("--inject-fault", o.inject_fault, "Break the LL threshold (test hook)")
        ->group("");

    auto* replay_cmd = app.add_subcommand("replay", "Re-run a command from its manifest.json");
    replay_cmd->add_option("manifest", o.manifest_path, "Path to manifest.json")->required();
    replay_cmd->add_option("--out-dir", o.common.out_dir, "Output directory")->capture_default_str();

    std::vector<const char*> argv{"kljn"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return dispatch(name, o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::KeyOutOfRange: return kExitKeyOutOfRange;
        default: return kExitConfig;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace kljn::cli
