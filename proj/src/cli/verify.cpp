#include "kljn/cli/verify.hpp"

#include "kljn/circuit.hpp"
#include "kljn/exchange.hpp"
#include "kljn/identity.hpp"
#include "kljn/keycodec.hpp"
#include "kljn/noise.hpp"
#include "kljn/rng.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace kljn::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Sizes {
    std::size_t gaussian_samples;
    std::size_t psd_segment;
    std::size_t psd_segments;
    std::size_t level_samples;
    std::size_t protocol_beps;
    std::size_t key_seeds;
    std::size_t round_trips;
};

Sizes sizes_for(bool quick) {
    if (quick)
        return {std::size_t{1} << 16, std::size_t{1} << 10, 16, 10'000, 600, 2, 500};
    return {std::size_t{1} << 20, std::size_t{1} << 12, 64, 100'000, 10'000, 10, 10'000};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

class Runner {
public:
    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        const auto start = Clock::now();
        CheckResult r;
        r.name = name;
        try {
            auto [ok, detail] = body();
            r.passed = ok;
            r.detail = std::move(detail);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        results.push_back(std::move(r));
    }

    std::vector<CheckResult> results;
};

circuit::Levels levels_under_test(const exchange::BepConfig& config, bool broken) {
    auto levels = circuit::theoretical_levels(config.pair, config.temperature_k, config.bandwidth_hz);
    if (broken)
        levels.lower_threshold = 1.5 * levels.mid;
    return levels;
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    const Sizes sz = sizes_for(options.quick);
    Runner run;

    exchange::BepConfig bep;
    bep.seed = options.seed;
    const auto levels = levels_under_test(bep, options.inject_broken_threshold);

    run.check("nyquist_step", [&] {
        noise::NoiseConfig nc;
        nc.n_samples = 1024;
        nc.seed = options.seed;
        const auto raw = noise::generate_raw_gaussian(nc);
        const auto aa = noise::antialias(raw);
        const bool ok = raw.sample_period_s * 2.0 * raw.bandwidth_hz == 1.0 &&
                        aa.nyquist_step_s() * 2.0 * aa.bandwidth_hz == 1.0 &&
                        aa.sample_period_s * 2.0 == raw.sample_period_s;
        return std::pair{ok, "tau = " + fmt(raw.sample_period_s) + " s"};
    });

    noise::GaussianSeries gblwn;
    run.check("gaussianity", [&] {
        noise::NoiseConfig nc;
        nc.n_samples = sz.gaussian_samples;
        nc.seed = options.seed;
        gblwn = noise::antialias(noise::generate_raw_gaussian(nc));
        const auto rep = noise::normality_report(noise::at_nyquist_step(gblwn).samples);
        const double scale = std::sqrt(static_cast<double>(std::size_t{1} << 20) /
                                       static_cast<double>(rep.n));
        const double ks = noise::kolmogorov_critical(rep.n, 0.01);
        const bool ok = std::abs(rep.skewness) < 0.01 * scale &&
                        std::abs(rep.excess_kurtosis) < 0.02 * scale &&
                        rep.max_probability_plot_deviation < ks;
        return std::pair{ok, "skew " + fmt(rep.skewness) + ", kurt " + fmt(rep.excess_kurtosis) +
                                 ", D " + fmt(rep.max_probability_plot_deviation) + " < " + fmt(ks)};
    });

    run.check("anti_aliasing", [&] {
        noise::NoiseConfig nc;
        nc.n_samples = sz.psd_segment * sz.psd_segments / 2;
        nc.seed = options.seed;
        const auto aa = noise::antialias(noise::generate_raw_gaussian(nc));
        const auto rep = noise::psd_report(aa, sz.psd_segment);
        const bool ok = rep.out_of_band_power <= 1e-20 && rep.is_white();
        return std::pair{ok, "out-of-band " + fmt(rep.out_of_band_power) + ", flatness " +
                                 fmt(rep.in_band_flatness) + " (white bound " +
                                 fmt(rep.white_flatness_bound) + ", " +
                                 std::to_string(rep.segments) + " averages)"};
    });

    run.check("johnson_scaling", [&] {
        noise::NoiseConfig nc;
        nc.n_samples = 4096;
        nc.seed = options.seed;
        const auto scaled = noise::scale_to_johnson(noise::generate_raw_gaussian(nc), 1e5, 1e18);
        const double rel = std::abs(noise::empirical_rms(scaled.series.samples) / scaled.target_rms_v - 1.0);
        return std::pair{rel < 1e-12, "target " + fmt(scaled.target_rms_v) + " V, rel err " + fmt(rel)};
    });

    run.check("noise_determinism", [&] {
        noise::NoiseConfig nc;
        nc.n_samples = 4096;
        nc.seed = options.seed;
        const auto a = noise::antialias(noise::generate_raw_gaussian(nc));
        const auto b = noise::antialias(noise::generate_raw_gaussian(nc));
        return std::pair{a.samples == b.samples, "two runs compared sample-by-sample"};
    });

    run.check("r_p_symmetry", [&] {
        const auto& p = bep.pair;
        const double hl = circuit::theoretical_mean_square(p.r_high_ohm, p.r_low_ohm, 1e18, 500.0);
        const double lh = circuit::theoretical_mean_square(p.r_low_ohm, p.r_high_ohm, 1e18, 500.0);
        return std::pair{hl == lh, "HL " + fmt(hl) + " V^2, LH " + fmt(lh) + " V^2"};
    });

    run.check("level_classification", [&] {
        const bool ok = circuit::classify_level(levels.ll, levels) == circuit::LevelClass::LL &&
                        circuit::classify_level(levels.mid, levels) == circuit::LevelClass::Secure &&
                        circuit::classify_level(levels.hh, levels) == circuit::LevelClass::HH;
        return std::pair{ok, "thresholds " + fmt(levels.lower_threshold) + ", " +
                                 fmt(levels.upper_threshold) + " V^2"};
    });

    run.check("johnson_level_fidelity", [&] {
        exchange::BepConfig cfg = bep;
        cfg.samples_per_bep = sz.level_samples;
        const double tol = 3.0 * std::sqrt(2.0 / static_cast<double>(sz.level_samples));
        bool ok = true;
        std::string detail;
        struct Case {
            exchange::ChoicePair choices;
            double expected;
            circuit::LevelClass level;
        };
        const Case cases[] = {
            {{circuit::Choice::Low, circuit::Choice::Low}, levels.ll, circuit::LevelClass::LL},
            {{circuit::Choice::High, circuit::Choice::Low}, levels.mid, circuit::LevelClass::Secure},
            {{circuit::Choice::High, circuit::Choice::High}, levels.hh, circuit::LevelClass::HH}};
        for (const auto& c : cases) {
            const double ms = circuit::measure_mean_square(exchange::realize_wire(cfg, 0, c.choices));
            ok = ok && std::abs(ms / c.expected - 1.0) < tol &&
                 circuit::classify_level(ms, levels) == c.level;
            detail += fmt(ms) + " ";
        }
        return std::pair{ok, detail + "V^2, tol " + fmt(tol)};
    });

    std::vector<exchange::BepResult> results;
    run.check("protocol_statistics", [&] {
        results = exchange::run_beps(bep, 0, sz.protocol_beps, options.jobs);
        for (auto& r : results) {
            // Reclassify with the levels under test so an injected fault propagates.
            r.level = circuit::classify_level(r.measured_ms, levels);
            r.alice_inferred_bob = exchange::infer_other(r.alice_choice, r.level);
            r.bob_inferred_alice = exchange::infer_other(r.bob_choice, r.level);
            r.secure_bit.reset();
            if (r.alice_choice != r.bob_choice && r.level == circuit::LevelClass::Secure)
                r.secure_bit = r.alice_choice == circuit::Choice::High ? 1 : 0;
        }
        const auto rep = exchange::exchange_report(results);
        const double half = std::max(0.03, 4.0 * 0.5 / std::sqrt(static_cast<double>(sz.protocol_beps)));
        const double half_bits =
            std::max(0.03, 4.0 * 0.5 / std::sqrt(static_cast<double>(std::max<std::size_t>(rep.secure_bits, 1))));
        const bool ok = std::abs(rep.discard_rate - 0.5) <= half &&
                        std::abs(rep.bit_balance - 0.5) <= half_bits && rep.ber < 1e-3;
        return std::pair{ok, "discard " + fmt(rep.discard_rate) + ", balance " +
                                 fmt(rep.bit_balance) + ", BER " + fmt(rep.ber)};
    });

    run.check("eve_indistinguishability", [&] {
        if (results.empty())
            return std::pair{false, std::string("no BEPs")};
        for (const auto& r : results)
            if (exchange::eve_view(bep, r).learned_bit)
                return std::pair{false, std::string("Eve learned a bit")};
        const auto rep = exchange::exchange_report(results);
        const double acc = exchange::eve_constant_guess_accuracy(results);
        const double per_class = static_cast<double>(rep.secure_bits) / 2.0;
        // The quick run has too few secure bits for the 2.1-sigma bound to be a useful alarm.
        const double gap_bound = options.quick ? 4.0 * std::sqrt(2.0 / per_class) : 3.0 / std::sqrt(per_class);
        const double half = std::max(0.03, 3.0 * 0.5 / std::sqrt(static_cast<double>(rep.secure_bits)));
        const bool ok = std::abs(acc - 0.5) <= half && rep.hl_lh_ms_gap < gap_bound;
        return std::pair{ok, "guess accuracy " + fmt(acc) + ", HL/LH gap " + fmt(rep.hl_lh_ms_gap) +
                                 " < " + fmt(gap_bound)};
    });

    run.check("key_length_law", [&] {
        double total = 0.0;
        bool hex_ok = true;
        for (std::size_t s = 0; s < sz.key_seeds; ++s) {
            exchange::BepConfig cfg = bep;
            cfg.seed = rng::derive(options.seed, {0x4b4559, s});
            exchange::AccumulateOptions acc;
            acc.jobs = options.jobs;
            const auto key = exchange::accumulate_key(cfg, 256, acc);
            hex_ok = hex_ok && key.hex.size() == 64 && key.bits.size() == 256;
            total += static_cast<double>(key.beps_consumed);
        }
        const double mean = total / static_cast<double>(sz.key_seeds);
        const double half = 4.0 * 16.0 / std::sqrt(static_cast<double>(sz.key_seeds));
        const bool ok = hex_ok && std::abs(mean - 512.0) <= std::max(half, 32.0);
        return std::pair{ok, "mean BEPs per 256-bit key " + fmt(mean)};
    });

    run.check("hex_codec", [&] {
        bool ok = keycodec::binary_to_hex(keycodec::BitString::parse("1111001110100100")) == "f3a4";
        rng::Stream stream(rng::derive(options.seed, {0x484558}));
        for (std::size_t i = 0; i < sz.round_trips && ok; ++i) {
            keycodec::BitString bits;
            for (int b = 0; b < 256; ++b)
                bits.push_back(stream.coin() ? 1 : 0);
            ok = keycodec::hex_to_binary(keycodec::binary_to_hex(bits)) == bits;
        }
        return std::pair{ok, std::to_string(sz.round_trips) + " round trips"};
    });

    run.check("secp256k1", [&] {
        using namespace kljn::secp256k1;
        bool ok = multiply(1, generator()) == generator();
        AffinePoint acc = generator();
        for (unsigned k = 2; k <= 64 && ok; ++k) {
            acc = add(acc, generator());
            ok = multiply(k, generator()) == acc && on_curve(acc);
        }
        bool rejected_zero = false;
        bool rejected_order = false;
        try {
            identity::public_from_private({0});
        } catch (const std::exception&) {
            rejected_zero = true;
        }
        try {
            identity::public_from_private({group_order()});
        } catch (const std::exception&) {
            rejected_order = true;
        }
        return std::pair{ok && rejected_zero && rejected_order, "k = 1..64 and range rejection"};
    });

    run.check("did_document", [&] {
        const auto pub = identity::public_from_private({1});
        const auto doc = identity::build_did_document(pub, "verify", std::string("goerli"));
        const bool ok = doc.did.rfind("did:ethr:goerli:0x0279be667e", 0) == 0 &&
                        doc.did.size() == std::string("did:ethr:goerli:0x").size() + 66 &&
                        doc.controller_key_id.size() == 130 &&
                        doc.keys.at(0).algorithms == identity::signing_algorithms();
        return std::pair{ok, doc.did};
    });

    return run.results;
}

} // namespace kljn::cli
