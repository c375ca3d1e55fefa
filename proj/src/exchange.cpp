#include "kljn/exchange.hpp"

#include "kljn/error.hpp"
#include "kljn/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace kljn::exchange {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

noise::NoiseConfig party_noise_config(const BepConfig& config, std::uint64_t bep_index, int party,
                                      Choice choice) {
    noise::NoiseConfig nc;
    nc.n_samples = std::max<std::size_t>(8, std::bit_ceil(config.samples_per_bep));
    nc.ensemble_count = config.ensemble_count;
    nc.bandwidth_hz = config.bandwidth_hz;
    // Each of the four generators (party x resistor) has its own stream.
    nc.seed = rng::derive(config.seed, rng::Domain::Noise,
                          {bep_index, static_cast<std::uint64_t>(party),
                           static_cast<std::uint64_t>(choice == Choice::High)});
    return nc;
}

Choice choice_from_char(char c) {
    if (c == 'H' || c == 'h')
        return Choice::High;
    if (c == 'L' || c == 'l')
        return Choice::Low;
    throw Error(ErrorKind::InvalidConfig, std::string("choice must be H or L, got '") + c + "'");
}

} // namespace

std::vector<ChoicePair> parse_schedule(std::string_view text) {
    std::vector<ChoicePair> schedule;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view token = text.substr(start, comma - start);
        if (token.size() != 2)
            throw Error(ErrorKind::InvalidConfig,
                        "schedule entries are two letters such as HL, got '" + std::string(token) +
                            "'");
        schedule.push_back({choice_from_char(token[0]), choice_from_char(token[1])});
        start = comma + 1;
    }
    return schedule;
}

void validate(const BepConfig& config) {
    circuit::validate(config.pair);
    if (config.samples_per_bep < 16)
        throw Error(ErrorKind::InvalidConfig, "samples_per_bep must be >= 16");
    if (config.ensemble_count < 1)
        throw Error(ErrorKind::InvalidConfig, "ensemble_count must be >= 1");
    if (!(config.temperature_k > 0.0) || !std::isfinite(config.temperature_k))
        throw Error(ErrorKind::InvalidConfig, "temperature_k must be positive");
    if (!(config.bandwidth_hz > 0.0) || !std::isfinite(config.bandwidth_hz))
        throw Error(ErrorKind::InvalidConfig, "bandwidth_hz must be positive");
}

ChoicePair draw_choices(const BepConfig& config, std::uint64_t bep_index) {
    if (!config.forced_schedule.empty())
        return config.forced_schedule[bep_index % config.forced_schedule.size()];
    rng::Stream alice(rng::derive(config.seed, rng::Domain::Choice, {bep_index, 0}));
    rng::Stream bob(rng::derive(config.seed, rng::Domain::Choice, {bep_index, 1}));
    return {alice.coin() ? Choice::High : Choice::Low, bob.coin() ? Choice::High : Choice::Low};
}

noise::ScaledNoise synthesize_party_noise(const BepConfig& config, std::uint64_t bep_index,
                                          int party, Choice choice) {
    const auto raw = noise::generate_raw_gaussian(party_noise_config(config, bep_index, party, choice));
    auto series = noise::at_nyquist_step(noise::antialias(raw));
    series.samples.resize(config.samples_per_bep);
    return noise::scale_to_johnson(series, config.pair.resistance(choice), config.temperature_k);
}

circuit::WireRealization realize_wire(const BepConfig& config, std::uint64_t bep_index,
                                      ChoicePair choices) {
    validate(config);
    const double r_a = config.pair.resistance(choices.alice);
    const double r_b = config.pair.resistance(choices.bob);
    const auto u_a = synthesize_party_noise(config, bep_index, 0, choices.alice);
    const auto u_b = synthesize_party_noise(config, bep_index, 1, choices.bob);
    return circuit::superpose_wire(u_a, r_a, u_b, r_b);
}

Choice infer_other(Choice own, LevelClass level) noexcept {
    switch (level) {
    case LevelClass::LL: return Choice::Low;
    case LevelClass::HH: return Choice::High;
    case LevelClass::Secure: break;
    }
    return own == Choice::Low ? Choice::High : Choice::Low;
}

BepResult run_bep(const BepConfig& config, std::uint64_t bep_index) {
    return run_bep(config, bep_index, draw_choices(config, bep_index));
}

BepResult run_bep(const BepConfig& config, std::uint64_t bep_index, ChoicePair choices) {
    const auto wire = realize_wire(config, bep_index, choices);

    BepResult result;
    result.alice_choice = choices.alice;
    result.bob_choice = choices.bob;
    result.measured_ms = circuit::measure_mean_square(wire);
    result.level = circuit::classify_level(result.measured_ms, config.pair, config.temperature_k,
                                           config.bandwidth_hz);
    result.alice_inferred_bob = infer_other(choices.alice, result.level);
    result.bob_inferred_alice = infer_other(choices.bob, result.level);
    if (choices.alice != choices.bob && result.level == LevelClass::Secure)
        result.secure_bit = choices.alice == Choice::High ? Bit{1} : Bit{0};
    return result;
}

std::vector<BepResult> run_beps(const BepConfig& config, std::uint64_t first, std::size_t count,
                                unsigned jobs) {
    validate(config);
    std::vector<BepResult> results(count);
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i)
            results[i] = run_bep(config, first + i);
        return results;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += jobs)
                        results[i] = run_bep(config, first + i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

std::optional<Bit> alice_key_bit(const BepResult& result) noexcept {
    if (result.level != LevelClass::Secure)
        return std::nullopt;
    // Alice holds HL (bit 1) when she is High, LH (bit 0) when she is Low.
    return result.alice_choice == Choice::High ? Bit{1} : Bit{0};
}

std::optional<Bit> bob_key_bit(const BepResult& result) noexcept {
    if (result.level != LevelClass::Secure)
        return std::nullopt;
    return result.bob_inferred_alice == Choice::High ? Bit{1} : Bit{0};
}

bool has_inference_error(const BepResult& result) noexcept {
    return result.alice_inferred_bob != result.bob_choice ||
           result.bob_inferred_alice != result.alice_choice;
}

KeyMaterial accumulate_key(const BepConfig& config, std::size_t target_bits,
                           const AccumulateOptions& options) {
    if (target_bits < 4 || target_bits % 4 != 0)
        throw Error(ErrorKind::LengthNotMultipleOfFour,
                    "key length must be a positive multiple of 4, got " +
                        std::to_string(target_bits));
    validate(config);

    KeyMaterial key;
    std::uint64_t next = options.first_bep_index;
    const unsigned jobs = std::max(1U, options.jobs);
    while (key.bits.size() < target_bits) {
        const std::size_t needed = target_bits - key.bits.size();
        std::size_t batch = jobs == 1 ? 1 : std::max<std::size_t>(2 * needed + 8, jobs);
        if (options.max_beps) {
            if (key.beps_consumed >= *options.max_beps)
                throw Error(ErrorKind::BudgetExceeded,
                            "collected " + std::to_string(key.bits.size()) + " of " +
                                std::to_string(target_bits) + " bits within " +
                                std::to_string(*options.max_beps) + " BEPs");
            batch = std::min(batch, *options.max_beps - key.beps_consumed);
        }
        const auto results = run_beps(config, next, batch, jobs);
        for (const auto& result : results) {
            ++key.beps_consumed;
            if (has_inference_error(result))
                ++key.error_count;
            if (result.secure_bit)
                key.bits.push_back(*result.secure_bit);
            else
                ++key.discarded;
            if (key.bits.size() == target_bits)
                break;
        }
        next += batch;
    }
    key.hex = keycodec::binary_to_hex(key.bits);
    return key;
}

EveView eve_view(const BepConfig& config, const BepResult& result) {
    EveView view;
    view.level = circuit::classify_level(result.measured_ms, config.pair, config.temperature_k,
                                         config.bandwidth_hz);
    // Secure levels are identical for HL and LH; LL and HH carry no key bit.
    view.learned_bit = std::nullopt;
    return view;
}

double eve_constant_guess_accuracy(std::span<const BepResult> results) {
    std::size_t secure = 0;
    std::size_t ones = 0;
    for (const auto& r : results) {
        if (!r.secure_bit)
            continue;
        ++secure;
        ones += *r.secure_bit;
    }
    if (secure == 0)
        throw Error(ErrorKind::EmptyInput, "no secure bits to guess");
    const double p1 = static_cast<double>(ones) / static_cast<double>(secure);
    return std::max(p1, 1.0 - p1);
}

ExchangeReport exchange_report(std::span<const BepResult> results) {
    if (results.empty())
        throw Error(ErrorKind::EmptyInput, "exchange report needs at least one BEP");

    ExchangeReport report;
    report.beps = results.size();
    std::size_t ones = 0;
    double sum_ll = 0.0, sum_mid = 0.0, sum_hh = 0.0;
    std::size_t n_ll = 0, n_mid = 0, n_hh = 0;
    std::vector<double> hl, lh;
    for (const auto& r : results) {
        if (r.secure_bit) {
            ++report.secure_bits;
            ones += *r.secure_bit;
        }
        if (has_inference_error(r))
            ++report.error_count;
        if (r.alice_choice != r.bob_choice) {
            sum_mid += r.measured_ms;
            ++n_mid;
            (r.alice_choice == Choice::High ? hl : lh).push_back(r.measured_ms);
        } else if (r.alice_choice == Choice::Low) {
            sum_ll += r.measured_ms;
            ++n_ll;
        } else {
            sum_hh += r.measured_ms;
            ++n_hh;
        }
    }

    const auto n = static_cast<double>(report.beps);
    report.discard_rate = static_cast<double>(report.beps - report.secure_bits) / n;
    report.bit_balance = report.secure_bits == 0
                             ? kNaN
                             : static_cast<double>(ones) / static_cast<double>(report.secure_bits);
    report.ber = report.secure_bits == 0 ? kNaN
                                         : static_cast<double>(report.error_count) /
                                               static_cast<double>(report.secure_bits);
    report.mean_ms_ll = n_ll ? sum_ll / static_cast<double>(n_ll) : kNaN;
    report.mean_ms_secure = n_mid ? sum_mid / static_cast<double>(n_mid) : kNaN;
    report.mean_ms_hh = n_hh ? sum_hh / static_cast<double>(n_hh) : kNaN;

    if (hl.size() >= 2 && lh.size() >= 2) {
        const double m_hl = noise::mean(hl);
        const double m_lh = noise::mean(lh);
        const double ss = noise::variance(hl) * static_cast<double>(hl.size()) +
                          noise::variance(lh) * static_cast<double>(lh.size());
        const double pooled = std::sqrt(ss / static_cast<double>(hl.size() + lh.size() - 2));
        report.hl_lh_ms_gap = pooled > 0.0 ? std::abs(m_hl - m_lh) / pooled : 0.0;
    } else {
        report.hl_lh_ms_gap = kNaN;
    }
    return report;
}

nlohmann::ordered_json to_json(const BepResult& r) {
    nlohmann::ordered_json j;
    j["alice_choice"] = circuit::to_string(r.alice_choice);
    j["bob_choice"] = circuit::to_string(r.bob_choice);
    j["measured_ms"] = r.measured_ms;
    j["level"] = circuit::to_string(r.level);
    j["secure_bit"] = r.secure_bit ? nlohmann::ordered_json(*r.secure_bit) : nlohmann::ordered_json();
    j["alice_inferred_bob"] = circuit::to_string(r.alice_inferred_bob);
    j["bob_inferred_alice"] = circuit::to_string(r.bob_inferred_alice);
    return j;
}

BepResult bep_result_from_json(const nlohmann::ordered_json& j) {
    BepResult r;
    r.alice_choice = circuit::parse_choice(j.at("alice_choice").get<std::string>());
    r.bob_choice = circuit::parse_choice(j.at("bob_choice").get<std::string>());
    r.measured_ms = j.at("measured_ms").get<double>();
    r.level = circuit::parse_level(j.at("level").get<std::string>());
    if (!j.at("secure_bit").is_null())
        r.secure_bit = j.at("secure_bit").get<Bit>();
    r.alice_inferred_bob = circuit::parse_choice(j.at("alice_inferred_bob").get<std::string>());
    r.bob_inferred_alice = circuit::parse_choice(j.at("bob_inferred_alice").get<std::string>());
    return r;
}

nlohmann::ordered_json to_json(const KeyMaterial& key) {
    nlohmann::ordered_json j;
    j["bits"] = key.bits.to_string();
    j["hex"] = key.hex;
    j["beps_consumed"] = key.beps_consumed;
    j["discarded"] = key.discarded;
    j["error_count"] = key.error_count;
    return j;
}

nlohmann::ordered_json to_json(const ExchangeReport& report) {
    nlohmann::ordered_json j;
    j["beps"] = report.beps;
    j["secure_bits"] = report.secure_bits;
    j["error_count"] = report.error_count;
    j["discard_rate"] = report.discard_rate;
    j["bit_balance"] = report.bit_balance;
    j["ber"] = report.ber;
    j["hl_lh_ms_gap"] = report.hl_lh_ms_gap;
    return j;
}

} // namespace kljn::exchange
