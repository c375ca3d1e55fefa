#include "kljn/circuit.hpp"

#include "kljn/error.hpp"

#include <cmath>
#include <string>

namespace kljn::circuit {
namespace {

void require_resistance(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw Error(ErrorKind::NonPositiveResistance, "resistance must be positive and finite");
}

void require_parameter(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(ErrorKind::NonPositiveParameter, std::string(name) + " must be positive");
}

bool same_resistance(double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(a); }

} // namespace

std::string_view to_string(Choice choice) noexcept {
    return choice == Choice::High ? "High" : "Low";
}

std::string_view to_string(LevelClass level) noexcept {
    switch (level) {
    case LevelClass::LL: return "LL";
    case LevelClass::Secure: return "Secure";
    case LevelClass::HH: return "HH";
    }
    return "?";
}

Choice parse_choice(std::string_view text) {
    if (text == "High" || text == "H")
        return Choice::High;
    if (text == "Low" || text == "L")
        return Choice::Low;
    throw Error(ErrorKind::InvalidConfig, "unknown resistor choice '" + std::string(text) + "'");
}

LevelClass parse_level(std::string_view text) {
    if (text == "LL")
        return LevelClass::LL;
    if (text == "Secure")
        return LevelClass::Secure;
    if (text == "HH")
        return LevelClass::HH;
    throw Error(ErrorKind::InvalidConfig, "unknown level class '" + std::string(text) + "'");
}

void validate(const ResistorPair& pair) {
    if (!(pair.r_low_ohm > 0.0) || !(pair.r_high_ohm > pair.r_low_ohm) ||
        !std::isfinite(pair.r_high_ohm))
        throw Error(ErrorKind::InvalidConfig, "resistor pair must satisfy r_high > r_low > 0");
}

double parallel_resistance(double r_a_ohm, double r_b_ohm) {
    require_resistance(r_a_ohm);
    require_resistance(r_b_ohm);
    return r_a_ohm * r_b_ohm / (r_a_ohm + r_b_ohm);
}

double theoretical_mean_square(double r_a_ohm, double r_b_ohm, double temperature_k,
                               double bandwidth_hz) {
    const double r_p = parallel_resistance(r_a_ohm, r_b_ohm);
    require_parameter(temperature_k, "temperature_k");
    require_parameter(bandwidth_hz, "bandwidth_hz");
    return 4.0 * noise::kBoltzmann * temperature_k * r_p * bandwidth_hz;
}

WireRealization superpose_wire(const noise::ScaledNoise& noise_a, double r_a_ohm,
                               const noise::ScaledNoise& noise_b, double r_b_ohm) {
    require_resistance(r_a_ohm);
    require_resistance(r_b_ohm);
    const auto& u_a = noise_a.series.samples;
    const auto& u_b = noise_b.series.samples;
    if (u_a.size() != u_b.size())
        throw Error(ErrorKind::LengthMismatch, "generator sample streams differ in length");
    if (!same_resistance(r_a_ohm, noise_a.resistance_ohm) ||
        !same_resistance(r_b_ohm, noise_b.resistance_ohm))
        throw Error(ErrorKind::ResistanceMismatch,
                    "resistance does not match the noise generator's scaling");

    const double loop = r_a_ohm + r_b_ohm;
    WireRealization wire;
    wire.sample_period_s = noise_a.series.sample_period_s;
    wire.u_w.resize(u_a.size());
    wire.i_w.resize(u_a.size());
    for (std::size_t t = 0; t < u_a.size(); ++t) {
        wire.u_w[t] = (u_a[t] * r_b_ohm + u_b[t] * r_a_ohm) / loop;
        wire.i_w[t] = (u_a[t] - u_b[t]) / loop;
    }
    return wire;
}

double measure_mean_square(const WireRealization& realization) {
    if (realization.u_w.empty())
        throw Error(ErrorKind::EmptyRealization, "wire realization has no samples");
    return noise::mean_square(realization.u_w);
}

Levels theoretical_levels(const ResistorPair& pair, double temperature_k, double bandwidth_hz) {
    validate(pair);
    Levels levels;
    levels.ll = theoretical_mean_square(pair.r_low_ohm, pair.r_low_ohm, temperature_k, bandwidth_hz);
    levels.mid =
        theoretical_mean_square(pair.r_high_ohm, pair.r_low_ohm, temperature_k, bandwidth_hz);
    levels.hh =
        theoretical_mean_square(pair.r_high_ohm, pair.r_high_ohm, temperature_k, bandwidth_hz);
    levels.lower_threshold = std::sqrt(levels.ll * levels.mid);
    levels.upper_threshold = std::sqrt(levels.mid * levels.hh);
    return levels;
}

LevelClass classify_level(double mean_square_v2, const Levels& levels) noexcept {
    if (mean_square_v2 < levels.lower_threshold)
        return LevelClass::LL;
    if (mean_square_v2 > levels.upper_threshold)
        return LevelClass::HH;
    return LevelClass::Secure;
}

LevelClass classify_level(double mean_square_v2, const ResistorPair& pair, double temperature_k,
                          double bandwidth_hz) {
    return classify_level(mean_square_v2, theoretical_levels(pair, temperature_k, bandwidth_hz));
}

} // namespace kljn::circuit
