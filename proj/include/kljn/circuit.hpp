#pragma once

// The KLJN loop: two parties, each connecting one resistor (with its Johnson
// noise generator in series) to a shared ideal wire.

#include "kljn/noise.hpp"

#include <string_view>
#include <vector>

namespace kljn::circuit {

enum class Choice { Low, High };

enum class LevelClass { LL, Secure, HH };

std::string_view to_string(Choice choice) noexcept;
std::string_view to_string(LevelClass level) noexcept;
Choice parse_choice(std::string_view text);
LevelClass parse_level(std::string_view text);

struct ResistorPair {
    double r_high_ohm = 100e3;
    double r_low_ohm = 10e3;

    [[nodiscard]] double resistance(Choice choice) const noexcept {
        return choice == Choice::High ? r_high_ohm : r_low_ohm;
    }
};

/// Throws Error(InvalidConfig) unless r_high_ohm > r_low_ohm > 0.
void validate(const ResistorPair& pair);

struct WireRealization {
    std::vector<double> u_w; // V
    std::vector<double> i_w; // A, positive from Alice to Bob
    double sample_period_s = 0.0;
};

double parallel_resistance(double r_a_ohm, double r_b_ohm);

/// 4 k T R_p B, V^2.
double theoretical_mean_square(double r_a_ohm, double r_b_ohm, double temperature_k,
                               double bandwidth_hz);

/// Loop solution for two voltage generators with source resistances r_a, r_b:
///   u_w = (U_A r_b + U_B r_a) / (r_a + r_b),  i_w = (U_A - U_B) / (r_a + r_b).
WireRealization superpose_wire(const noise::ScaledNoise& noise_a, double r_a_ohm,
                               const noise::ScaledNoise& noise_b, double r_b_ohm);

double measure_mean_square(const WireRealization& realization);

/// Theoretical LL < mid < HH levels and the geometric-mean thresholds between them.
struct Levels {
    double ll = 0.0;
    double mid = 0.0;
    double hh = 0.0;
    double lower_threshold = 0.0;
    double upper_threshold = 0.0;
};

Levels theoretical_levels(const ResistorPair& pair, double temperature_k, double bandwidth_hz);

LevelClass classify_level(double mean_square_v2, const Levels& levels) noexcept;
LevelClass classify_level(double mean_square_v2, const ResistorPair& pair, double temperature_k,
                          double bandwidth_hz);

} // namespace kljn::circuit
