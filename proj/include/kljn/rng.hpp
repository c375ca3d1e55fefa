#pragma once

// Seed derivation and portable random variates.
//
// Every random draw in the simulator comes from a substream whose seed is a
// SplitMix64 hash chain over (root seed, domain tag, indices...). Distinct
// domain tags keep coin flips and noise synthesis on disjoint paths, so
// changing how much noise a bit exchange consumes never shifts the coin flips.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kljn::rng {

enum class Domain : std::uint64_t {
    Choice = 0x43484f494345ULL, // "CHOICE"
    Noise = 0x4e4f495345ULL,    // "NOISE"
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Folds `path` into `seed` one word at a time.
std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

std::uint64_t derive(std::uint64_t seed, Domain domain,
                     std::initializer_list<std::uint64_t> path) noexcept;

/// mt19937_64 plus Box-Muller. std::normal_distribution is avoided because its
/// algorithm differs between standard libraries.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open_closed() noexcept;

    double normal() noexcept;

    bool coin() noexcept { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace kljn::rng
