#include "kljn/rng.hpp"

#include <cmath>
#include <numbers>

namespace kljn::rng {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t word : path)
        h = splitmix64(h ^ splitmix64(word + 0x632be59bd9b4e019ULL));
    return h;
}

std::uint64_t derive(std::uint64_t seed, Domain domain,
                     std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = derive(seed, {static_cast<std::uint64_t>(domain)});
    for (std::uint64_t word : path)
        h = splitmix64(h ^ splitmix64(word + 0x632be59bd9b4e019ULL));
    return h;
}

double Stream::uniform_open_closed() noexcept {
    // (k + 1) / 2^53 for k in [0, 2^53)
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Stream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open_closed();
    const double u2 = uniform_open_closed();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

} // namespace kljn::rng
