#include "kljn/fft.hpp"

#include "kljn/error.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace kljn::fft {
namespace {

void transform(std::span<std::complex<double>> data, bool inverse_direction) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw Error(ErrorKind::InvalidLength,
                    "transform length " + std::to_string(n) + " is not a power of two");
    if (n == 1)
        return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(data[i], data[j]);
    }

    // Twiddles evaluated directly (no recurrence) so rounding does not grow with n.
    const double sign = inverse_direction ? 1.0 : -1.0;
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
        twiddle[k] = {std::cos(angle), std::sin(angle)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> t = twiddle[k * stride] * data[start + k + half];
                const std::complex<double> u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }

    if (inverse_direction) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& value : data)
            value *= scale;
    }
}

} // namespace

void forward(std::span<std::complex<double>> data) { transform(data, false); }

void inverse(std::span<std::complex<double>> data) { transform(data, true); }

std::vector<std::complex<double>> forward_real(std::span<const double> samples) {
    std::vector<std::complex<double>> spectrum(samples.begin(), samples.end());
    forward(spectrum);
    return spectrum;
}

} // namespace kljn::fft
