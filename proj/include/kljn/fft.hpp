#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kljn::fft {

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) noexcept {
    return n != 0 && (n & (n - 1)) == 0;
}

/// In-place radix-2 transform. Forward uses exp(-2*pi*i*k*n/N) and no scaling;
/// inverse uses exp(+2*pi*i*k*n/N) and scales by 1/N.
/// Throws Error(InvalidLength) unless the size is a power of two.
void forward(std::span<std::complex<double>> data);
void inverse(std::span<std::complex<double>> data);

std::vector<std::complex<double>> forward_real(std::span<const double> samples);

} // namespace kljn::fft
