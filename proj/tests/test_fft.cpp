#include "kljn/error.hpp"
#include "kljn/fft.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using cd = std::complex<double>;

TEST(Fft, MatchesNaiveDft) {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1U, 2U, 4U, 8U, 64U, 256U}) {
        std::vector<cd> x(n);
        for (auto& v : x)
            v = {nd(gen), nd(gen)};
        const auto ref = oracle::dft(x);
        auto y = x;
        kljn::fft::forward(y);
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(y[k].real(), static_cast<double>(ref[k].real()), 1e-10 * n);
            EXPECT_NEAR(y[k].imag(), static_cast<double>(ref[k].imag()), 1e-10 * n);
        }
    }
}

TEST(Fft, InverseRoundTrip) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    std::vector<cd> x(1 << 12);
    for (auto& v : x)
        v = {nd(gen), nd(gen)};
    auto y = x;
    kljn::fft::forward(y);
    kljn::fft::inverse(y);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_NEAR(std::abs(y[i] - x[i]), 0.0, 1e-12);
}

TEST(Fft, RealInputHasHermitianSpectrum) {
    std::vector<double> x{1, 2, 3, 4, 0, -1, 5, 2};
    const auto s = kljn::fft::forward_real(x);
    for (std::size_t k = 1; k < 8; ++k)
        EXPECT_NEAR(std::abs(s[k] - std::conj(s[8 - k])), 0.0, 1e-12);
    EXPECT_NEAR(s[0].real(), 16.0, 1e-12);
}

TEST(Fft, RejectsNonPowerOfTwo) {
    std::vector<cd> x(6);
    EXPECT_THROW(kljn::fft::forward(x), kljn::Error);
    std::vector<cd> empty;
    EXPECT_THROW(kljn::fft::inverse(empty), kljn::Error);
}

} // namespace
