#pragma once

// Reference computations kept independent of the library: long double for the
// Johnson formulas, GMP affine arithmetic for the curve, an O(N^2) DFT.

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace oracle {

constexpr long double kBoltzmann = 1.38e-23L;

long double johnson_ms(long double r, long double t, long double b);
long double parallel(long double a, long double b);

struct Levels {
    long double ll, mid, hh;
};
Levels levels(long double rh, long double rl, long double t, long double b);

std::vector<std::complex<long double>> dft(const std::vector<std::complex<double>>& x);

std::string bits_to_hex(const std::string& bits);

struct Point {
    mpz_class x, y;
    bool inf = true;
};

const mpz_class& p();
const mpz_class& n();
Point g();
Point add(const Point& a, const Point& b);
Point mul(mpz_class k, Point pt);
bool on_curve(const Point& pt);
/// Recovers y from a 33-byte compressed encoding (66 hex chars).
Point decompress(const std::string& hex);
std::string hex64(const mpz_class& v);

} // namespace oracle
