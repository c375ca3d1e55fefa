#pragma once

// secp256k1: y^2 = x^3 + 7 over F_p. Field elements are fixed-width 256-bit
// integers kept fully reduced; points are affine at the interface and
// Jacobian internally.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace kljn::secp256k1 {

using U256 = boost::multiprecision::uint256_t;

const U256& field_prime();
const U256& group_order();

struct AffinePoint {
    U256 x = 0;
    U256 y = 0;
    bool infinity = false;

    static AffinePoint at_infinity() { return {0, 0, true}; }
    friend bool operator==(const AffinePoint&, const AffinePoint&) = default;
};

const AffinePoint& generator();

bool on_curve(const AffinePoint& point);

AffinePoint negate(const AffinePoint& point);
AffinePoint add(const AffinePoint& a, const AffinePoint& b);
AffinePoint twice(const AffinePoint& point);

/// k * P by a Montgomery ladder: one add and one double per scalar bit,
/// over all 256 bits regardless of the scalar's value.
AffinePoint multiply(const U256& scalar, const AffinePoint& point);

/// Parses up to 64 hex digits (no prefix) as a big-endian integer.
U256 parse_hex(std::string_view hex);
/// 64 lowercase hex digits, zero-padded.
std::string to_hex(const U256& value);

} // namespace kljn::secp256k1
