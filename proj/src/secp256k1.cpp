#include "kljn/secp256k1.hpp"

#include "kljn/error.hpp"

namespace kljn::secp256k1 {
namespace {

using U512 = boost::multiprecision::uint512_t;

const U256& p() { return field_prime(); }

U256 add_mod(const U256& a, const U256& b) {
    // a, b < p < 2^256; the sum may carry out of 256 bits, so widen.
    U512 sum = U512(a) + U512(b);
    if (sum >= U512(p()))
        sum -= U512(p());
    return static_cast<U256>(sum);
}

U256 sub_mod(const U256& a, const U256& b) { return a >= b ? U256(a - b) : U256(p() - (b - a)); }

U256 mul_mod(const U256& a, const U256& b) {
    return static_cast<U256>((U512(a) * U512(b)) % U512(p()));
}

U256 pow_mod(U256 base, U256 exponent) {
    U256 result = 1;
    while (exponent != 0) {
        if ((exponent & 1) != 0)
            result = mul_mod(result, base);
        base = mul_mod(base, base);
        exponent >>= 1;
    }
    return result;
}

U256 inv_mod(const U256& a) { return pow_mod(a, p() - 2); }

struct Jacobian {
    U256 x = 0;
    U256 y = 1;
    U256 z = 0; // z == 0 marks infinity
};

Jacobian to_jacobian(const AffinePoint& a) {
    if (a.infinity)
        return {};
    return {a.x, a.y, 1};
}

AffinePoint to_affine(const Jacobian& j) {
    if (j.z == 0)
        return AffinePoint::at_infinity();
    const U256 z_inv = inv_mod(j.z);
    const U256 z_inv2 = mul_mod(z_inv, z_inv);
    return {mul_mod(j.x, z_inv2), mul_mod(j.y, mul_mod(z_inv2, z_inv)), false};
}

// a = 0 doubling (dbl-2009-l).
Jacobian jacobian_double(const Jacobian& q) {
    if (q.z == 0 || q.y == 0)
        return {};
    const U256 a = mul_mod(q.x, q.x);
    const U256 b = mul_mod(q.y, q.y);
    const U256 c = mul_mod(b, b);
    const U256 xb = add_mod(q.x, b);
    U256 d = sub_mod(sub_mod(mul_mod(xb, xb), a), c);
    d = add_mod(d, d);
    const U256 e = add_mod(add_mod(a, a), a);
    const U256 f = mul_mod(e, e);
    Jacobian r;
    r.x = sub_mod(f, add_mod(d, d));
    U256 c8 = add_mod(c, c);
    c8 = add_mod(c8, c8);
    c8 = add_mod(c8, c8);
    r.y = sub_mod(mul_mod(e, sub_mod(d, r.x)), c8);
    const U256 yz = mul_mod(q.y, q.z);
    r.z = add_mod(yz, yz);
    return r;
}

// add-2007-bl, falling back to doubling when both inputs are the same point.
Jacobian jacobian_add(const Jacobian& a, const Jacobian& b) {
    if (a.z == 0)
        return b;
    if (b.z == 0)
        return a;
    const U256 z1z1 = mul_mod(a.z, a.z);
    const U256 z2z2 = mul_mod(b.z, b.z);
    const U256 u1 = mul_mod(a.x, z2z2);
    const U256 u2 = mul_mod(b.x, z1z1);
    const U256 s1 = mul_mod(mul_mod(a.y, b.z), z2z2);
    const U256 s2 = mul_mod(mul_mod(b.y, a.z), z1z1);
    if (u1 == u2)
        return s1 == s2 ? jacobian_double(a) : Jacobian{};
    const U256 h = sub_mod(u2, u1);
    const U256 h2 = add_mod(h, h);
    const U256 i = mul_mod(h2, h2);
    const U256 j = mul_mod(h, i);
    const U256 s_diff = sub_mod(s2, s1);
    const U256 r = add_mod(s_diff, s_diff);
    const U256 v = mul_mod(u1, i);
    Jacobian out;
    out.x = sub_mod(sub_mod(mul_mod(r, r), j), add_mod(v, v));
    const U256 s1j = mul_mod(s1, j);
    out.y = sub_mod(mul_mod(r, sub_mod(v, out.x)), add_mod(s1j, s1j));
    const U256 zsum = add_mod(a.z, b.z);
    out.z = mul_mod(sub_mod(sub_mod(mul_mod(zsum, zsum), z1z1), z2z2), h);
    return out;
}

} // namespace

const U256& field_prime() {
    static const U256 value{"0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F"};
    return value;
}

const U256& group_order() {
    static const U256 value{"0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141"};
    return value;
}

const AffinePoint& generator() {
    static const AffinePoint g{
        U256{"0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798"},
        U256{"0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8"}, false};
    return g;
}

bool on_curve(const AffinePoint& point) {
    if (point.infinity)
        return true;
    if (point.x >= p() || point.y >= p())
        return false;
    const U256 lhs = mul_mod(point.y, point.y);
    const U256 rhs = add_mod(mul_mod(mul_mod(point.x, point.x), point.x), 7);
    return lhs == rhs;
}

AffinePoint negate(const AffinePoint& point) {
    if (point.infinity || point.y == 0)
        return point;
    return {point.x, p() - point.y, false};
}

AffinePoint add(const AffinePoint& a, const AffinePoint& b) {
    return to_affine(jacobian_add(to_jacobian(a), to_jacobian(b)));
}

AffinePoint twice(const AffinePoint& point) { return to_affine(jacobian_double(to_jacobian(point))); }

AffinePoint multiply(const U256& scalar, const AffinePoint& point) {
    Jacobian r0{};
    Jacobian r1 = to_jacobian(point);
    for (int bit = 255; bit >= 0; --bit) {
        if (boost::multiprecision::bit_test(scalar, static_cast<unsigned>(bit))) {
            r0 = jacobian_add(r0, r1);
            r1 = jacobian_double(r1);
        } else {
            r1 = jacobian_add(r0, r1);
            r0 = jacobian_double(r0);
        }
    }
    return to_affine(r0);
}

U256 parse_hex(std::string_view hex) {
    if (hex.empty() || hex.size() > 64)
        throw Error(ErrorKind::InvalidLength, "expected 1 to 64 hex digits");
    U256 value = 0;
    for (char c : hex) {
        unsigned digit = 0;
        if (c >= '0' && c <= '9')
            digit = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            digit = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            digit = static_cast<unsigned>(c - 'A' + 10);
        else
            throw Error(ErrorKind::InvalidHexCharacter, std::string("invalid hex character '") + c + "'");
        value = (value << 4) | digit;
    }
    return value;
}

std::string to_hex(const U256& value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(64, '0');
    U256 v = value;
    for (int i = 63; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[static_cast<unsigned>(v & 0xF)];
        v >>= 4;
    }
    return out;
}

} // namespace kljn::secp256k1
