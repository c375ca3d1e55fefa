#include "kljn/keycodec.hpp"

#include "kljn/error.hpp"

#include <utility>

namespace kljn::keycodec {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_)
        if (b > 1)
            throw Error(ErrorKind::InvalidConfig, "bit values must be 0 or 1");
}

BitString BitString::parse(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw Error(ErrorKind::InvalidConfig, "bit string contains a non-binary character");
        out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

void BitString::push_back(std::uint8_t bit) {
    if (bit > 1)
        throw Error(ErrorKind::InvalidConfig, "bit values must be 0 or 1");
    bits_.push_back(bit);
}

std::string BitString::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        out[i] = static_cast<char>('0' + bits_[i]);
    return out;
}

std::string binary_to_hex(const BitString& bits) {
    if (bits.size() % 4 != 0)
        throw Error(ErrorKind::LengthNotMultipleOfFour,
                    "bit string length " + std::to_string(bits.size()) + " is not a multiple of 4");
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(bits.size() / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        const unsigned nibble =
            (bits[i] << 3U) | (bits[i + 1] << 2U) | (bits[i + 2] << 1U) | bits[i + 3];
        hex.push_back(kDigits[nibble]);
    }
    return hex;
}

BitString hex_to_binary(std::string_view hex) {
    std::vector<std::uint8_t> bits;
    bits.reserve(hex.size() * 4);
    for (char c : hex) {
        unsigned nibble = 0;
        if (c >= '0' && c <= '9')
            nibble = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            nibble = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            nibble = static_cast<unsigned>(c - 'A' + 10);
        else
            throw Error(ErrorKind::InvalidHexCharacter,
                        std::string("invalid hex character '") + c + "'");
        for (int shift = 3; shift >= 0; --shift)
            bits.push_back(static_cast<std::uint8_t>((nibble >> shift) & 1U));
    }
    return BitString(std::move(bits));
}

} // namespace kljn::keycodec
