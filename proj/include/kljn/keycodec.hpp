#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kljn::keycodec {

/// Ordered sequence of bits, first bit first.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> bits);

    /// Parses a string of '0' / '1'; anything else is InvalidConfig.
    static BitString parse(std::string_view text);

    void push_back(std::uint8_t bit);
    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
    [[nodiscard]] std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    [[nodiscard]] const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Each 4-bit group, most significant bit first, becomes one lowercase hex digit.
/// Throws LengthNotMultipleOfFour.
std::string binary_to_hex(const BitString& bits);

/// Accepts upper and lower case. Throws InvalidHexCharacter.
BitString hex_to_binary(std::string_view hex);

} // namespace kljn::keycodec
