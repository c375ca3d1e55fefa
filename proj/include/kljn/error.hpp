#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kljn {

enum class ErrorKind {
    InvalidConfig,
    InvalidLength,
    DegenerateSeries,
    NonPositiveResistance,
    NonPositiveParameter,
    LengthMismatch,
    ResistanceMismatch,
    EmptyRealization,
    EmptyInput,
    BudgetExceeded,
    LengthNotMultipleOfFour,
    InvalidHexCharacter,
    KeyOutOfRange,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported as an Error tagged with its kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace kljn
