#include "kljn/error.hpp"

namespace kljn {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidLength: return "InvalidLength";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::NonPositiveResistance: return "NonPositiveResistance";
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ResistanceMismatch: return "ResistanceMismatch";
    case ErrorKind::EmptyRealization: return "EmptyRealization";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::LengthNotMultipleOfFour: return "LengthNotMultipleOfFour";
    case ErrorKind::InvalidHexCharacter: return "InvalidHexCharacter";
    case ErrorKind::KeyOutOfRange: return "KeyOutOfRange";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

} // namespace kljn
