#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ladder {

enum class ErrorKind {
    InvalidArgument,
    BandEdge,
    ScatteringSingular,
    FormulaMismatch,
    GammaSingular,
    RoutingDomain,
    SolveSingular,
    PacketClipped,
    SpecInvalid,
    UnknownFigure,
    IoError,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::BandEdge: return "BandEdge";
        case ErrorKind::ScatteringSingular: return "ScatteringSingular";
        case ErrorKind::FormulaMismatch: return "FormulaMismatch";
        case ErrorKind::GammaSingular: return "GammaSingular";
        case ErrorKind::RoutingDomain: return "RoutingDomain";
        case ErrorKind::SolveSingular: return "SolveSingular";
        case ErrorKind::PacketClipped: return "PacketClipped";
        case ErrorKind::SpecInvalid: return "SpecInvalid";
        case ErrorKind::UnknownFigure: return "UnknownFigure";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every computation failure in the library is reported through this type.
/// `kind()` is stable and is what the CLI prints on the diagnostic stream.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind), message_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }
    /// The description without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace ladder
