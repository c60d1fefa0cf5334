#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schottky {

enum class Errc {
    ImaginaryAtNonArch,
    BadResidue,
    ZeroPolynomial,
    InvalidPlace,
    NotNonArchimedean,
    DegenerateTriple,
    NotLoxodromic,
    DegenerateConfiguration,
    PoleInsideDisc,
    GeneratorFixesInfinity,
    DiscsNotDisjoint,
    NotInSB,
    RadiiOutOfWindow,
    BudgetExceeded,
    ChartMismatch,
    ArchimedeanUnsupported,
    DegenerateFixedPoints,
    FormalMultiplier,
    InvalidFigure,
    MalformedInput,
};

constexpr std::string_view errc_name(Errc e) noexcept {
    switch (e) {
    case Errc::ImaginaryAtNonArch: return "ImaginaryAtNonArch";
    case Errc::BadResidue: return "BadResidue";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::InvalidPlace: return "InvalidPlace";
    case Errc::NotNonArchimedean: return "NotNonArchimedean";
    case Errc::DegenerateTriple: return "DegenerateTriple";
    case Errc::NotLoxodromic: return "NotLoxodromic";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::PoleInsideDisc: return "PoleInsideDisc";
    case Errc::GeneratorFixesInfinity: return "GeneratorFixesInfinity";
    case Errc::DiscsNotDisjoint: return "DiscsNotDisjoint";
    case Errc::NotInSB: return "NotInSB";
    case Errc::RadiiOutOfWindow: return "RadiiOutOfWindow";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ChartMismatch: return "ChartMismatch";
    case Errc::ArchimedeanUnsupported: return "ArchimedeanUnsupported";
    case Errc::DegenerateFixedPoints: return "DegenerateFixedPoints";
    case Errc::FormalMultiplier: return "FormalMultiplier";
    case Errc::InvalidFigure: return "InvalidFigure";
    case Errc::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace schottky
