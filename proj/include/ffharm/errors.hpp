#ifndef FFHARM_ERRORS_HPP
#define FFHARM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ffharm {

enum class Errc {
    NotPrime,
    ZeroDirection,
    DegenerateDenominator,
    BudgetExceeded,
    Inadmissible,
    ArityMismatch,
    MissingPhi,
    InsufficientLadder,
    EmptySuite,
    NonIndependentPolys,
    InvalidSystem,
    InvalidWeight,
    NumericalCheck,
    ParseError,
    IoError,
};

inline const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::ZeroDirection: return "ZeroDirection";
        case Errc::DegenerateDenominator: return "DegenerateDenominator";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::Inadmissible: return "Inadmissible";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::MissingPhi: return "MissingPhi";
        case Errc::InsufficientLadder: return "InsufficientLadder";
        case Errc::EmptySuite: return "EmptySuite";
        case Errc::NonIndependentPolys: return "NonIndependentPolys";
        case Errc::InvalidSystem: return "InvalidSystem";
        case Errc::InvalidWeight: return "InvalidWeight";
        case Errc::NumericalCheck: return "NumericalCheck";
        case Errc::ParseError: return "ParseError";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
   public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

   private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ffharm

#endif
