#ifndef GALRING_ERROR_HPP
#define GALRING_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace galring {

enum class ErrorCode {
    NotPrime,
    NotIrreducible,
    DegreeMismatch,
    RingMismatch,
    RingTooLarge,
    NotAUnit,
    IndexOutOfRange,
    InternalCardinalityError,
    TraceNotConstant,
    DimensionMismatch,
    WorkBudgetExceeded,
    CyclicGraph,
    PrecisionCapExceeded,
    DivisionByZero,
    ParseError,
    CapExceeded,
    InfeasibleSampling,
    InternalError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::RingTooLarge: return "RingTooLarge";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InternalCardinalityError: return "InternalCardinalityError";
    case ErrorCode::TraceNotConstant: return "TraceNotConstant";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WorkBudgetExceeded: return "WorkBudgetExceeded";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::PrecisionCapExceeded: return "PrecisionCapExceeded";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InfeasibleSampling: return "InfeasibleSampling";
    case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace galring

#endif  // GALRING_ERROR_HPP
