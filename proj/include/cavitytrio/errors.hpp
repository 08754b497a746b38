#pragma once

#include <stdexcept>
#include <string>

namespace cavitytrio {

/// Error conditions raised by the library. Names follow the operation
/// contracts; the CLI maps categories onto process exit codes.
enum class Errc {
    // chain / pump construction
    NegativeRate,
    MissingActive,
    MultipleActive,
    CouplingCountMismatch,
    ExternalExceedsTotal,
    NonPositiveWavelength,
    InvalidChain,
    // steady-state / spectra
    SingularDenominator,
    SingularSubfraction,
    NonDegenerateFrequencies,
    EqualRates,
    ConditionsNotMet,
    NonPositiveRate,
    ZeroCoupling,
    ZeroTransmission,
    NoDip,
    // time integration
    Diverged,
    ToleranceNotMet,
    NotStabilized,
    // eigen-analysis
    NoConvergence,
    RegimeNotCovered,
    NoSignChange,
    DefectiveMatrix,
    // tuning
    BracketExcluded,
    UnstableRegion,
    IterationDiverged,
    // argument contract violations
    InvalidArgument,
};

const char* errc_name(Errc code) noexcept;

/// Coarse grouping used by the CLI: 2 = configuration, 3 = instability,
/// 4 = numerical failure.
int exit_category(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace cavitytrio
