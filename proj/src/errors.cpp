#include "cavitytrio/errors.hpp"

namespace cavitytrio {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NegativeRate: return "NegativeRate";
        case Errc::MissingActive: return "MissingActive";
        case Errc::MultipleActive: return "MultipleActive";
        case Errc::CouplingCountMismatch: return "CouplingCountMismatch";
        case Errc::ExternalExceedsTotal: return "ExternalExceedsTotal";
        case Errc::NonPositiveWavelength: return "NonPositiveWavelength";
        case Errc::InvalidChain: return "InvalidChain";
        case Errc::SingularDenominator: return "SingularDenominator";
        case Errc::SingularSubfraction: return "SingularSubfraction";
        case Errc::NonDegenerateFrequencies: return "NonDegenerateFrequencies";
        case Errc::EqualRates: return "EqualRates";
        case Errc::ConditionsNotMet: return "ConditionsNotMet";
        case Errc::NonPositiveRate: return "NonPositiveRate";
        case Errc::ZeroCoupling: return "ZeroCoupling";
        case Errc::ZeroTransmission: return "ZeroTransmission";
        case Errc::NoDip: return "NoDip";
        case Errc::Diverged: return "Diverged";
        case Errc::ToleranceNotMet: return "ToleranceNotMet";
        case Errc::NotStabilized: return "NotStabilized";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::RegimeNotCovered: return "RegimeNotCovered";
        case Errc::NoSignChange: return "NoSignChange";
        case Errc::DefectiveMatrix: return "DefectiveMatrix";
        case Errc::BracketExcluded: return "BracketExcluded";
        case Errc::UnstableRegion: return "UnstableRegion";
        case Errc::IterationDiverged: return "IterationDiverged";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

int exit_category(Errc code) noexcept {
    switch (code) {
        case Errc::NegativeRate:
        case Errc::MissingActive:
        case Errc::MultipleActive:
        case Errc::CouplingCountMismatch:
        case Errc::ExternalExceedsTotal:
        case Errc::NonPositiveWavelength:
        case Errc::InvalidChain:
        case Errc::NonDegenerateFrequencies:
        case Errc::EqualRates:
        case Errc::ConditionsNotMet:
        case Errc::NonPositiveRate:
        case Errc::ZeroCoupling:
        case Errc::InvalidArgument:
            return 2;
        case Errc::Diverged:
        case Errc::UnstableRegion:
            return 3;
        default:
            return 4;
    }
}

}  // namespace cavitytrio
