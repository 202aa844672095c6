#include "tv/error.hpp"

namespace tv {

const char *errc_name(Errc code)
{
    switch (code) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::MixedMode: return "MixedMode";
    case Errc::IncompatibleOrders: return "IncompatibleOrders";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateFacet: return "DuplicateFacet";
    case Errc::BadPermutation: return "BadPermutation";
    case Errc::NonOrientable: return "NonOrientable";
    case Errc::DegenerateGluing: return "DegenerateGluing";
    case Errc::MoveNotApplicable: return "MoveNotApplicable";
    case Errc::BranchingNotFound: return "BranchingNotFound";
    case Errc::Disconnected: return "Disconnected";
    case Errc::BadLensParameters: return "BadLensParameters";
    case Errc::CocycleInvalid: return "CocycleInvalid";
    case Errc::BadRoot: return "BadRoot";
    case Errc::NotAGroup: return "NotAGroup";
    case Errc::NonAbelian: return "NonAbelian";
    case Errc::InadmissibleBoundary: return "InadmissibleBoundary";
    case Errc::NotACycle: return "NotACycle";
    case Errc::RankTraceMismatch: return "RankTraceMismatch";
    case Errc::NonIntegerDimension: return "NonIntegerDimension";
    case Errc::ClassMismatch: return "ClassMismatch";
    case Errc::BadSelector: return "BadSelector";
    case Errc::GoldenMismatch: return "GoldenMismatch";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

bool is_domain_error(Errc code)
{
    switch (code) {
    case Errc::RankTraceMismatch:
    case Errc::NonIntegerDimension:
    case Errc::NotAGroup:
    case Errc::GoldenMismatch:
    case Errc::Internal:
        return false;
    default:
        return true;
    }
}

Error::Error(Errc code, const std::string &message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code)
{
}

ParseError::ParseError(int line, int column, const std::string &message)
    : Error(Errc::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column)
{
}

} // namespace tv
