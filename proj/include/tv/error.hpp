#pragma once

#include <stdexcept>
#include <string>

namespace tv {

enum class Errc {
    DivisionByZero,
    MixedMode,
    IncompatibleOrders,
    ParseError,
    DuplicateFacet,
    BadPermutation,
    NonOrientable,
    DegenerateGluing,
    MoveNotApplicable,
    BranchingNotFound,
    Disconnected,
    BadLensParameters,
    CocycleInvalid,
    BadRoot,
    NotAGroup,
    NonAbelian,
    InadmissibleBoundary,
    NotACycle,
    RankTraceMismatch,
    NonIntegerDimension,
    ClassMismatch,
    BadSelector,
    GoldenMismatch,
    Internal
};

const char *errc_name(Errc code);

// Errors caused by bad input rather than by a bug in this library.
bool is_domain_error(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &message);
    Errc code() const { return code_; }

private:
    Errc code_;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string &message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

} // namespace tv
