#pragma once

#include <stdexcept>
#include <string>

namespace rlct {

// Library-wide exception. The kind tag lets callers (and tests) discriminate
// failure modes without parsing message text.
class Error : public std::runtime_error {
public:
    enum class Kind {
        DivisionByZeroConstantTerm,
        NonPositiveConstantTerm,
        ExactLogOfNonUnit,
        DimensionMismatch,
        IndexOutOfRange,
        SyntaxError,
        UnknownParameter,
        DuplicateOutcome,
        NonIntegerExponent,
        OutcomeOutsideSupport,
        SupportMismatch,
        BasisNotIndependent,
        NotSemiRegular,
        CapExceeded,
        OrderTooHigh,
        InvalidDims,
        WrongDimension,
        InvalidWeights,
        MismatchDetected,
        InconsistentVerifications,
        ZeroPolynomial,
        GridUnderflow,
        DimensionTooHigh,
        Internal,
    };

    Error(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Parse failures additionally carry a source location (1-based).
class ParseError : public Error {
public:
    ParseError(Kind kind, const std::string& message, int line, int column)
        : Error(kind, message + " (line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace rlct
