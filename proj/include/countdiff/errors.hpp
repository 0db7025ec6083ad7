#ifndef COUNTDIFF_ERRORS_HPP
#define COUNTDIFF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace countdiff {

/// Base class of every error raised by the library. `kind()` is the stable
/// identifier printed by the command line tool.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string &what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define COUNTDIFF_DEFINE_ERROR(Name)                                                               \
    class Name : public Error {                                                                    \
    public:                                                                                        \
        explicit Name(const std::string &what) : Error(#Name, what) {}                             \
    };

// polynomial arithmetic
COUNTDIFF_DEFINE_ERROR(ConstantPolynomial)
COUNTDIFF_DEFINE_ERROR(NotReducible)
COUNTDIFF_DEFINE_ERROR(ZeroInput)
COUNTDIFF_DEFINE_ERROR(ConstantInV)
COUNTDIFF_DEFINE_ERROR(InexactDivision)

// counting ring
COUNTDIFF_DEFINE_ERROR(NegativeExponent)
COUNTDIFF_DEFINE_ERROR(HasAleph)
COUNTDIFF_DEFINE_ERROR(NotIntegerValued)

// sigma systems and decompositions
COUNTDIFF_DEFINE_ERROR(ConstantMember)
COUNTDIFF_DEFINE_ERROR(NotWeaklyTriangular)
COUNTDIFF_DEFINE_ERROR(UncertifiedSystem)
COUNTDIFF_DEFINE_ERROR(ZeroPolynomial)
COUNTDIFF_DEFINE_ERROR(CoefficientNotReducible)
COUNTDIFF_DEFINE_ERROR(InvalidSystem)
COUNTDIFF_DEFINE_ERROR(DecompositionLimit)

// differential layer
COUNTDIFF_DEFINE_ERROR(PoleAtExpansionPoint)
COUNTDIFF_DEFINE_ERROR(NotSimple)
COUNTDIFF_DEFINE_ERROR(VanishingInitialOrSeparant)
COUNTDIFF_DEFINE_ERROR(DegreeExceedsN)
COUNTDIFF_DEFINE_ERROR(LeaderSetTooLarge)
COUNTDIFF_DEFINE_ERROR(FitFailure)

#undef COUNTDIFF_DEFINE_ERROR

/// Raised by the text parsers; carries a 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column)
        : Error("ParseError", "line " + std::to_string(line) + ", column " +
                                  std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace countdiff

#endif // COUNTDIFF_ERRORS_HPP
