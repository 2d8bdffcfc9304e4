#ifndef COXDEF_ERRORS_HPP
#define COXDEF_ERRORS_HPP

/*
 * Error taxonomy for the coxdef library.
 *
 * Every failure mode the library can signal is a distinct exception type so
 * that callers (and the CLI's exit-code mapping) can dispatch on the class.
 * The three families are:
 *   - input errors: the problem description itself is malformed,
 *   - cap errors: an exact computation would exceed a configured resource cap,
 *   - consistency errors: a mathematical guarantee that holds for genuine
 *     reflection generating sets was violated, which proves the input (or an
 *     internal construction) inconsistent.
 */

#include <stdexcept>
#include <string>

namespace coxdef {

struct CoxdefError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- input errors -----------------------------------------------------------

struct ParseError : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct NotAReflection : CoxdefError {
    int index;  // position of the offending word in the input list
    explicit NotAReflection(int idx, const std::string& what)
        : CoxdefError(what), index(idx) {}
};

// --- cap errors --------------------------------------------------------------

struct FieldTooLarge : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct GroupTooLarge : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct CapTooSmall : CoxdefError {
    using CoxdefError::CoxdefError;
};

// --- domain errors ------------------------------------------------------------

struct NotInField : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct DivisionByZero : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct InfiniteOrderPair : CoxdefError {
    using CoxdefError::CoxdefError;
};

// --- consistency errors -------------------------------------------------------

struct InternalInvariantBroken : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct NotThetaEdge : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct NotTame : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct NotASpecial : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct NotAllTame : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct DegreeNotDecreasing : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct IncompatibleOverlap : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct EdgeNotCovered : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct NotFound : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct HasH3Subset : CoxdefError {
    using CoxdefError::CoxdefError;
};

struct InputInconsistent : CoxdefError {
    using CoxdefError::CoxdefError;
};

}  // namespace coxdef

#endif  // COXDEF_ERRORS_HPP
