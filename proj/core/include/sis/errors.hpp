#pragma once

#include <stdexcept>
#include <string>

namespace sis {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// UsageError -> 2, FileError -> 3, everything else -> 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad flags, malformed generator strings, out-of-range parameters.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Unreadable or unwritable paths.
class FileError : public Error {
public:
    explicit FileError(const std::string& msg) : Error(msg) {}
};

// The minimal Gramian-symbol eigenvalue over the frequency grid fell below
// the invertibility threshold while computing duals or orthonormalizing.
class NearSingularSymbol : public Error {
public:
    explicit NearSingularSymbol(const std::string& msg) : Error(msg) {}
};

// The shift system failed the Riesz lower-bound check.
class RieszViolation : public Error {
public:
    explicit RieszViolation(const std::string& msg) : Error(msg) {}
};

// A planning constraint (sample-density, delta cap, nu cap) is violated.
// Carries the name of the violated inequality.
class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(const std::string& msg) : Error(msg) {}
};

// Lattice truncation radius too small for the requested cube.
class TruncationTooSmall : public Error {
public:
    explicit TruncationTooSmall(const std::string& msg) : Error(msg) {}
};

// Coefficient window too small: boundary mass exceeds tolerance.
class WindowTooSmall : public Error {
public:
    explicit WindowTooSmall(const std::string& msg) : Error(msg) {}
};

// Eigensolver failure or an eigenvalue outside its provable range.
class EigenFailure : public Error {
public:
    explicit EigenFailure(const std::string& msg) : Error(msg) {}
};

// Index past the stored eigenvector count (or similar).
class IndexOutOfRange : public Error {
public:
    explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

// No eigenvalue reaches the concentration threshold 1 - delta.
class EmptyEigenspace : public Error {
public:
    explicit EmptyEigenspace(const std::string& msg) : Error(msg) {}
};

// Argument outside a formula's domain (e.g. covering tail with a <= R^-n).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A derived constant evaluated to a non-finite value.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// A Monte Carlo diagnostic violated a proven bound. Names the bound.
class DiagnosticFailure : public Error {
public:
    explicit DiagnosticFailure(const std::string& msg) : Error(msg) {}
};

// An internal structural invariant failed (symmetry, PSD range, ...).
class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& msg) : Error(msg) {}
};

}  // namespace sis
