#ifndef RESOLV_ERRORS_HPP
#define RESOLV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace resolv {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Symbol or argument outside the domain an operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

// Config file failed validation; message carries field/line diagnostics.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Requested codebook exceeds the configured size cap.
class SizeError : public Error {
public:
    using Error::Error;
};

// Exact enumeration would visit more output blocks than the cap allows.
class EnumerationTooLargeError : public Error {
public:
    using Error::Error;
};

// Output distribution has no closed form and no quadrature rule was supplied.
class UnsupportedCompositionError : public Error {
public:
    using Error::Error;
};

// A bound was evaluated outside the hypotheses under which it is valid.
class HypothesisViolationError : public Error {
public:
    using Error::Error;
};

// Parameter search found no point satisfying all constraints.
class InfeasibleParamsError : public Error {
public:
    using Error::Error;
};

// Monte Carlo estimate failed to converge or produced non-finite values.
class EstimationError : public Error {
public:
    using Error::Error;
};

// Exact computation hit a state it should never reach for built-in families
// (e.g. an infinite likelihood ratio in enumeration mode).
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace resolv

#endif
