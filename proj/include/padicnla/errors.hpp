#pragma once

#include <stdexcept>
#include <string>

namespace padic {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mixing values that live over different primes.
class PrimeMismatch : public Error {
public:
    using Error::Error;
};

/// The requested result is not determined at the available precision
/// (inverting an apparent zero, singular pivot, insufficient digits for a lift).
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// A residue enumeration would exceed the configured point cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// An iterate left its certified domain.
class EscapeError : public Error {
public:
    using Error::Error;
};

/// A computed certificate failed (non-contraction, hyperbolicity violated,
/// Lipschitz budget exceeded, horizon too short).
class CertificateError : public Error {
public:
    using Error::Error;
};

/// Malformed input: bad prime, dimension mismatch, schema violation.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace padic
