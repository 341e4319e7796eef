#pragma once

#include <stdexcept>
#include <string>

namespace cfmm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its documented invariant.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A price lies outside the payoff's interval.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The payoff derivative was requested at a kink or jump.
class BreakpointError : public Error {
public:
    using Error::Error;
};

/// Malformed payoff document. `line()` is 0 when the error is not tied to a line.
class PayoffFormatError : public Error {
public:
    PayoffFormatError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class MonotonicityError : public Error {
public:
    using Error::Error;
};

class NegativePayoffError : public Error {
public:
    using Error::Error;
};

/// The risky reserve needed to replicate the payoff is unbounded.
class InfiniteReplicationCost : public Error {
public:
    using Error::Error;
};

/// Quadrature failed to converge because the integral does not decay.
class DivergentIntegral : public Error {
public:
    using Error::Error;
};

/// Reserves outside the trading function's valid range.
class InvalidReserves : public Error {
public:
    using Error::Error;
};

/// The trading function (or its infimum) is minus infinity at these reserves.
class UnboundedBelow : public Error {
public:
    using Error::Error;
};

}  // namespace cfmm
