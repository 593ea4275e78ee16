#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cphase {

/// Invalid user-facing parameter (non-positive width, unknown shape, bad range).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A call outside an operation's domain of validity, e.g. asking for the
/// lossless phase of a lossy emitter.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Quadrature refinement ran out of levels before meeting its tolerance.
/// Carries the last two estimates so callers can judge how far off it was.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, std::complex<double> previous,
                        std::complex<double> latest)
        : std::runtime_error(what), previous_(previous), latest_(latest) {}

    std::complex<double> previous() const { return previous_; }
    std::complex<double> latest() const { return latest_; }

private:
    std::complex<double> previous_;
    std::complex<double> latest_;
};

} // namespace cphase
