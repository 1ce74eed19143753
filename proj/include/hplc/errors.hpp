#ifndef HPLC_ERRORS_HPP
#define HPLC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hplc {

/// Argument outside the documented range of an operation.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Special function evaluated outside its domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Relay with zero gain or zero transmit power; the relay-hop MGF is undefined.
class DegenerateRelayError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical procedure failed to converge. Carries the best estimate reached.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double partial, double error_estimate)
        : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}

    double partial() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

}  // namespace hplc

#endif  // HPLC_ERRORS_HPP
