#pragma once

#include <stdexcept>
#include <string>

namespace aoicontract {

/// Argument outside the domain of a model function (e.g. theta <= a*t).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The provider performance g(f) is not positive, so log(g) is undefined.
class NonpositivePerformance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No grid frequency yields a positive performance for some type or bunch.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario or CLI configuration. The message carries the key path.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace aoicontract
