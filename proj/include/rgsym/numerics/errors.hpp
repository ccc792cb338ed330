#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace rgsym {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NoSignChange : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

// Step size collapsed; carries the last accepted state.
class StepUnderflow : public Error {
public:
    StepUnderflow(const std::string& what, double a, std::vector<double> state)
        : Error(what), param(a), last_state(std::move(state)) {}
    double param;
    std::vector<double> last_state;
};

class MultivaluedRegion : public Error {
public:
    using Error::Error;
};

class RootNotFound : public Error {
public:
    using Error::Error;
};

class CharacteristicCrossing : public Error {
public:
    using Error::Error;
};

class BranchLoss : public Error {
public:
    using Error::Error;
};

class StencilOutOfDomain : public Error {
public:
    using Error::Error;
};

class Wavebreaking : public Error {
public:
    using Error::Error;
};

class NoSingularity : public Error {
public:
    using Error::Error;
};

class CausticCrossed : public Error {
public:
    using Error::Error;
};

class GridTooSmall : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rgsym
