#pragma once
#include <stdexcept>
#include <string>

namespace geospread {

/// Rejected argument (counts, fractions, step sizes outside their domain).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// State/config dimension disagreement.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Kinetic energy at or below the configured floor; the 1/T couplings are
/// meaningless there and the caller must not mask the condition.
class SingularKineticEnergy : public std::runtime_error {
public:
    SingularKineticEnergy(double t, double kinetic);
    double time() const { return t_; }
    double kinetic() const { return kinetic_; }

private:
    double t_;
    double kinetic_;
};

class ZeroNormState : public std::runtime_error {
public:
    ZeroNormState() : std::runtime_error("spread state has zero norm") {}
};

class NonFiniteState : public std::runtime_error {
public:
    explicit NonFiniteState(double t);
    double time() const { return t_; }

private:
    double t_;
};

class InsufficientSeries : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace geospread
