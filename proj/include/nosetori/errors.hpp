#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nosetori {

/// A state or parameter lies outside the region where the model is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid or inconsistent experiment/model configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested temperature lies outside T(J); carries the admissible range.
class NoSolution : public std::runtime_error {
public:
    NoSolution(const std::string& what, double t_min, double t_max)
        : std::runtime_error(what), t_min_(t_min), t_max_(t_max) {}

    double t_min() const noexcept { return t_min_; }
    double t_max() const noexcept { return t_max_; }

private:
    double t_min_;
    double t_max_;
};

/// The reduced Hessian at an equilibrium is not positive definite.
class HessianIndefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A domain error raised while integrating, tagged with the failing step.
class IntegrationError : public DomainError {
public:
    IntegrationError(const std::string& what, std::size_t step)
        : DomainError(what + " (at step " + std::to_string(step) + ")"), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class SpectrumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nosetori
