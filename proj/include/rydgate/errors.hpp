#pragma once

#include <stdexcept>
#include <string>

namespace rydgate {

// Invalid physical or configuration parameter. `key` names the offending field.
class ValidationError : public std::invalid_argument {
  public:
    ValidationError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

// Evaluation at a point where the requested branch or formula is undefined
// (omega_e = 0, omega_e = V/2, V = 2 omega_e, ...).
class CriticalPointError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Out-of-domain intermediate in a closed-form expression.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Adaptive integrator could not make progress.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(double t, const std::string& what)
        : std::runtime_error(what + " (t = " + std::to_string(t) + ")"), t_(t) {}
    double time() const noexcept { return t_; }

  private:
    double t_;
};

// Root finder could not locate a sign change (or every candidate segment
// failed to converge).
class BracketError : public std::runtime_error {
  public:
    BracketError(const std::string& what, double f_lo, double f_hi)
        : std::runtime_error(what), f_lo_(f_lo), f_hi_(f_hi) {}
    double f_lo() const noexcept { return f_lo_; }
    double f_hi() const noexcept { return f_hi_; }

  private:
    double f_lo_;
    double f_hi_;
};

}  // namespace rydgate
