#pragma once

#include <stdexcept>
#include <string>

namespace trapres {

// Base of every error the library throws; carries a short machine-readable kind
// so the CLI can emit structured error records.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

class IntegrationError : public Error {
public:
  IntegrationError(const std::string& what, double time)
      : Error("integration-failure", what + " (t=" + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

class SolverError : public Error {
public:
  SolverError(const std::string& what, long iterations)
      : Error("solver", what + " (iterations=" + std::to_string(iterations) + ")"),
        iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

private:
  long iterations_;
};

class RateUncertainError : public Error {
public:
  RateUncertainError(const std::string& what, double exponent, double residual)
      : Error("rate-uncertain", what), exponent_(exponent), residual_(residual) {}
  double exponent() const noexcept { return exponent_; }
  double residual() const noexcept { return residual_; }

private:
  double exponent_;
  double residual_;
};

class DegeneratePointError : public Error {
public:
  explicit DegeneratePointError(const std::string& what) : Error("degenerate-point", what) {}
};

class HorizonTooShortError : public Error {
public:
  HorizonTooShortError(const std::string& what, double tail, double integral)
      : Error("horizon-too-short", what), tail_(tail), integral_(integral) {}
  double tail() const noexcept { return tail_; }
  double integral() const noexcept { return integral_; }

private:
  double tail_;
  double integral_;
};

class NormUncertainError : public Error {
public:
  NormUncertainError(const std::string& what, double last_estimate)
      : Error("norm-uncertain", what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

private:
  double last_estimate_;
};

class CoverageError : public Error {
public:
  explicit CoverageError(const std::string& what) : Error("coverage", what) {}
};

class CapExceededError : public Error {
public:
  CapExceededError(const std::string& what, double h) : Error("cap-exceeded", what), h_(h) {}
  double h() const noexcept { return h_; }

private:
  double h_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

}  // namespace trapres
