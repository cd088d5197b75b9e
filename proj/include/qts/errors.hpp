#pragma once
#include <stdexcept>
#include <string>

namespace qts {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& m) : std::runtime_error(m) {}
};
struct EstimationError : std::runtime_error {
  explicit EstimationError(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateDataError : std::runtime_error {
  explicit DegenerateDataError(const std::string& m) : std::runtime_error(m) {}
};
struct OptimError : std::runtime_error {
  explicit OptimError(const std::string& m) : std::runtime_error(m) {}
};
struct UnsupportedGateError : std::runtime_error {
  explicit UnsupportedGateError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace qts
